#pragma once

// Exact Bellman recursion over (closed, partial, y) with memoization, an
// optional pruned mode that trusts the structural rules, and visit-weighted
// instrumentation of where those rules fire.

#include <cstdint>
#include <optional>

#include <absl/container/flat_hash_map.h>

#include "psi/problem.hpp"

namespace psi {

inline constexpr int kMaxDpBoxes = 24;

/// Structural rule that determines the action at a state, in the order the
/// pruned solver tries them.
enum class Rule : std::uint8_t {
  None,
  Stopping,   // myopic stopping condition
  SingleBox,  // one box left: single-box rule
  LeaderF,    // leading threshold is an F-threshold: full-open the leader
  LeaderP,    // leading box is well classified: partially open it
};

struct RuleHit {
  Rule rule = Rule::None;
  Action action;
};

bool stopping_optimal(const Problem& pb, const SearchState& s);
std::optional<int> leader_f_rule(const Problem& pb, const SearchState& s);
std::optional<int> leader_p_rule(const Problem& pb, const SearchState& s);
RuleHit classify(const Problem& pb, const SearchState& s);

struct DpStats {
  std::uint64_t states_created = 0;
  std::uint64_t states_revisited = 0;
  // Visit-weighted counts (a state counts once per time the recursion reaches it).
  std::uint64_t visits = 0;
  std::uint64_t visits_stopping = 0;
  std::uint64_t visits_single = 0;
  std::uint64_t visits_thm2 = 0;
  std::uint64_t visits_thm3 = 0;
  std::uint64_t visits_f_optimal = 0;      // chosen action full-opens a closed box
  std::uint64_t visits_f_caught = 0;       // ... and the leader-F rule fired
  std::uint64_t visits_p_optimal = 0;      // chosen action partially opens
  std::uint64_t visits_p_caught = 0;       // ... and the leader-P rule fired
  std::uint64_t rule_conflicts = 0;        // states whose rule action is strictly suboptimal (full mode only)

  double frac(std::uint64_t part) const { return visits ? double(part) / double(visits) : 0.0; }
  double frac_thm1() const { return frac(visits_stopping + visits_single); }
  double frac_thm2() const { return frac(visits_thm2); }
  double frac_thm3() const { return frac(visits_thm3); }
  double frac_overall() const { return frac(visits_stopping + visits_single + visits_thm2 + visits_thm3); }
  double recall_thm2() const { return visits_f_optimal ? double(visits_f_caught) / double(visits_f_optimal) : 1.0; }
  double recall_thm3() const { return visits_p_optimal ? double(visits_p_caught) / double(visits_p_optimal) : 1.0; }
};

struct MemoEntry {
  double value = 0.0;
  Action action;
  Rule rule = Rule::None;
  std::uint32_t visits = 0;
};

/// Memoized solver; one instance per thread. The memo lives as long as the
/// solver.
class Solver {
 public:
  Solver(const Problem& pb, bool prune);

  /// Optimal value of s (computed on demand). Counts as one visit.
  double value(const SearchState& s);
  /// Chosen optimal action at s (computed on demand).
  Action action(const SearchState& s);
  /// -cost + expected optimal continuation of taking a in s.
  double q_value(const SearchState& s, const Action& a);

  const Problem& problem() const { return pb_; }
  bool pruned() const { return prune_; }
  const DpStats& stats() const { return stats_; }
  const MemoEntry* find(const SearchState& s) const;

  /// Memoized states in ascending key order.
  std::vector<SearchState> states() const;

 private:
  double solve_state(const SearchState& s, StateKey key);

  const Problem& pb_;
  bool prune_;
  absl::flat_hash_map<StateKey, MemoEntry, StateKeyHash> memo_;
  DpStats stats_;
};

struct Solution {
  double root_value = 0.0;
  Action root_action;
  DpStats stats;
};

Solution solve(const Problem& pb, bool prune);

}  // namespace psi
