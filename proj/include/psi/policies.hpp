#pragma once

// Heuristic and committing policies, plus the online threshold algorithm.

#include <functional>
#include <vector>

#include "psi/problem.hpp"

namespace psi {

/// Deterministic Markov policy.
using PolicyFn = std::function<Action(const SearchState&)>;

/// First opening mode of every box: boxes in p_set are partially opened
/// first, all others fully opened directly.
struct Partition {
  BoxSet p_set = 0;

  BoxSet f_set(int n) const { return all_boxes(n) & ~p_set; }
  Partition flipped(int n) const { return {f_set(n)}; }
  static Partition all_full() { return {0}; }
  static Partition all_partial(int n) { return {all_boxes(n)}; }
};

/// Acts on the largest of y (stop), sigma^F / sigma^P of closed boxes and
/// sigma^{F|t} of partial boxes. Ties: stop, then F, then P, then lowest id.
Action index_action(const Problem& pb, const SearchState& s);

/// Runs the single-box rule on the box with the largest myopic gain.
Action stp_action(const Problem& pb, const SearchState& s);

/// One-step lookahead with Whittle's integral as the continuation value.
Action whittle_lookahead_action(const Problem& pb, const SearchState& s);

/// Committing policy: act on the largest committed threshold, stop once y
/// reaches it.
Action committing_action(const Problem& pb, Partition part, const SearchState& s);

/// E[max{0, max_F K_i, max_P K~_i}]
double committing_value_closed_form(const Problem& pb, Partition part);

struct CommittingPick {
  Partition partition;
  double value = 0.0;
};

inline constexpr int kMaxEnumBoxes = 20;

/// Exhaustive search over all 2^N partitions. Ties go to the smallest F-mask.
CommittingPick best_committing(const Problem& pb, int threads = 1);

/// Better of the partition and its flip; the given one on ties.
CommittingPick half_apx_pick(const Problem& pb, Partition part);

/// Smallest support value tau of K_m = max{0, max_F K_i, max_P K~_i} with
/// P[K_m > tau] <= 1/2. The 0 stands for taking nothing, so tau >= 0.
double median_tau(const Problem& pb, Partition part);

/// Median threshold with a tie probability q: a box whose capped value
/// equals tau counts as exceeding it with probability q, independently across
/// boxes, and q makes P[some box exceeds tau] = 1/2. q = 0 when K_m has no
/// atom at tau that matters.
struct MedianThreshold {
  double tau = 0.0;
  double tie = 0.0;
};

MedianThreshold median_threshold(const Problem& pb, Partition part);

/// Exact expected profit of the online threshold algorithm on the given
/// presentation order. Openings and selections strictly above tau always
/// happen; those exactly at tau happen on a per-box coin of probability
/// `tie` (tie = 0 gives the purely strict rule).
double online_value(const Problem& pb, Partition part, double tau, const std::vector<int>& order, double tie = 0.0);

/// Minimum of online_value over all presentation orders.
double online_worst_order(const Problem& pb, Partition part, double tau, double tie = 0.0);

}  // namespace psi
