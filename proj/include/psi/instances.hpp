#pragma once

// Instance families: the random benchmark family, the two-type binary-prize
// subset-sum family used for the hardness reduction, and i.i.d. Bernoulli
// two-type boxes with their collapsed-state solver.

#include <cstdint>
#include <string>
#include <vector>

#include "psi/core.hpp"

namespace psi {

struct RandomConfig {
  int support_size = 5;
  double value_lo = 0.0;
  double value_hi = 10.0;
  int max_types = 3;
  double cf_lo = 0.0;
  double cf_hi = 5.0;
  double cp_lo = 0.0;
  double cp_hi = 3.0;
};

/// Deterministic in (n, seed, cfg).
Instance gen_random(int n, std::uint64_t seed, const RandomConfig& cfg = {});

struct HardSpec {
  std::vector<long long> a;
  long long target = 0;
  long long total = 0;
  double alpha = 0.0;
  std::vector<double> p;       // 1 - exp(-alpha a_i)
  std::vector<double> p_half;  // 1 - exp(-alpha a_i / 2)
};

struct HardInstance {
  Instance instance;
  HardSpec spec;
};

inline constexpr double kHardItemRatioGuard = 0.05;

/// Builds the subset-sum family. Every item is checked for well separation
/// (negative bad-type threshold, good-type threshold above sigma^P, positive
/// partial cost); with ratio_guard also a_i / sum(a) <= 0.05. Throws
/// ValidationError listing offending items.
HardInstance gen_hard(const std::vector<long long>& a, long long target, bool ratio_guard = false);

/// Committing payoff with P-set `p_set` (bit i = item i).
double psi_objective(const HardSpec& spec, BoxSet p_set);
/// Same payoff as a function of the P-set's share x of the total item mass.
double psi_of_fraction(const HardSpec& spec, double x);

struct SubsetSumCheck {
  BoxSet p_set = 0;
  long long sum = 0;
  bool matches_target = false;
  double value = 0.0;
};

/// Runs the best committing search on gen_hard(a, target) and reads off the
/// item sum of its P-set.
SubsetSumCheck verify_subset_sum_correspondence(const std::vector<long long>& a, long long target, int threads = 1);

struct B2IParams {
  double p_good = 0.5;
  double q_good = 0.5;
  double q_bad = 0.5;
  double c_f = 0.1;
  double c_p = 0.05;
  int n = 1;
};

/// True when some conditional prize law is a point mass (q in {0, 1}).
bool b2i_degenerate(const B2IParams& params);

/// n identical boxes with types G/B and prizes in {0, 1}. Zero-probability
/// outcomes are dropped.
Instance gen_b2i(const B2IParams& params);

enum class B2IMove : std::uint8_t { Stop, FullOpenClosed, PartialOpen, FullOpenBad };

struct B2IRow {
  int n_closed = 0;
  int n_bad = 0;
  B2IMove move = B2IMove::Stop;
  double value = 0.0;
  double q_full = 0.0;     // -inf when unavailable
  double q_partial = 0.0;  // -inf when unavailable
  double q_bad = 0.0;      // -inf when unavailable
};

struct B2IResult {
  std::string regime;         // "switch" or "F-only"
  double value = 0.0;         // value at (n, 0), y = 0
  int switch_point = 0;       // N_C: P-open iff n_closed > N_C
  bool single_switch = true;  // the rule above holds at every (n_C, n_B) that opens
  bool defers_bad = true;     // bad boxes are never opened while a closed box remains
  double nb_spread = 0.0;     // max over n_C of the spread of (Q_F - Q_P) across n_B
  std::vector<B2IRow> table;  // all (n_C, n_B) with y = 0
};

/// Exact DP over (n_closed, n_bad) with y = 0; prize 1 ends the search and
/// good types are full-opened on sight. Throws ValidationError when
/// 0 < sigma^{F/P} < sigma^F < sigma^P fails outside the F-only regime.
B2IResult b2i_solve(const B2IParams& params);

std::string to_string(B2IMove m);

}  // namespace psi
