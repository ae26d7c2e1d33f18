#pragma once

// Opening thresholds. Every defining equation is piecewise linear in sigma
// with kinks at support values (and at conditional thresholds for the
// partial-opening equations), so roots are found by locating the active
// segment and inverting it exactly.

#include <limits>
#include <vector>

#include "psi/core.hpp"

namespace psi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ThresholdSet {
  double f = 0.0;               // direct full opening
  double p = 0.0;               // partial opening
  double fp = kInf;             // switch point of the single-box rule (+inf: never P-open)
  std::vector<double> cond_f;   // full opening after type t, indexed like BoxLaws::types
};

/// E[(V - sigma)^+]
double expected_excess(const DiscreteLaw& law, double sigma);

/// Unique sigma with E[(V - sigma)^+] = cost. Throws std::invalid_argument
/// for cost <= 0.
double solve_f_threshold(const DiscreteLaw& law, double cost);

std::vector<double> solve_conditional_f_thresholds(const BoxLaws& laws, double cost_full);

/// Smallest sigma with sum_t P[t] max(0, E[(V-sigma)^+ | t] - cF) = cP.
double solve_p_threshold(const BoxLaws& laws, double cost_full, double cost_partial);

/// Root of sum_t P[t] max(0, cF - E[(V-sigma)^+ | t]) = cP, or +inf when
/// cP >= cF.
double solve_fp_threshold(const BoxLaws& laws, double cost_full, double cost_partial);

ThresholdSet threshold_set(const BoxLaws& laws, double cost_full, double cost_partial);
ThresholdSet threshold_set(const Box& box);

/// The three-way ordering (f = p = fp, fp < f <= p, or p <= f < fp) and the
/// bracketing of conditional thresholds, both within tol.
bool ordering_holds(const ThresholdSet& th, double tol = 1e-9);

}  // namespace psi
