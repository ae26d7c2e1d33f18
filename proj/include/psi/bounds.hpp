#pragma once

// Capped-prize laws and the two upper bounds built on them: Whittle's
// integral and the free-information relaxation.

#include <vector>

#include "psi/core.hpp"
#include "psi/thresholds.hpp"

namespace psi {

class Problem;

/// Exact step CDF: cum[k] = P[X <= points[k]].
struct DiscreteCdf {
  std::vector<double> points;
  std::vector<double> cum;

  double operator()(double u) const;
  double expectation() const;
};

DiscreteCdf to_cdf(const DiscreteLaw& law);

/// CDF of max{floor, X_1, ..., X_k} for independent X_i (floor may be -inf).
DiscreteCdf max_cdf(const std::vector<const DiscreteLaw*>& laws, double floor);
double expected_max(const std::vector<const DiscreteLaw*>& laws, double floor);

struct CappedLaws {
  DiscreteLaw k;                 // min{V, sigma^F}
  DiscreteLaw k_tilde;           // min{V, sigma^{F|T}, sigma^P}
  DiscreteLaw k_max;             // max{K, K~}, jointly over (T, V)
  std::vector<DiscreteLaw> k_t;  // min{V, sigma^{F|t}} under V | T = t
};

CappedLaws capped_laws(const Box& box, const BoxLaws& laws, const ThresholdSet& th);

/// Probability that box i would not beat level u: the K law for u at or
/// below sigma^{F/P}, the K~ law above it; K^t for a partially open box.
double omega(const Problem& pb, const SearchState& s, int box, double u);

double whittle_value(const Problem& pb, const SearchState& s);
double free_info_value(const Problem& pb, const SearchState& s);

}  // namespace psi
