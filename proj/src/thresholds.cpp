#include "psi/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psi {

double expected_excess(const DiscreteLaw& law, double sigma) {
  double s = 0.0;
  for (std::size_t k = 0; k < law.size(); ++k)
    if (law.values[k] > sigma) s += law.probs[k] * (law.values[k] - sigma);
  return s;
}

double solve_f_threshold(const DiscreteLaw& law, double cost) {
  if (!(cost > 0)) throw std::invalid_argument("opening cost must be positive");
  // On [v_{j-1}, v_j] the excess is S_j - P_j sigma with suffix sums S, P.
  double suffix_mass = 0.0;
  double suffix_moment = 0.0;
  for (std::size_t j = law.size(); j-- > 0;) {
    suffix_mass += law.probs[j];
    suffix_moment += law.probs[j] * law.values[j];
    const double lower = j > 0 ? law.values[j - 1] : -kInf;
    const double at_lower = suffix_moment - suffix_mass * lower;
    if (j == 0 || cost <= at_lower) return (suffix_moment - cost) / suffix_mass;
  }
  return 0.0;  // unreachable: the law is non-empty
}

std::vector<double> solve_conditional_f_thresholds(const BoxLaws& laws, double cost_full) {
  std::vector<double> out;
  out.reserve(laws.conditional.size());
  for (const auto& c : laws.conditional) out.push_back(solve_f_threshold(c, cost_full));
  return out;
}

namespace {

std::vector<double> kinks(const BoxLaws& laws, const std::vector<double>& cond) {
  std::vector<double> b = laws.marginal.values;
  b.insert(b.end(), cond.begin(), cond.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Sum over types of P[t] * max(0, sign * (E[(V-s)^+|t] - cF)).
double type_sum(const BoxLaws& laws, double cost_full, double sigma, double sign) {
  double s = 0.0;
  for (int t = 0; t < laws.type_count(); ++t)
    s += laws.type_prob[t] * std::max(0.0, sign * (expected_excess(laws.conditional[t], sigma) - cost_full));
  return s;
}

double interpolate(double x0, double h0, double x1, double h1, double level) {
  if (h0 == h1) return x0;
  return x0 + (level - h0) / (h1 - h0) * (x1 - x0);
}

}  // namespace

double solve_p_threshold(const BoxLaws& laws, double cost_full, double cost_partial) {
  if (!(cost_full > 0) || !(cost_partial > 0)) throw std::invalid_argument("opening cost must be positive");
  const auto cond = solve_conditional_f_thresholds(laws, cost_full);
  const auto b = kinks(laws, cond);
  // h is non-increasing, has slope -1 below b[0] and vanishes at b.back().
  double prev = type_sum(laws, cost_full, b[0], +1.0);
  if (prev <= cost_partial) return b[0] - (cost_partial - prev);
  for (std::size_t k = 1; k < b.size(); ++k) {
    const double cur = type_sum(laws, cost_full, b[k], +1.0);
    if (cur <= cost_partial) return interpolate(b[k - 1], prev, b[k], cur, cost_partial);
    prev = cur;
  }
  return b.back();
}

double solve_fp_threshold(const BoxLaws& laws, double cost_full, double cost_partial) {
  if (!(cost_full > 0) || !(cost_partial > 0)) throw std::invalid_argument("opening cost must be positive");
  if (cost_partial >= cost_full) return kInf;
  const auto cond = solve_conditional_f_thresholds(laws, cost_full);
  const auto b = kinks(laws, cond);
  // r is non-decreasing, zero below b[0] and equal to cF from b.back() on.
  double prev = type_sum(laws, cost_full, b[0], -1.0);
  if (prev >= cost_partial) return b[0];
  for (std::size_t k = 1; k < b.size(); ++k) {
    const double cur = type_sum(laws, cost_full, b[k], -1.0);
    if (cur >= cost_partial) return interpolate(b[k - 1], prev, b[k], cur, cost_partial);
    prev = cur;
  }
  return b.back();
}

ThresholdSet threshold_set(const BoxLaws& laws, double cost_full, double cost_partial) {
  ThresholdSet th;
  th.f = solve_f_threshold(laws.marginal, cost_full);
  th.cond_f = solve_conditional_f_thresholds(laws, cost_full);
  th.p = solve_p_threshold(laws, cost_full, cost_partial);
  th.fp = solve_fp_threshold(laws, cost_full, cost_partial);
  return th;
}

ThresholdSet threshold_set(const Box& box) {
  return threshold_set(derive_distributions(box), box.cost_full, box.cost_partial);
}

bool ordering_holds(const ThresholdSet& th, double tol) {
  const auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  const bool all_equal = near(th.f, th.p) && std::isfinite(th.fp) && near(th.f, th.fp);
  const bool p_first = th.fp < th.f + tol && th.f <= th.p + tol;
  const bool f_first = th.p <= th.f + tol && th.f < th.fp + tol;
  if (!(all_equal || p_first || f_first)) return false;
  const auto [lo, hi] = std::minmax_element(th.cond_f.begin(), th.cond_f.end());
  return *lo <= th.fp + tol && *hi >= th.p - tol;
}

}  // namespace psi
