#pragma once

// Shared fixtures, small random generators and brute-force oracles for the
// test suites. The oracles avoid the library's algorithms: they enumerate
// joint outcomes, bisect defining equations, or run unmemoized recursions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "psi/core.hpp"
#include "psi/problem.hpp"

namespace psi::test {

inline Box make_box(int id, double cf, double cp, std::vector<JointOutcome> outcomes) {
  Box b;
  b.id = id;
  b.cost_full = cf;
  b.cost_partial = cp;
  b.outcomes = std::move(outcomes);
  return b;
}

inline std::vector<JointOutcome> b1_outcomes() {
  return {{"A", 1.0, 0.02}, {"A", 10.0, 0.18}, {"B", 1.0, 0.76}, {"B", 10.0, 0.04}};
}

/// c^F = 1, c^P = 0.5, P[A] = 0.2, V|A: 1 w.p. .1, 10 w.p. .9; V|B: 1 w.p. .95, 10 w.p. .05.
inline Box b1(int id = 0) { return make_box(id, 1.0, 0.5, b1_outcomes()); }

inline Instance instance_of(std::vector<Box> boxes) {
  Instance inst;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    boxes[i].id = static_cast<int>(i);
    inst.boxes.push_back(boxes[i]);
  }
  return inst;
}

/// Three boxes: B1, B1's law with c^F = 0.99 and c^P = 500, B1 again.
inline Instance fixture() { return instance_of({b1(), make_box(1, 0.99, 500.0, b1_outcomes()), b1()}); }

inline Instance fixture_prefix(int k) {
  auto inst = fixture();
  inst.boxes.resize(k);
  return inst;
}

/// N boxes with prize 110 or 0 w.p. 1/2, perfectly signalled by the type.
inline Instance signalled_family(int n, double eps) {
  std::vector<Box> boxes;
  for (int i = 0; i < n; ++i) boxes.push_back(make_box(i, 100.0, eps, {{"G", 110.0, 0.5}, {"B", 0.0, 0.5}}));
  return instance_of(boxes);
}

inline double signalled_family_value(int n, double eps) { return (1.0 - std::pow(2.0, -n)) * (10.0 - 2.0 * eps); }

/// Single box: exceptional type (prob .01) pays 2, average type pays 0.5.
inline Instance screening_box() {
  return instance_of({make_box(0, 1.0 / 3.0, 1.0 / 300.0, {{"X", 2.0, 0.01}, {"M", 0.5, 0.99}})});
}

/// V1 = 1 surely; V2 = 1/eps w.p. eps else 0; negligible opening costs.
inline Instance tightness_pair(double eps) {
  return instance_of({make_box(0, 1e-9, 1e-9, {{"T", 1.0, 1.0}}),
                      make_box(1, 1e-9, 1e-9, {{"T", 1.0 / eps, eps}, {"T", 0.0, 1.0 - eps}})});
}

/// Small random instances with shapes the benchmark generator does not
/// produce: 1..4 support points, optional shared values across types,
/// partial costs above full costs.
inline Instance small_random(std::mt19937_64& rng, int n, int max_support = 4, int max_types = 3) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Box> boxes;
  static const char* labels[] = {"A", "B", "C", "D"};
  for (int i = 0; i < n; ++i) {
    const int m = 1 + static_cast<int>(rng() % max_support);
    const int types = 1 + static_cast<int>(rng() % max_types);
    std::vector<double> support;
    while (static_cast<int>(support.size()) < m) {
      const double v = std::round(unit(rng) * 1000.0) / 100.0;
      if (std::find(support.begin(), support.end(), v) == support.end()) support.push_back(v);
    }
    std::vector<JointOutcome> out;
    double total = 0.0;
    for (int t = 0; t < types; ++t)
      for (double v : support) {
        const double w = 0.05 + unit(rng);
        out.push_back({labels[t], v, w});
        total += w;
      }
    for (auto& o : out) o.prob /= total;
    const double cf = 0.05 + 3.0 * unit(rng);
    const double cp = (rng() % 4 == 0) ? cf * (1.0 + unit(rng)) : 0.01 + cf * unit(rng);
    boxes.push_back(make_box(i, cf, cp, out));
  }
  return instance_of(boxes);
}

/// Root of a monotone function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  const bool rising = f(hi) > f(lo);
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0) == rising) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Every joint realization of (type, prize) for all boxes with its probability.
struct Scenario {
  std::vector<int> type;
  std::vector<double> value;
  double prob = 1.0;
};

inline std::vector<Scenario> scenarios(const Problem& pb) {
  std::vector<Scenario> out{Scenario{}};
  for (int i = 0; i < pb.size(); ++i) {
    std::vector<Scenario> next;
    for (const auto& s : out)
      for (const auto& o : pb.box(i).outcomes) {
        Scenario t = s;
        t.type.push_back(pb.laws(i).type_index(o.type));
        t.value.push_back(o.value);
        t.prob *= o.prob;
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

/// Unmemoized Bellman recursion written over explicit per-box status
/// vectors: -2 gone, -1 closed, t >= 0 partially opened with type t.
inline double brute_value(const Problem& pb, std::vector<int>& status, double y) {
  double best = y;
  const int n = pb.size();
  for (int i = 0; i < n; ++i) {
    if (status[i] == -2) continue;
    const int saved = status[i];
    const auto& l = pb.laws(i);
    // Full opening.
    const DiscreteLaw& law = saved >= 0 ? l.conditional[saved] : l.marginal;
    double q = -pb.box(i).cost_full;
    status[i] = -2;
    for (std::size_t k = 0; k < law.size(); ++k) q += law.probs[k] * brute_value(pb, status, std::max(y, law.values[k]));
    status[i] = saved;
    best = std::max(best, q);
    if (saved == -1) {
      double r = -pb.box(i).cost_partial;
      for (int t = 0; t < l.type_count(); ++t) {
        status[i] = t;
        r += l.type_prob[t] * brute_value(pb, status, y);
      }
      status[i] = saved;
      best = std::max(best, r);
    }
  }
  return best;
}

inline double brute_value(const Problem& pb, const SearchState& s) {
  std::vector<int> status(pb.size(), -2);
  for (int i = 0; i < pb.size(); ++i) {
    if (s.is_closed(i)) status[i] = -1;
    if (s.is_partial(i)) status[i] = s.type[i];
  }
  return brute_value(pb, status, s.best);
}

}  // namespace psi::test
