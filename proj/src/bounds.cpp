#include "psi/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "psi/problem.hpp"

namespace psi {

double DiscreteCdf::operator()(double u) const {
  auto it = std::upper_bound(points.begin(), points.end(), u);
  if (it == points.begin()) return 0.0;
  return cum[static_cast<std::size_t>(it - points.begin()) - 1];
}

double DiscreteCdf::expectation() const {
  double e = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    e += points[k] * (cum[k] - prev);
    prev = cum[k];
  }
  return e;
}

DiscreteCdf to_cdf(const DiscreteLaw& law) {
  DiscreteCdf c;
  c.points = law.values;
  double acc = 0.0;
  for (double p : law.probs) c.cum.push_back(acc += p);
  if (!c.cum.empty()) c.cum.back() = 1.0;
  return c;
}

DiscreteCdf max_cdf(const std::vector<const DiscreteLaw*>& laws, double floor) {
  std::vector<double> grid;
  if (std::isfinite(floor)) grid.push_back(floor);
  for (const auto* l : laws)
    for (double v : l->values)
      if (v > floor) grid.push_back(v);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  DiscreteCdf c;
  c.points = grid;
  c.cum.assign(grid.size(), 1.0);
  for (const auto* l : laws) {
    // Walk each law's support alongside the grid.
    std::size_t k = 0;
    double acc = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      while (k < l->size() && l->values[k] <= grid[g]) acc += l->probs[k++];
      c.cum[g] *= k == l->size() ? 1.0 : acc;
    }
  }
  return c;
}

double expected_max(const std::vector<const DiscreteLaw*>& laws, double floor) {
  return max_cdf(laws, floor).expectation();
}

CappedLaws capped_laws(const Box& box, const BoxLaws& laws, const ThresholdSet& th) {
  std::vector<std::pair<double, double>> k, kt, km;
  std::vector<std::vector<std::pair<double, double>>> per_type(laws.type_count());
  for (const auto& o : box.outcomes) {
    const int t = laws.type_index(o.type);
    const double a = std::min(o.value, th.f);
    const double b = std::min({o.value, th.cond_f[t], th.p});
    k.emplace_back(a, o.prob);
    kt.emplace_back(b, o.prob);
    km.emplace_back(std::max(a, b), o.prob);
    per_type[t].emplace_back(std::min(o.value, th.cond_f[t]), o.prob / laws.type_prob[t]);
  }
  CappedLaws c;
  c.k = make_law(std::move(k));
  c.k_tilde = make_law(std::move(kt));
  c.k_max = make_law(std::move(km));
  for (auto& v : per_type) c.k_t.push_back(make_law(std::move(v)));
  return c;
}

double omega(const Problem& pb, const SearchState& s, int box, double u) {
  const auto& c = pb.capped(box);
  if (s.is_partial(box)) return c.k_t[s.type[box]].cdf(u);
  return u > pb.thresholds(box).fp ? c.k_tilde.cdf(u) : c.k.cdf(u);
}

double whittle_value(const Problem& pb, const SearchState& s) {
  const Leader lead = pb.sigma_max(s);
  const double y = s.best;
  if (!lead.valid() || y >= lead.value) return y;
  const double top = lead.value;

  std::vector<double> cuts{y, top};
  auto add = [&](double v) {
    if (v > y && v < top) cuts.push_back(v);
  };
  std::vector<int> boxes;
  for (int i = 0; i < pb.size(); ++i) {
    if (!s.is_closed(i) && !s.is_partial(i)) continue;
    boxes.push_back(i);
    const auto& c = pb.capped(i);
    if (s.is_partial(i)) {
      for (double v : c.k_t[s.type[i]].values) add(v);
    } else {
      for (double v : c.k.values) add(v);
      for (double v : c.k_tilde.values) add(v);
      add(pb.thresholds(i).fp);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // The integrand is constant on each open segment; sample its midpoint.
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    double prod = 1.0;
    for (int i : boxes) prod *= omega(pb, s, i, mid);
    integral += (cuts[k + 1] - cuts[k]) * prod;
  }
  return top - integral;
}

double free_info_value(const Problem& pb, const SearchState& s) {
  std::vector<const DiscreteLaw*> laws;
  for (int i = 0; i < pb.size(); ++i) {
    if (s.is_closed(i)) laws.push_back(&pb.capped(i).k_max);
    else if (s.is_partial(i)) laws.push_back(&pb.capped(i).k_t[s.type[i]]);
  }
  return expected_max(laws, s.best);
}

}  // namespace psi
