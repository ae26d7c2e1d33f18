#include <doctest.h>

#include "psi/bounds.hpp"
#include "psi/dp.hpp"
#include "psi/instances.hpp"
#include "support/support.hpp"

using namespace psi;

namespace {

std::vector<std::pair<double, double>> atoms(const DiscreteLaw& l) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < l.size(); ++k) out.emplace_back(l.values[k], l.probs[k]);
  return out;
}

void check_law(const DiscreteLaw& l, std::vector<std::pair<double, double>> expected) {
  const auto got = atoms(l);
  REQUIRE(got.size() == expected.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(got[k].first == doctest::Approx(expected[k].first).epsilon(1e-12));
    CHECK(got[k].second == doctest::Approx(expected[k].second).epsilon(1e-12));
  }
}

// Riemann-sum version of Whittle's integral, independent of the segment logic.
double whittle_numeric(const Problem& pb, const SearchState& s, int steps) {
  const Leader lead = pb.sigma_max(s);
  if (!lead.valid() || s.best >= lead.value) return s.best;
  const double h = (lead.value - s.best) / steps;
  double integral = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double u = s.best + (k + 0.5) * h;
    double prod = 1.0;
    for (int i = 0; i < pb.size(); ++i)
      if (s.is_closed(i) || s.is_partial(i)) prod *= omega(pb, s, i, u);
    integral += prod * h;
  }
  return lead.value - integral;
}

// E[max{y, capped variables}] by enumerating joint outcomes.
double free_info_brute(const Problem& pb, const SearchState& s) {
  double e = 0.0;
  for (const auto& sc : psi::test::scenarios(pb)) {
    double m = s.best;
    double prob = 1.0;
    for (int i = 0; i < pb.size(); ++i) {
      const auto& th = pb.thresholds(i);
      const int t = sc.type[i];
      const double v = sc.value[i];
      if (s.is_closed(i)) {
        m = std::max({m, std::min(v, th.f), std::min({v, th.cond_f[t], th.p})});
      } else if (s.is_partial(i)) {
        // Condition on the revealed type.
        if (t != s.type[i]) prob = 0.0;
        else m = std::max(m, std::min(v, th.cond_f[t]));
      }
    }
    e += prob * sc.prob * m;
  }
  double norm = 1.0;
  for (int i = 0; i < pb.size(); ++i)
    if (s.is_partial(i)) norm *= pb.laws(i).type_prob[s.type[i]];
  return e / norm;
}

}  // namespace

TEST_CASE("capped laws of B1") {
  const Problem pb(psi::test::instance_of({psi::test::b1()}));
  const double f = 10.0 - 1.0 / 0.22, p = 55.0 / 9.0;
  check_law(pb.capped(0).k, {{1.0, 0.78}, {f, 0.22}});
  check_law(pb.capped(0).k_tilde, {{0.45, 0.80}, {1.0, 0.02}, {p, 0.18}});
  check_law(pb.capped(0).k_max, {{1.0, 0.78}, {f, 0.04}, {p, 0.18}});
  const Problem det(psi::test::instance_of({psi::test::make_box(0, 1.0, 0.5, {{"A", 3.0, 1.0}})}));
  check_law(det.capped(0).k, {{2.0, 1.0}});
  check_law(det.capped(0).k_tilde, {{std::min(2.0, det.thresholds(0).p), 1.0}});
}

TEST_CASE("in-vain probabilities of B1") {
  const Problem pb(psi::test::instance_of({psi::test::b1()}));
  const SearchState s = pb.initial_state();
  CHECK(omega(pb, s, 0, 2.0) == doctest::Approx(0.78).epsilon(1e-12));
  CHECK(omega(pb, s, 0, 4.0) == doctest::Approx(0.82).epsilon(1e-12));
  CHECK(omega(pb, s, 0, 11.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Whittle and free-info values of B1") {
  const Problem pb(psi::test::instance_of({psi::test::b1()}));
  const SearchState s = pb.initial_state();
  CHECK(whittle_value(pb, s) == doctest::Approx(55.0 / 9.0 - (0.78 * 1.5 + 0.82 * (55.0 / 9.0 - 2.5))).epsilon(1e-12));
  CHECK(whittle_value(pb, s) == doctest::Approx(1.98).epsilon(1e-12));
  CHECK(free_info_value(pb, s) == doctest::Approx(0.18 * 55.0 / 9.0 + 0.02 + 0.04 * (10.0 - 1.0 / 0.22) + 0.76).epsilon(1e-12));
  CHECK(whittle_value(pb, pb.initial_state(7.0)) == 7.0);
  CHECK(free_info_value(pb, pb.initial_state(10.0)) == 10.0);
  const Problem det(psi::test::instance_of({psi::test::make_box(0, 1.0, 0.5, {{"A", 3.0, 1.0}})}));
  CHECK(free_info_value(det, det.initial_state()) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("fixture bounds dominate the optimum") {
  const Problem pb(psi::test::fixture());
  const double j = solve(pb, false).root_value;
  const double jw = whittle_value(pb, pb.initial_state());
  const double jk = free_info_value(pb, pb.initial_state());
  CHECK(j <= jw + 1e-9);
  CHECK(jw <= jk + 1e-9);
}

TEST_CASE("property: exact integral matches a fine Riemann sum, free info matches enumeration") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 1 + rep % 3;
    const Problem pb(psi::test::small_random(rng, n, 3, 3));
    Solver solver(pb, false);
    solver.value(pb.initial_state());
    const auto states = solver.states();
    for (std::size_t k = 0; k < states.size(); k += 1 + states.size() / 10) {
      const auto& s = states[k];
      CHECK(whittle_value(pb, s) == doctest::Approx(whittle_numeric(pb, s, 20000)).epsilon(1e-3));
      CHECK(free_info_value(pb, s) == doctest::Approx(free_info_brute(pb, s)).epsilon(1e-11));
    }
  }
}

TEST_CASE("property: bound chain and single-box tightness") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 1 + rep % 4;
    const Problem pb(rep % 2 ? gen_random(n, 77 + rep) : psi::test::small_random(rng, n));
    Solver solver(pb, false);
    solver.value(pb.initial_state());
    for (const auto& s : solver.states()) {
      const double j = solver.find(s)->value;
      const double jw = whittle_value(pb, s), jk = free_info_value(pb, s);
      CHECK(j <= jw + 1e-9);
      CHECK(jw <= jk + 1e-9);
      CHECK(jw >= s.best);
      if (std::popcount(s.closed | s.partial) == 1) CHECK(std::abs(jw - j) <= 1e-9);
    }
  }
}

TEST_CASE("property: bounds are non-decreasing in y") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 100; ++rep) {
    const Problem pb(psi::test::small_random(rng, 3));
    double pw = -kInf, pk = -kInf;
    for (double y : pb.codec().best_grid()) {
      const double w = whittle_value(pb, pb.initial_state(y)), k = free_info_value(pb, pb.initial_state(y));
      CHECK(w >= pw - 1e-12);
      CHECK(k >= pk - 1e-12);
      CHECK(w >= y);
      CHECK(k >= y);
      pw = w;
      pk = k;
    }
    const double single = free_info_value(Problem(psi::test::instance_of({pb.box(0)})), pb.initial_state());
    std::vector<const DiscreteLaw*> one{&pb.capped(0).k_max};
    CHECK(single == doctest::Approx(expected_max(one, 0.0)).epsilon(1e-14));
  }
}
