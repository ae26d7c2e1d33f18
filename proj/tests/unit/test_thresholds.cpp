#include <doctest.h>

#include "psi/instances.hpp"
#include "psi/thresholds.hpp"
#include "support/support.hpp"

using namespace psi;
using psi::test::b1;
using psi::test::make_box;

namespace {

DiscreteLaw law(std::vector<std::pair<double, double>> atoms) { return make_law(std::move(atoms)); }

// Left-hand sides of the partial-opening equations, evaluated directly.
double h_partial(const BoxLaws& l, double cf, double s) {
  double v = 0.0;
  for (int t = 0; t < l.type_count(); ++t) v += l.type_prob[t] * std::max(0.0, expected_excess(l.conditional[t], s) - cf);
  return v;
}
double r_switch(const BoxLaws& l, double cf, double s) {
  double v = 0.0;
  for (int t = 0; t < l.type_count(); ++t) v += l.type_prob[t] * std::max(0.0, cf - expected_excess(l.conditional[t], s));
  return v;
}

}  // namespace

TEST_CASE("expected excess") {
  const auto m = derive_distributions(b1()).marginal;
  CHECK(expected_excess(m, 6.0) == doctest::Approx(0.88).epsilon(1e-12));
  CHECK(expected_excess(m, 10.0) == 0.0);
  CHECK(expected_excess(m, 25.0) == 0.0);
  CHECK(expected_excess(m, 0.5) == doctest::Approx(m.mean() - 0.5).epsilon(1e-12));
  CHECK(expected_excess(m, -3.0) == doctest::Approx(m.mean() + 3.0).epsilon(1e-12));
}

TEST_CASE("full-opening threshold by segment inversion") {
  CHECK(solve_f_threshold(law({{10.0, 1.0}}), 3.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(solve_f_threshold(law({{0.0, 0.5}, {10.0, 0.5}}), 2.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(solve_f_threshold(derive_distributions(b1()).marginal, 1.0) == doctest::Approx(10.0 - 1.0 / 0.22).epsilon(1e-12));
  // Cost above the mean gives a negative threshold.
  CHECK(solve_f_threshold(law({{1.0, 1.0}}), 3.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK_THROWS_AS(solve_f_threshold(law({{1.0, 1.0}}), 0.0), std::invalid_argument);
}

TEST_CASE("conditional thresholds of B1") {
  const auto l = derive_distributions(b1());
  const auto c = solve_conditional_f_thresholds(l, 1.0);
  CHECK(c[l.type_index("A")] == doctest::Approx(10.0 - 1.0 / 0.9).epsilon(1e-12));
  CHECK(c[l.type_index("B")] == doctest::Approx(0.45).epsilon(1e-12));
  const auto single = derive_distributions(make_box(0, 1.0, 0.5, {{"A", 2.0, 0.4}, {"A", 6.0, 0.6}}));
  CHECK(solve_conditional_f_thresholds(single, 1.0)[0] == doctest::Approx(solve_f_threshold(single.marginal, 1.0)));
}

TEST_CASE("partial-opening threshold") {
  const auto l = derive_distributions(b1());
  CHECK(solve_p_threshold(l, 1.0, 0.5) == doctest::Approx(55.0 / 9.0).epsilon(1e-12));
  CHECK(solve_p_threshold(l, 0.99, 500.0) < 0.0);
  const auto single = derive_distributions(make_box(0, 1.0, 0.3, {{"A", 2.0, 0.4}, {"A", 6.0, 0.6}}));
  CHECK(solve_p_threshold(single, 1.0, 0.3) == doctest::Approx(solve_f_threshold(single.marginal, 1.3)).epsilon(1e-12));
}

TEST_CASE("switch threshold") {
  const auto l = derive_distributions(b1());
  CHECK(solve_fp_threshold(l, 1.0, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(solve_fp_threshold(l, 1.0, 1.0) == kInf);
  CHECK(solve_fp_threshold(l, 1.0, 2.0) == kInf);
}

TEST_CASE("threshold sets") {
  const auto th = threshold_set(b1());
  CHECK(th.f == doctest::Approx(5.4545454545).epsilon(1e-9));
  CHECK(th.p == doctest::Approx(6.1111111111).epsilon(1e-9));
  CHECK(th.fp == doctest::Approx(2.5));
  CHECK(th.fp < th.f);
  CHECK(th.f <= th.p);
  CHECK(ordering_holds(th));

  const auto th2 = threshold_set(make_box(1, 0.99, 500.0, psi::test::b1_outcomes()));
  CHECK(th2.f == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(th2.p < 0.0);
  CHECK(th2.fp == kInf);
  CHECK(ordering_holds(th2));

  const auto det = threshold_set(make_box(0, 1.5, 0.5, {{"A", 4.0, 1.0}}));
  CHECK(det.f == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("property: expected excess is non-increasing and convex") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 12.0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto l = derive_distributions(psi::test::small_random(rng, 1).boxes[0]).marginal;
    std::vector<double> xs(30);
    for (auto& x : xs) x = u(rng);
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 2 < xs.size(); ++k) {
      const double a = xs[k], b = xs[k + 1], c = xs[k + 2];
      const double ga = expected_excess(l, a), gb = expected_excess(l, b), gc = expected_excess(l, c);
      CHECK(gb <= ga + 1e-12);
      if (c - a > 1e-9) CHECK(gb <= ga + (gc - ga) * (b - a) / (c - a) + 1e-9);
    }
  }
}

TEST_CASE("property: roots satisfy their defining equations and match bisection") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 300; ++rep) {
    const auto box = psi::test::small_random(rng, 1).boxes[0];
    const auto l = derive_distributions(box);
    const double cf = box.cost_full, cp = box.cost_partial;
    const auto th = threshold_set(l, cf, cp);
    CHECK(std::abs(expected_excess(l.marginal, th.f) - cf) <= 1e-9);
    for (int t = 0; t < l.type_count(); ++t)
      CHECK(std::abs(expected_excess(l.conditional[t], th.cond_f[t]) - cf) <= 1e-9);
    CHECK(std::abs(h_partial(l, cf, th.p) - cp) <= 1e-9);
    const double lo = -50.0, hi = 50.0;
    const double p_ref = psi::test::bisect([&](double s) { return h_partial(l, cf, s) - cp; }, lo, hi);
    CHECK(th.p == doctest::Approx(p_ref).epsilon(1e-7));
    if (cp < cf) {
      CHECK(std::abs(r_switch(l, cf, th.fp) - cp) <= 1e-9);
      const double fp_ref = psi::test::bisect([&](double s) { return r_switch(l, cf, s) - cp; }, lo, hi);
      CHECK(th.fp == doctest::Approx(fp_ref).epsilon(1e-7));
    } else {
      CHECK(th.fp == kInf);
    }
  }
}

TEST_CASE("property: three-way ordering and bracketing on 1000 random instances") {
  std::mt19937_64 rng(3);
  int boxes = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Instance inst = rep % 2 ? gen_random(3, rep) : psi::test::small_random(rng, 3);
    for (const auto& b : inst.boxes) {
      const auto th = threshold_set(b);
      CHECK_MESSAGE(ordering_holds(th), "f=" << th.f << " p=" << th.p << " fp=" << th.fp);
      ++boxes;
    }
  }
  CHECK(boxes == 3000);
}

TEST_CASE("property: raising the full cost lowers sigma^F") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.01, 0.5);
  for (int rep = 0; rep < 300; ++rep) {
    const auto l = derive_distributions(psi::test::small_random(rng, 1).boxes[0]).marginal;
    const double c = 0.05 + 2.0 * u(rng);
    CHECK(solve_f_threshold(l, c + u(rng)) < solve_f_threshold(l, c));
  }
}
