#include <doctest.h>

#include "psi/dp.hpp"
#include "psi/singlebox.hpp"
#include "support/support.hpp"

using namespace psi;

TEST_CASE("single-box values of B1") {
  const Problem pb(psi::test::instance_of({psi::test::b1()}));
  CHECK(single_box_value(pb, 0, 0.0) == doctest::Approx(0.78 + 0.22 * (10.0 - 1.0 / 0.22)).epsilon(1e-12));
  CHECK(single_box_value(pb, 0, 0.0) == doctest::Approx(1.98).epsilon(1e-12));
  CHECK(single_box_value(pb, 0, 3.0) == doctest::Approx(0.18 * 55.0 / 9.0 + 0.82 * 3.0).epsilon(1e-12));
  CHECK(single_box_value(pb, 0, 3.0) == doctest::Approx(3.56).epsilon(1e-12));
  CHECK(single_box_value(pb, 0, 7.0) == 7.0);
}

TEST_CASE("single-box actions of B1") {
  const Problem pb(psi::test::instance_of({psi::test::b1()}));
  CHECK(single_box_action(pb, 0, 0.0) == Action::f_open(0));
  CHECK(single_box_action(pb, 0, pb.thresholds(0).fp) == Action::f_open(0));
  CHECK(single_box_action(pb, 0, 3.0) == Action::p_open(0));
  CHECK(single_box_action(pb, 0, 7.0) == Action::stop());
  const int b = pb.laws(0).type_index("B"), a = pb.laws(0).type_index("A");
  CHECK(single_box_action(pb, 0, b, 0.0) == Action::f_open(0));
  CHECK(single_box_action(pb, 0, b, 1.0) == Action::stop());
  CHECK(single_box_action(pb, 0, a, 3.0) == Action::f_open(0));
  CHECK(single_box_value(pb, 0, b, 1.0) == 1.0);
}

TEST_CASE("property: single-box value is non-decreasing, 1-Lipschitz and matches the DP") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 500; ++rep) {
    const Problem pb(psi::test::small_random(rng, 1));
    Solver solver(pb, false);
    const auto& grid = pb.codec().best_grid();
    double prev_y = 0.0, prev_v = -kInf;
    for (double y : grid) {
      const double v = single_box_value(pb, 0, y);
      const double dp = solver.value(pb.initial_state(y));
      CHECK(std::abs(v - dp) <= 1e-9);
      CHECK(v >= y - 1e-12);
      if (prev_v > -kInf) {
        CHECK(v >= prev_v - 1e-12);
        CHECK(v - prev_v <= (y - prev_y) + 1e-9);
      }
      const auto& th = pb.thresholds(0);
      if (y >= std::max(th.f, th.p)) CHECK(v == y);
      // The rule's action attains the optimum.
      const Action a = single_box_action(pb, 0, y);
      CHECK(solver.q_value(pb.initial_state(y), a) >= dp - 1e-9);
      prev_y = y;
      prev_v = v;
    }
    // After a partial opening, full-open exactly when y is below the type's threshold.
    for (int t = 0; t < pb.laws(0).type_count(); ++t)
      for (double y : grid) {
        SearchState s;
        s.partial = bit(0);
        s.type[0] = static_cast<std::uint8_t>(t);
        s.best = y;
        const double dp = solver.value(s);
        CHECK(std::abs(single_box_value(pb, 0, t, y) - dp) <= 1e-9);
        CHECK((single_box_action(pb, 0, t, y) == Action::f_open(0)) == (y < pb.thresholds(0).cond_f[t]));
        CHECK(solver.q_value(s, single_box_action(pb, 0, t, y)) >= dp - 1e-9);
      }
  }
}
