#pragma once

// Closed-form value and optimal rule when a single box remains.

#include "psi/core.hpp"
#include "psi/problem.hpp"

namespace psi {

/// Value of a closed box against current best y.
double single_box_value(const Problem& pb, int box, double y);
/// Value of a partially opened box with revealed type t.
double single_box_value(const Problem& pb, int box, int type, double y);

Action single_box_action(const Problem& pb, int box, double y);
Action single_box_action(const Problem& pb, int box, int type, double y);

/// Dispatches on whether the box is closed or partially open in s.
double single_box_value(const Problem& pb, const SearchState& s, int box);
Action single_box_action(const Problem& pb, const SearchState& s, int box);

}  // namespace psi
