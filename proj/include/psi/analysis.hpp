#pragma once

// Structural statistics of optimal policies: rule coverage, single-index
// representability, P-ratio, threshold dispersion and the asymptotic bound
// for i.i.d. copies.

#include <string>
#include <vector>

#include "psi/dp.hpp"
#include "psi/problem.hpp"

namespace psi {

struct CoverageStats {
  double frac_thm1 = 0.0;
  double frac_thm2 = 0.0;
  double frac_thm3 = 0.0;
  double frac_overall = 0.0;
  double recall_thm2 = 0.0;
  double recall_thm3 = 0.0;
  std::uint64_t conflicts = 0;  // visited states where a rule's action is strictly suboptimal
};

inline constexpr int kMaxOptimalCoverageBoxes = 9;

CoverageStats coverage(const Problem& pb);
CoverageStats coverage_of(const DpStats& st);

/// Index variable of an opening: full or partial opening of a closed box, or
/// full opening after type t.
struct IndexVar {
  int box = 0;
  ThresholdKind kind = ThresholdKind::F;
  int type = 0;  // only for CondF
};

struct IndexFit {
  bool feasible = false;
  std::vector<IndexVar> vars;
  std::vector<double> witness;  // one per var when feasible
  int states = 0;               // states contributing constraints
  int constraints = 0;
};

inline constexpr double kIndexSlack = 1e-6;
inline constexpr int kMaxIndexFitBoxes = 6;

/// Decides whether one number per opening (compared against y for stopping)
/// reproduces an optimal action at every state the full solver visits from
/// the given roots (default: the initial state). The chosen optimal action
/// must beat every strictly suboptimal alternative by kIndexSlack.
IndexFit index_fit(const Problem& pb, const std::vector<SearchState>& roots = {});

/// Checks a candidate index assignment against the same constraints.
bool index_assignment_fits(const Problem& pb, const std::vector<SearchState>& roots, const IndexFit& candidate);

/// Action of the index policy defined by a fit's witness (ties: stop, F, P,
/// lowest id).
Action fitted_index_action(const Problem& pb, const IndexFit& fit, const SearchState& s);

/// Expected partial openings over expected first openings under the optimal
/// policy; 0 when nothing is opened.
double p_ratio(const Problem& pb);

/// Population std of sigma^F plus population std of sigma^P across boxes.
double dispersion(const Problem& pb);

enum class LeadKind { F, P };

/// Lower bound on the index policy for n i.i.d. copies of box 0 of `pb`.
/// Throws std::invalid_argument if the requested threshold does not lead.
double asymptotic_bound(const Problem& pb, int n, LeadKind which);

}  // namespace psi
