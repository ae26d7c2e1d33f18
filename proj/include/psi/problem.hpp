#pragma once

// An instance together with everything derived from it once: per-box laws,
// thresholds, capped laws and the state codec. Immutable after construction
// and shared read-only by solvers, policies and evaluators.

#include <algorithm>
#include <vector>

#include "psi/bounds.hpp"
#include "psi/core.hpp"
#include "psi/thresholds.hpp"

namespace psi {

enum class ThresholdKind : std::uint8_t { F, CondF, P };

/// The largest opening threshold of a state and where it sits.
struct Leader {
  double value = -kInf;
  int box = -1;
  ThresholdKind kind = ThresholdKind::F;

  bool valid() const { return box >= 0; }
  bool f_kind() const { return kind != ThresholdKind::P; }
};

class Problem {
 public:
  /// extra_best adds prize levels (beyond 0 and the supports) usable as
  /// starting values of y.
  explicit Problem(Instance inst, std::vector<double> extra_best = {});

  int size() const { return inst_.size(); }
  const Instance& instance() const { return inst_; }
  const Box& box(int i) const { return inst_.boxes[i]; }
  const BoxLaws& laws(int i) const { return laws_[i]; }
  const std::vector<BoxLaws>& all_laws() const { return laws_; }
  const ThresholdSet& thresholds(int i) const { return th_[i]; }
  const CappedLaws& capped(int i) const { return capped_[i]; }
  const StateCodec& codec() const { return codec_; }

  SearchState initial_state(double y = 0.0) const;

  bool feasible(const SearchState& s, const Action& a) const;
  double cost(const Action& a) const;

  /// Leader over closed boxes (max of sigma^F, sigma^P) and partial boxes
  /// (sigma^{F|t}), skipping `exclude`. Exact ties go to F-kind thresholds,
  /// then to the lowest id.
  Leader sigma_max(const SearchState& s, int exclude = -1) const;

  /// Calls f(action) for Stop, every FOpen by id, then every POpen by id.
  template <class F>
  void for_each_action(const SearchState& s, F&& f) const {
    f(Action::stop());
    for (int i = 0; i < size(); ++i)
      if (s.is_closed(i) || s.is_partial(i)) f(Action::f_open(i));
    for (int i = 0; i < size(); ++i)
      if (s.is_closed(i)) f(Action::p_open(i));
  }

  /// Calls f(prob, next_state) for every outcome of an opening action.
  template <class F>
  void for_each_outcome(const SearchState& s, const Action& a, F&& f) const {
    const int i = a.box;
    SearchState next = s;
    if (a.kind == ActionKind::POpen) {
      next.closed &= ~bit(i);
      next.partial |= bit(i);
      const auto& l = laws_[i];
      for (int t = 0; t < l.type_count(); ++t) {
        next.type[i] = static_cast<std::uint8_t>(t);
        f(l.type_prob[t], next);
      }
      return;
    }
    const DiscreteLaw& law = s.is_partial(i) ? laws_[i].conditional[s.type[i]] : laws_[i].marginal;
    next.closed &= ~bit(i);
    next.partial &= ~bit(i);
    next.type[i] = 0;
    for (std::size_t k = 0; k < law.size(); ++k) {
      next.best = std::max(s.best, law.values[k]);
      f(law.probs[k], next);
    }
  }

 private:
  Instance inst_;
  std::vector<BoxLaws> laws_;
  std::vector<ThresholdSet> th_;
  std::vector<CappedLaws> capped_;
  StateCodec codec_;
};

}  // namespace psi
