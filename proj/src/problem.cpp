#include "psi/problem.hpp"

namespace psi {

Problem::Problem(Instance inst, std::vector<double> extra_best) : inst_(std::move(inst)) {
  validate(inst_);
  for (const auto& b : inst_.boxes) {
    laws_.push_back(derive_distributions(b));
    th_.push_back(threshold_set(laws_.back(), b.cost_full, b.cost_partial));
    capped_.push_back(capped_laws(b, laws_.back(), th_.back()));
  }
  codec_ = StateCodec(laws_, extra_best);
}

SearchState Problem::initial_state(double y) const {
  SearchState s = psi::initial_state(size());
  s.best = y;
  return s;
}

bool Problem::feasible(const SearchState& s, const Action& a) const {
  switch (a.kind) {
    case ActionKind::Stop: return a.box < 0;
    case ActionKind::FOpen: return a.box >= 0 && a.box < size() && (s.is_closed(a.box) || s.is_partial(a.box));
    case ActionKind::POpen: return a.box >= 0 && a.box < size() && s.is_closed(a.box);
  }
  return false;
}

double Problem::cost(const Action& a) const {
  switch (a.kind) {
    case ActionKind::Stop: return 0.0;
    case ActionKind::FOpen: return inst_.boxes[a.box].cost_full;
    case ActionKind::POpen: return inst_.boxes[a.box].cost_partial;
  }
  return 0.0;
}

Leader Problem::sigma_max(const SearchState& s, int exclude) const {
  Leader best;
  auto offer = [&best](double v, int i, ThresholdKind k) {
    if (!best.valid() || v > best.value) best = {v, i, k};
  };
  for (int i = 0; i < size(); ++i) {
    if (i == exclude) continue;
    if (s.is_closed(i)) offer(th_[i].f, i, ThresholdKind::F);
    else if (s.is_partial(i)) offer(th_[i].cond_f[s.type[i]], i, ThresholdKind::CondF);
  }
  for (int i = 0; i < size(); ++i)
    if (i != exclude && s.is_closed(i)) offer(th_[i].p, i, ThresholdKind::P);
  return best;
}

}  // namespace psi
