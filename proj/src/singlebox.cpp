#include "psi/singlebox.hpp"

#include <algorithm>

namespace psi {

double single_box_value(const Problem& pb, int box, double y) {
  const auto& th = pb.thresholds(box);
  const auto& c = pb.capped(box);
  const DiscreteLaw& capped = y <= th.fp ? c.k : c.k_tilde;
  return expected_max({&capped}, y);
}

double single_box_value(const Problem& pb, int box, int type, double y) {
  if (pb.thresholds(box).cond_f[type] <= y) return y;
  return expected_max({&pb.capped(box).k_t[type]}, y);
}

Action single_box_action(const Problem& pb, int box, double y) {
  const auto& th = pb.thresholds(box);
  if (y >= std::max(th.f, th.p)) return Action::stop();
  if (th.f >= th.p || y <= th.fp) return Action::f_open(box);
  return Action::p_open(box);
}

Action single_box_action(const Problem& pb, int box, int type, double y) {
  return y < pb.thresholds(box).cond_f[type] ? Action::f_open(box) : Action::stop();
}

double single_box_value(const Problem& pb, const SearchState& s, int box) {
  return s.is_partial(box) ? single_box_value(pb, box, s.type[box], s.best) : single_box_value(pb, box, s.best);
}

Action single_box_action(const Problem& pb, const SearchState& s, int box) {
  return s.is_partial(box) ? single_box_action(pb, box, s.type[box], s.best) : single_box_action(pb, box, s.best);
}

}  // namespace psi
