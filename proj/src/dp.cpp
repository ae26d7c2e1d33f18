#include "psi/dp.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "psi/singlebox.hpp"

namespace psi {

bool stopping_optimal(const Problem& pb, const SearchState& s) {
  const Leader lead = pb.sigma_max(s);
  return !lead.valid() || s.best >= lead.value;
}

std::optional<int> leader_f_rule(const Problem& pb, const SearchState& s) {
  const Leader lead = pb.sigma_max(s);
  if (!lead.valid() || !lead.f_kind() || s.best >= lead.value) return std::nullopt;
  // The F-threshold must lead every P-threshold (its own included) strictly.
  for (int j = 0; j < pb.size(); ++j)
    if (s.is_closed(j) && pb.thresholds(j).p > lead.value - kTol) return std::nullopt;
  return lead.box;
}

std::optional<int> leader_p_rule(const Problem& pb, const SearchState& s) {
  const Leader lead = pb.sigma_max(s);
  if (!lead.valid() || lead.f_kind() || s.best >= lead.value) return std::nullopt;
  const int i = lead.box;
  // Ties with other P-thresholds are allowed; F-kind thresholds must trail strictly.
  for (int j = 0; j < pb.size(); ++j) {
    if (s.is_closed(j) && pb.thresholds(j).f > lead.value - kTol) return std::nullopt;
    if (s.is_partial(j) && pb.thresholds(j).cond_f[s.type[j]] > lead.value - kTol) return std::nullopt;
  }
  const auto& th = pb.thresholds(i);
  const double y = s.best;
  if (!(y > th.fp)) return std::nullopt;
  const double rest = pb.sigma_max(s, i).value;  // -inf when i is the only box
  for (double c : th.cond_f)
    if (!(c >= rest || y > c)) return std::nullopt;
  return i;
}

RuleHit classify(const Problem& pb, const SearchState& s) {
  if (stopping_optimal(pb, s)) return {Rule::Stopping, Action::stop()};
  const BoxSet remaining = s.closed | s.partial;
  if (std::popcount(remaining) == 1) {
    const int i = std::countr_zero(remaining);
    return {Rule::SingleBox, single_box_action(pb, s, i)};
  }
  if (auto i = leader_f_rule(pb, s)) return {Rule::LeaderF, Action::f_open(*i)};
  if (auto i = leader_p_rule(pb, s)) return {Rule::LeaderP, Action::p_open(*i)};
  return {};
}

namespace {

void tally(DpStats& st, const MemoEntry& e) {
  ++st.visits;
  switch (e.rule) {
    case Rule::Stopping: ++st.visits_stopping; break;
    case Rule::SingleBox: ++st.visits_single; break;
    case Rule::LeaderF: ++st.visits_thm2; break;
    case Rule::LeaderP: ++st.visits_thm3; break;
    case Rule::None: break;
  }
  if (e.action.kind == ActionKind::FOpen) {
    ++st.visits_f_optimal;
    if (e.rule == Rule::LeaderF) ++st.visits_f_caught;
  } else if (e.action.kind == ActionKind::POpen) {
    ++st.visits_p_optimal;
    if (e.rule == Rule::LeaderP) ++st.visits_p_caught;
  }
}

}  // namespace

Solver::Solver(const Problem& pb, bool prune) : pb_(pb), prune_(prune) {
  if (pb.size() > kMaxDpBoxes) throw std::invalid_argument("exact solver refuses instances with more than 24 boxes");
  if (!pb.codec().encodable()) throw std::invalid_argument("state space too large to encode");
}

double Solver::value(const SearchState& s) {
  const StateKey key = pb_.codec().encode(s);
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++it->second.visits;
    ++stats_.states_revisited;
    tally(stats_, it->second);
    return it->second.value;
  }
  return solve_state(s, key);
}

double Solver::q_value(const SearchState& s, const Action& a) {
  if (a.kind == ActionKind::Stop) return s.best;
  double q = -pb_.cost(a);
  pb_.for_each_outcome(s, a, [&](double p, const SearchState& next) { q += p * value(next); });
  return q;
}

double Solver::solve_state(const SearchState& s, StateKey key) {
  const RuleHit hit = classify(pb_, s);
  MemoEntry e;
  e.rule = hit.rule;
  e.visits = 1;
  if (prune_ && hit.rule != Rule::None) {
    e.action = hit.action;
    e.value = q_value(s, hit.action);
  } else {
    e.value = s.best;
    e.action = Action::stop();
    double rule_q = hit.rule != Rule::None && hit.action.kind == ActionKind::Stop ? s.best : -kInf;
    pb_.for_each_action(s, [&](const Action& a) {
      if (a.kind == ActionKind::Stop) return;
      const double q = q_value(s, a);
      if (hit.rule != Rule::None && a == hit.action) rule_q = q;
      if (q > e.value + kTol) {
        e.value = q;
        e.action = a;
      }
    });
    if (hit.rule != Rule::None && rule_q < e.value - kTol) ++stats_.rule_conflicts;
  }
  ++stats_.states_created;
  tally(stats_, e);
  memo_.emplace(key, e);
  return e.value;
}

Action Solver::action(const SearchState& s) {
  if (const auto* e = find(s)) return e->action;
  value(s);
  return find(s)->action;
}

const MemoEntry* Solver::find(const SearchState& s) const {
  auto it = memo_.find(pb_.codec().encode(s));
  return it == memo_.end() ? nullptr : &it->second;
}

std::vector<SearchState> Solver::states() const {
  std::vector<StateKey> keys;
  keys.reserve(memo_.size());
  for (const auto& [k, e] : memo_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::vector<SearchState> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(pb_.codec().decode(k));
  return out;
}

Solution solve(const Problem& pb, bool prune) {
  Solver solver(pb, prune);
  const SearchState root = pb.initial_state();
  Solution sol;
  sol.root_value = solver.value(root);
  sol.root_action = solver.action(root);
  sol.stats = solver.stats();
  return sol;
}

}  // namespace psi
