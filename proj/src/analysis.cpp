#include "psi/analysis.hpp"

#include <absl/container/flat_hash_map.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace psi {

CoverageStats coverage_of(const DpStats& st) {
  CoverageStats c;
  c.frac_thm1 = st.frac_thm1();
  c.frac_thm2 = st.frac_thm2();
  c.frac_thm3 = st.frac_thm3();
  c.frac_overall = st.frac_overall();
  c.recall_thm2 = st.recall_thm2();
  c.recall_thm3 = st.recall_thm3();
  c.conflicts = st.rule_conflicts;
  return c;
}

CoverageStats coverage(const Problem& pb) {
  if (pb.size() > kMaxOptimalCoverageBoxes) throw std::invalid_argument("coverage refuses more than 9 boxes");
  Solver solver(pb, false);
  solver.value(pb.initial_state());
  return coverage_of(solver.stats());
}

namespace {

// Difference constraints x_to - x_from <= w over index variables plus a
// ground node fixed at 0 that stands for the stopping index y.
struct FitSystem {
  std::vector<IndexVar> vars;
  std::map<std::tuple<int, int, int>, int> lookup;
  std::map<std::pair<int, int>, double> edges;  // tightest weight per (from, to)
  int states = 0;
  int constraints = 0;

  int ground() const { return static_cast<int>(vars.size()); }

  int node(const SearchState& s, const Action& a) const {
    if (a.kind == ActionKind::Stop) return ground();
    if (a.kind == ActionKind::POpen) return lookup.at({a.box, int(ThresholdKind::P), 0});
    if (s.is_partial(a.box)) return lookup.at({a.box, int(ThresholdKind::CondF), s.type[a.box]});
    return lookup.at({a.box, int(ThresholdKind::F), 0});
  }

  // index(win) >= index(lose) + slack, where the stopping index is y.
  void prefer(int win, int lose, double y) {
    const int g = ground();
    int from = win, to = lose;
    double w = -kIndexSlack;
    if (win == g) w = y - kIndexSlack;
    if (lose == g) w = -y - kIndexSlack;
    ++constraints;
    auto [it, fresh] = edges.try_emplace({from, to}, w);
    if (!fresh) it->second = std::min(it->second, w);
  }
};

FitSystem build_system(const Problem& pb, const std::vector<SearchState>& roots_in) {
  if (pb.size() > kMaxIndexFitBoxes) throw std::invalid_argument("index fit refuses more than 6 boxes");
  FitSystem sys;
  for (int i = 0; i < pb.size(); ++i) {
    auto add = [&](ThresholdKind k, int t) {
      sys.lookup[{i, int(k), t}] = static_cast<int>(sys.vars.size());
      sys.vars.push_back({i, k, t});
    };
    add(ThresholdKind::F, 0);
    add(ThresholdKind::P, 0);
    for (int t = 0; t < pb.laws(i).type_count(); ++t) add(ThresholdKind::CondF, t);
  }

  Solver solver(pb, false);
  std::vector<SearchState> roots = roots_in;
  if (roots.empty()) roots.push_back(pb.initial_state());
  for (const auto& r : roots) solver.value(r);

  for (const auto& s : solver.states()) {
    const MemoEntry e = *solver.find(s);
    const int win = sys.node(s, e.action);
    ++sys.states;
    pb.for_each_action(s, [&](const Action& a) {
      if (a == e.action) return;
      if (solver.q_value(s, a) < e.value - kTol) sys.prefer(win, sys.node(s, a), s.best);
    });
  }
  return sys;
}

}  // namespace

IndexFit index_fit(const Problem& pb, const std::vector<SearchState>& roots) {
  const FitSystem sys = build_system(pb, roots);
  IndexFit fit;
  fit.vars = sys.vars;
  fit.states = sys.states;
  fit.constraints = sys.constraints;

  // Bellman-Ford from a virtual source joined to every node with weight 0.
  const int nodes = sys.ground() + 1;
  std::vector<double> dist(nodes, 0.0);
  bool changed = true;
  for (int round = 0; round < nodes && changed; ++round) {
    changed = false;
    for (const auto& [uv, w] : sys.edges) {
      if (dist[uv.first] + w < dist[uv.second]) {
        dist[uv.second] = dist[uv.first] + w;
        changed = true;
      }
    }
  }
  fit.feasible = !changed;
  if (fit.feasible) {
    const double g = dist[sys.ground()];
    for (int v = 0; v < sys.ground(); ++v) fit.witness.push_back(dist[v] - g);
  }
  return fit;
}

bool index_assignment_fits(const Problem& pb, const std::vector<SearchState>& roots, const IndexFit& candidate) {
  const FitSystem sys = build_system(pb, roots);
  if (candidate.witness.size() != sys.vars.size()) return false;
  auto x = [&](int v) { return v == sys.ground() ? 0.0 : candidate.witness[v]; };
  for (const auto& [uv, w] : sys.edges)
    if (x(uv.second) - x(uv.first) > w + 1e-12) return false;
  return true;
}

Action fitted_index_action(const Problem& pb, const IndexFit& fit, const SearchState& s) {
  auto value_of = [&](int box, ThresholdKind k, int t) {
    for (std::size_t v = 0; v < fit.vars.size(); ++v)
      if (fit.vars[v].box == box && fit.vars[v].kind == k && (k != ThresholdKind::CondF || fit.vars[v].type == t))
        return fit.witness[v];
    return -kInf;
  };
  Action best = Action::stop();
  double top = s.best;
  auto offer = [&](double idx, Action a) {
    if (idx > top) {
      top = idx;
      best = a;
    }
  };
  for (int i = 0; i < pb.size(); ++i) {
    if (s.is_closed(i)) offer(value_of(i, ThresholdKind::F, 0), Action::f_open(i));
    else if (s.is_partial(i)) offer(value_of(i, ThresholdKind::CondF, s.type[i]), Action::f_open(i));
  }
  for (int i = 0; i < pb.size(); ++i)
    if (s.is_closed(i)) offer(value_of(i, ThresholdKind::P, 0), Action::p_open(i));
  return best;
}

double p_ratio(const Problem& pb) {
  if (pb.size() > kMaxOptimalCoverageBoxes) throw std::invalid_argument("p_ratio refuses more than 9 boxes");
  Solver solver(pb, true);
  // Expected counts of (partial openings, full openings of closed boxes).
  absl::flat_hash_map<StateKey, std::pair<double, double>, StateKeyHash> memo;
  auto counts = [&](auto&& self, const SearchState& s) -> std::pair<double, double> {
    const StateKey key = pb.codec().encode(s);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const Action a = solver.action(s);
    std::pair<double, double> c{0.0, 0.0};
    if (a.kind != ActionKind::Stop) {
      if (a.kind == ActionKind::POpen) c.first += 1.0;
      else if (s.is_closed(a.box)) c.second += 1.0;
      pb.for_each_outcome(s, a, [&](double p, const SearchState& next) {
        const auto sub = self(self, next);
        c.first += p * sub.first;
        c.second += p * sub.second;
      });
    }
    memo.emplace(key, c);
    return c;
  };
  const auto [np, nf] = counts(counts, pb.initial_state());
  return np + nf > 0 ? np / (np + nf) : 0.0;
}

double dispersion(const Problem& pb) {
  auto pop_std = [&](auto pick) {
    double mean = 0.0;
    for (int i = 0; i < pb.size(); ++i) mean += pick(pb.thresholds(i));
    mean /= pb.size();
    double var = 0.0;
    for (int i = 0; i < pb.size(); ++i) var += std::pow(pick(pb.thresholds(i)) - mean, 2);
    return std::sqrt(var / pb.size());
  };
  return pop_std([](const ThresholdSet& t) { return t.f; }) + pop_std([](const ThresholdSet& t) { return t.p; });
}

double asymptotic_bound(const Problem& pb, int n, LeadKind which) {
  const auto& th = pb.thresholds(0);
  const auto& l = pb.laws(0);
  if (which == LeadKind::F) {
    if (th.f < th.p) throw std::invalid_argument("asymptotic bound: sigma^F does not lead");
    const double u = l.marginal.tail(th.f);
    return (1.0 - std::pow(1.0 - u, n)) * th.f;
  }
  if (th.p < th.f) throw std::invalid_argument("asymptotic bound: sigma^P does not lead");
  double pq = 0.0;  // P[sigma^{F|T} > sigma^P and V > sigma^P]
  for (int t = 0; t < l.type_count(); ++t)
    if (th.cond_f[t] > th.p) pq += l.type_prob[t] * l.conditional[t].tail(th.p);
  return (1.0 - std::pow(1.0 - pq, n)) * th.p;
}

}  // namespace psi
