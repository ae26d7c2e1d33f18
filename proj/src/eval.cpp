#include "psi/eval.hpp"

#include <absl/container/flat_hash_map.h>

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "psi/dp.hpp"
#include "psi/instances.hpp"
#include "psi/parallel.hpp"
#include "psi/rng.hpp"

namespace psi {

namespace {

class Evaluator {
 public:
  Evaluator(const Problem& pb, const PolicyFn& policy) : pb_(pb), policy_(policy) {}

  double value(const SearchState& s) {
    const StateKey key = pb_.codec().encode(s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Action a = policy_(s);
    if (!pb_.feasible(s, a))
      throw std::logic_error("policy chose infeasible action " + to_string(a) + " in state " + describe(s, pb_.all_laws()));
    double v = s.best;
    if (a.kind != ActionKind::Stop) {
      v = -pb_.cost(a);
      pb_.for_each_outcome(s, a, [&](double p, const SearchState& next) { v += p * value(next); });
    }
    memo_.emplace(key, v);
    return v;
  }

 private:
  const Problem& pb_;
  const PolicyFn& policy_;
  absl::flat_hash_map<StateKey, double, StateKeyHash> memo_;
};

}  // namespace

double evaluate_exact(const Problem& pb, const PolicyFn& policy) {
  return evaluate_exact(pb, policy, pb.initial_state());
}

double evaluate_exact(const Problem& pb, const PolicyFn& policy, const SearchState& root) {
  Evaluator ev(pb, policy);
  return ev.value(root);
}

SimResult simulate(const Problem& pb, const PolicyFn& policy, std::uint64_t trials, std::uint64_t seed) {
  const int n = pb.size();
  // Per box: joint outcomes with their type index, for inverse-CDF sampling.
  struct Draw {
    int type;
    double value;
    double cum;
  };
  std::vector<std::vector<Draw>> table(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& o : pb.box(i).outcomes) table[i].push_back({pb.laws(i).type_index(o.type), o.value, acc += o.prob});
    table[i].back().cum = 1.0;
  }

  double sum = 0.0, sum_sq = 0.0;
  std::vector<int> type(n);
  std::vector<double> prize(n);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    for (int i = 0; i < n; ++i) {
      const double u = to_unit(counter_word(seed, trial, static_cast<std::uint64_t>(i)));
      const auto& rows = table[i];
      std::size_t k = 0;
      while (k + 1 < rows.size() && u >= rows[k].cum) ++k;
      type[i] = rows[k].type;
      prize[i] = rows[k].value;
    }
    SearchState s = pb.initial_state();
    double profit = 0.0;
    for (;;) {
      const Action a = policy(s);
      if (!pb.feasible(s, a))
        throw std::logic_error("policy chose infeasible action " + to_string(a) + " in state " + describe(s, pb.all_laws()));
      if (a.kind == ActionKind::Stop) break;
      profit -= pb.cost(a);
      const int i = a.box;
      if (a.kind == ActionKind::POpen) {
        s.closed &= ~bit(i);
        s.partial |= bit(i);
        s.type[i] = static_cast<std::uint8_t>(type[i]);
      } else {
        s.closed &= ~bit(i);
        s.partial &= ~bit(i);
        s.type[i] = 0;
        s.best = std::max(s.best, prize[i]);
      }
    }
    profit += s.best;
    sum += profit;
    sum_sq += profit * profit;
  }
  SimResult r;
  r.trials = trials;
  r.rng = kCounterRngName;
  if (trials == 0) return r;
  const double t = static_cast<double>(trials);
  r.mean = sum / t;
  if (trials > 1) {
    const double var = std::max(0.0, (sum_sq - t * r.mean * r.mean) / (t - 1.0));
    r.stderr_mean = std::sqrt(var / t);
  }
  return r;
}

BoxSet parse_mask(std::string_view hex, int n) {
  if (hex.size() > 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
  if (hex.empty() || hex.size() > 16) throw std::invalid_argument("bad box mask '" + std::string(hex) + "'");
  BoxSet m = 0;
  for (char c : hex) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw std::invalid_argument("bad box mask '" + std::string(hex) + "'");
    m = (m << 4) | static_cast<BoxSet>(d);
  }
  if (m & ~all_boxes(n)) throw std::invalid_argument("box mask names boxes beyond the instance");
  return m;
}

PolicyFn make_policy(const Problem& pb, std::string_view name) {
  const Problem* p = &pb;
  if (name == "opt") {
    auto solver = std::make_shared<Solver>(pb, true);
    return [solver](const SearchState& s) { return solver->action(s); };
  }
  if (name == "index") return [p](const SearchState& s) { return index_action(*p, s); };
  if (name == "stp") return [p](const SearchState& s) { return stp_action(*p, s); };
  if (name == "whittle") return [p](const SearchState& s) { return whittle_lookahead_action(*p, s); };
  if (name == "best-committing") {
    const Partition part = best_committing(pb).partition;
    return [p, part](const SearchState& s) { return committing_action(*p, part, s); };
  }
  if (name.starts_with("committing:")) {
    const Partition part{parse_mask(name.substr(11), pb.size())};
    return [p, part](const SearchState& s) { return committing_action(*p, part, s); };
  }
  if (name.starts_with("half:")) {
    const Partition part = half_apx_pick(pb, {parse_mask(name.substr(5), pb.size())}).partition;
    return [p, part](const SearchState& s) { return committing_action(*p, part, s); };
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::uint64_t bench_instance_seed(std::uint64_t seed, int n, int k) {
  return counter_word(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
}

std::vector<BenchRow> benchmark(const BenchConfig& cfg) {
  struct Job {
    int n;
    int k;
  };
  std::vector<Job> jobs;
  for (int n : cfg.sizes)
    for (int k = 0; k < cfg.count; ++k) jobs.push_back({n, k});
  const std::size_t np = cfg.policies.size();
  std::vector<BenchRow> rows(jobs.size() * np);

  parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
    const auto [n, k] = jobs[j];
    const std::uint64_t iseed = bench_instance_seed(cfg.seed, n, k);
    BenchRow* out = &rows[j * np];
    for (std::size_t q = 0; q < np; ++q) {
      out[q].n = n;
      out[q].instance_seed = iseed;
      out[q].policy = cfg.policies[q];
      out[q].value = std::nan("");
    }
    try {
      const Problem pb(gen_random(n, iseed));
      double reference = std::nan("");
      if (n <= kMaxOptimalBoxes) reference = solve(pb, true).root_value;
      for (std::size_t q = 0; q < np; ++q) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
          if (cfg.policies[q] == "opt") {
            if (n > kMaxOptimalBoxes) throw std::invalid_argument("optimum not computed above 9 boxes");
            out[q].value = reference;
          } else {
            out[q].value = evaluate_exact(pb, make_policy(pb, cfg.policies[q]));
          }
        } catch (const std::exception& e) {
          out[q].error = e.what();
        }
        if (cfg.timing)
          out[q].millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
      if (std::isnan(reference)) {
        for (std::size_t q = 0; q < np; ++q)
          if (!std::isnan(out[q].value) && (std::isnan(reference) || out[q].value > reference)) reference = out[q].value;
      }
      for (std::size_t q = 0; q < np; ++q)
        out[q].ratio = reference > 1e-12 ? out[q].value / reference : (std::abs(out[q].value) <= 1e-12 ? 1.0 : 0.0);
    } catch (const std::exception& e) {
      for (std::size_t q = 0; q < np; ++q) out[q].error = e.what();
    }
  });
  return rows;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows) {
  std::map<std::pair<int, std::string>, std::vector<double>> groups;
  std::vector<std::pair<int, std::string>> order;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.n, r.policy);
    if (!groups.count(key)) order.push_back(key);
    auto& g = groups[key];
    if (r.error.empty() && !std::isnan(r.ratio)) g.push_back(r.ratio);
  }
  std::vector<BenchSummary> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    BenchSummary s;
    s.n = key.first;
    s.policy = key.second;
    s.count = static_cast<int>(g.size());
    if (!g.empty()) {
      double sum = 0.0, worst = kInf;
      for (double x : g) {
        sum += x;
        worst = std::min(worst, x);
      }
      s.mean_ratio = sum / static_cast<double>(g.size());
      double var = 0.0;
      for (double x : g) var += (x - s.mean_ratio) * (x - s.mean_ratio);
      s.std_ratio = std::sqrt(var / static_cast<double>(g.size()));
      s.worst_ratio = worst;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace psi
