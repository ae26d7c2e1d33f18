#include "psi/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "psi/policies.hpp"
#include "psi/problem.hpp"

namespace psi {

namespace {

// Uniform in (0, 1]; never exactly zero so normalized weights stay positive.
double open_unit(std::mt19937_64& rng) { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * open_unit(rng); }

std::vector<double> normalized_weights(std::mt19937_64& rng, int k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (auto& x : w) total += x = open_unit(rng);
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

Instance gen_random(int n, std::uint64_t seed, const RandomConfig& cfg) {
  if (n < 1) throw std::invalid_argument("need at least one box");
  std::mt19937_64 rng(seed);
  static const char* const kLabels[] = {"A", "B", "C", "D", "E", "F", "G", "H"};
  const int max_types = std::clamp(cfg.max_types, 1, 8);
  Instance inst;
  for (int id = 0; id < n; ++id) {
    std::vector<double> support;
    while (static_cast<int>(support.size()) < cfg.support_size) {
      const double v = uniform(rng, cfg.value_lo, cfg.value_hi);
      if (std::find(support.begin(), support.end(), v) == support.end()) support.push_back(v);
    }
    std::sort(support.begin(), support.end());
    const int types = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_types));
    const auto type_prob = normalized_weights(rng, types);

    Box box;
    box.id = id;
    for (int t = 0; t < types; ++t) {
      const auto cond = normalized_weights(rng, cfg.support_size);
      for (int k = 0; k < cfg.support_size; ++k) box.outcomes.push_back({kLabels[t], support[k], type_prob[t] * cond[k]});
    }
    box.cost_full = uniform(rng, cfg.cf_lo, cfg.cf_hi);
    do {
      box.cost_partial = uniform(rng, cfg.cp_lo, cfg.cp_hi);
    } while (box.cost_partial > box.cost_full);
    inst.boxes.push_back(std::move(box));
  }
  validate(inst);
  return inst;
}

HardInstance gen_hard(const std::vector<long long>& a, long long target, bool ratio_guard) {
  if (a.empty()) throw ValidationError("item list is empty");
  HardSpec spec;
  spec.a = a;
  spec.target = target;
  for (long long x : a) {
    if (x <= 0) throw ValidationError("items must be positive integers");
    spec.total += x;
  }
  if (target <= 0 || 2 * target > spec.total) throw ValidationError("target must satisfy 0 < T <= sum(a)/2");
  spec.alpha = std::log(1.5) / static_cast<double>(spec.total - target);

  HardInstance out;
  std::ostringstream bad;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = -std::expm1(-spec.alpha * static_cast<double>(a[i]));
    const double ph = -std::expm1(-spec.alpha * static_cast<double>(a[i]) / 2.0);
    spec.p.push_back(p);
    spec.p_half.push_back(ph);
    const double q_bad = (p - ph) / (1.0 - ph);
    const double cf = 0.6 * p;
    const double cp = ph * (1.0 / 3.0 - cf);

    std::vector<std::string> why;
    if (!(p > ph && ph > p / 2)) why.push_back("p > p' > p/2");
    if (!(cp > 0)) why.push_back("positive partial cost");
    if (!(q_bad - cf < 0)) why.push_back("negative bad-type threshold");
    if (!(1.0 - cf >= 2.0 / 3.0)) why.push_back("good-type threshold >= 2/3");
    if (ratio_guard && static_cast<double>(a[i]) > kHardItemRatioGuard * static_cast<double>(spec.total))
      why.push_back("item share <= 0.05");
    if (!why.empty()) {
      bad << (bad.tellp() > 0 ? "; " : "") << "item " << i << " (a=" << a[i] << ") violates";
      for (const auto& w : why) bad << ' ' << w;
    }

    Box box;
    box.id = static_cast<int>(i);
    box.cost_full = cf;
    box.cost_partial = cp;
    box.outcomes.push_back({"G", 1.0, ph});
    box.outcomes.push_back({"B", 1.0, (1.0 - ph) * q_bad});
    box.outcomes.push_back({"B", 0.0, (1.0 - ph) * (1.0 - q_bad)});
    out.instance.boxes.push_back(std::move(box));
  }
  if (bad.tellp() > 0) throw ValidationError("well-separation check failed: " + bad.str());
  validate(out.instance);
  out.spec = std::move(spec);
  return out;
}

double psi_objective(const HardSpec& spec, BoxSet p_set) {
  double in_p = 0.0, in_f = 0.0;
  for (std::size_t i = 0; i < spec.a.size(); ++i)
    (contains(p_set, static_cast<int>(i)) ? in_p : in_f) += static_cast<double>(spec.a[i]);
  const double miss_p = std::exp(-spec.alpha * in_p / 2.0);
  return (2.0 / 3.0) * (1.0 - miss_p) + 0.4 * (-std::expm1(-spec.alpha * in_f)) * miss_p;
}

double psi_of_fraction(const HardSpec& spec, double x) {
  const double mass = spec.alpha * static_cast<double>(spec.total);
  const double miss_p = std::exp(-mass * x / 2.0);
  return (2.0 / 3.0) * (1.0 - miss_p) + 0.4 * (-std::expm1(-mass * (1.0 - x))) * miss_p;
}

SubsetSumCheck verify_subset_sum_correspondence(const std::vector<long long>& a, long long target, int threads) {
  if (a.size() > static_cast<std::size_t>(kMaxEnumBoxes)) throw ValidationError("enumeration guard: at most 20 items");
  const auto hard = gen_hard(a, target);
  const Problem pb(hard.instance);
  const auto pick = best_committing(pb, threads);
  SubsetSumCheck out;
  out.p_set = pick.partition.p_set;
  out.value = pick.value;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (contains(out.p_set, static_cast<int>(i))) out.sum += a[i];
  out.matches_target = out.sum == target;
  return out;
}

bool b2i_degenerate(const B2IParams& prm) {
  return prm.q_good <= 0 || prm.q_good >= 1 || prm.q_bad <= 0 || prm.q_bad >= 1;
}

namespace {

void check_params(const B2IParams& prm) {
  if (prm.n < 1) throw ValidationError("b2i: n must be at least 1");
  if (!(prm.p_good > 0 && prm.p_good < 1)) throw ValidationError("b2i: p_good must lie in (0, 1)");
  if (!(prm.q_good >= 0 && prm.q_good <= 1 && prm.q_bad >= 0 && prm.q_bad <= 1))
    throw ValidationError("b2i: q_good and q_bad must lie in [0, 1]");
  if (!(prm.q_good > prm.q_bad)) throw ValidationError("b2i: q_good must exceed q_bad");
  if (!(prm.c_f > 0 && prm.c_p > 0)) throw ValidationError("b2i: costs must be positive");
}

}  // namespace

Instance gen_b2i(const B2IParams& prm) {
  check_params(prm);
  Instance inst;
  const double pb = 1.0 - prm.p_good;
  for (int i = 0; i < prm.n; ++i) {
    Box box;
    box.id = i;
    box.cost_full = prm.c_f;
    box.cost_partial = prm.c_p;
    const std::pair<const char*, std::pair<double, double>> rows[] = {
        {"G", {1.0, prm.p_good * prm.q_good}},
        {"G", {0.0, prm.p_good * (1.0 - prm.q_good)}},
        {"B", {1.0, pb * prm.q_bad}},
        {"B", {0.0, pb * (1.0 - prm.q_bad)}},
    };
    for (const auto& [label, vp] : rows)
      if (vp.second > 0) box.outcomes.push_back({label, vp.first, vp.second});
    inst.boxes.push_back(std::move(box));
  }
  validate(inst);
  return inst;
}

std::string to_string(B2IMove m) {
  switch (m) {
    case B2IMove::Stop: return "Stop";
    case B2IMove::FullOpenClosed: return "FOpen";
    case B2IMove::PartialOpen: return "POpen";
    case B2IMove::FullOpenBad: return "FOpenBad";
  }
  return "?";
}

B2IResult b2i_solve(const B2IParams& prm) {
  B2IParams one = prm;
  one.n = 1;
  const Problem single(gen_b2i(one));
  const auto& th = single.thresholds(0);

  B2IResult res;
  if (th.f >= th.p) {
    res.regime = "F-only";
  } else {
    res.regime = "switch";
    if (!(th.fp > 0)) throw ValidationError("b2i: assumption violated: sigma^{F/P} > 0");
    if (!(th.fp < th.f)) throw ValidationError("b2i: assumption violated: sigma^{F/P} < sigma^F");
  }

  const int n = prm.n;
  const double pg = prm.p_good, pbad = 1.0 - prm.p_good;
  const double p1 = pg * prm.q_good + pbad * prm.q_bad;
  // J[nc][nb] for nc + nb <= n, swept by diagonals nc + nb = total.
  std::vector<std::vector<double>> J(n + 1);
  std::vector<std::vector<B2IRow>> rows(n + 1);
  for (int nc = 0; nc <= n; ++nc) {
    J[nc].assign(n - nc + 1, 0.0);
    rows[nc].resize(n - nc + 1);
  }
  for (int total = 0; total <= n; ++total) {
    // Dependencies lie on an earlier diagonal or, for J[nc-1][nb+1], earlier
    // on this one.
    for (int nc = 0; nc <= total; ++nc) {
      const int nb = total - nc;
      if (nc + nb > n) continue;
      B2IRow r;
      r.n_closed = nc;
      r.n_bad = nb;
      r.q_full = r.q_partial = r.q_bad = -kInf;
      if (nc >= 1) {
        r.q_full = -prm.c_f + p1 + (1.0 - p1) * J[nc - 1][nb];
        r.q_partial = -prm.c_p + pg * (-prm.c_f + prm.q_good + (1.0 - prm.q_good) * J[nc - 1][nb]) + pbad * J[nc - 1][nb + 1];
      }
      if (nb >= 1) r.q_bad = -prm.c_f + prm.q_bad + (1.0 - prm.q_bad) * J[nc][nb - 1];
      r.value = 0.0;
      r.move = B2IMove::Stop;
      const std::pair<double, B2IMove> options[] = {
          {r.q_full, B2IMove::FullOpenClosed}, {r.q_partial, B2IMove::PartialOpen}, {r.q_bad, B2IMove::FullOpenBad}};
      for (const auto& [q, m] : options)
        if (q > r.value + kTol) {
          r.value = q;
          r.move = m;
        }
      J[nc][nb] = r.value;
      rows[nc][nb] = r;
    }
  }
  res.value = J[n][0];
  res.switch_point = 0;
  for (int nc = 1; nc <= n; ++nc)
    if (rows[nc][0].move != B2IMove::PartialOpen) res.switch_point = nc;
  for (int nc = 1; nc <= n; ++nc) {
    double lo = kInf, hi = -kInf;
    for (int nb = 0; nb + nc <= n; ++nb) {
      const auto& r = rows[nc][nb];
      if (r.move == B2IMove::FullOpenBad) res.defers_bad = false;
      if (r.move != B2IMove::Stop && (r.move == B2IMove::PartialOpen) != (nc > res.switch_point)) res.single_switch = false;
      lo = std::min(lo, r.q_full - r.q_partial);
      hi = std::max(hi, r.q_full - r.q_partial);
    }
    res.nb_spread = std::max(res.nb_spread, hi - lo);
  }
  for (int nc = 0; nc <= n; ++nc)
    for (const auto& r : rows[nc]) res.table.push_back(r);
  return res;
}

}  // namespace psi
