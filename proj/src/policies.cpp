#include "psi/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "psi/bounds.hpp"
#include "psi/parallel.hpp"
#include "psi/singlebox.hpp"

namespace psi {

Action index_action(const Problem& pb, const SearchState& s) {
  Action best = Action::stop();
  double top = s.best;
  auto offer = [&](double index, Action a) {
    if (index > top) {
      top = index;
      best = a;
    }
  };
  for (int i = 0; i < pb.size(); ++i) {
    if (s.is_closed(i)) offer(pb.thresholds(i).f, Action::f_open(i));
    else if (s.is_partial(i)) offer(pb.thresholds(i).cond_f[s.type[i]], Action::f_open(i));
  }
  for (int i = 0; i < pb.size(); ++i)
    if (s.is_closed(i)) offer(pb.thresholds(i).p, Action::p_open(i));
  return best;
}

Action stp_action(const Problem& pb, const SearchState& s) {
  int pick = -1;
  double top = 1e-12;
  for (int i = 0; i < pb.size(); ++i) {
    if (!s.is_closed(i) && !s.is_partial(i)) continue;
    const double gain = single_box_value(pb, s, i) - s.best;
    if (gain > top) {
      top = gain;
      pick = i;
    }
  }
  return pick < 0 ? Action::stop() : single_box_action(pb, s, pick);
}

Action whittle_lookahead_action(const Problem& pb, const SearchState& s) {
  Action best = Action::stop();
  double top = s.best;
  pb.for_each_action(s, [&](const Action& a) {
    if (a.kind == ActionKind::Stop) return;
    double q = -pb.cost(a);
    pb.for_each_outcome(s, a, [&](double p, const SearchState& next) { q += p * whittle_value(pb, next); });
    if (q > top + kTol) {
      top = q;
      best = a;
    }
  });
  return best;
}

Action committing_action(const Problem& pb, Partition part, const SearchState& s) {
  Action best = Action::stop();
  double top = s.best;
  for (int i = 0; i < pb.size(); ++i) {
    double index;
    Action a;
    if (s.is_partial(i)) {
      index = pb.thresholds(i).cond_f[s.type[i]];
      a = Action::f_open(i);
    } else if (s.is_closed(i)) {
      const bool partial_first = contains(part.p_set, i);
      index = partial_first ? pb.thresholds(i).p : pb.thresholds(i).f;
      a = partial_first ? Action::p_open(i) : Action::f_open(i);
    } else {
      continue;
    }
    if (index > top) {
      top = index;
      best = a;
    }
  }
  return best;
}

double committing_value_closed_form(const Problem& pb, Partition part) {
  std::vector<const DiscreteLaw*> laws;
  laws.reserve(pb.size());
  for (int i = 0; i < pb.size(); ++i)
    laws.push_back(contains(part.p_set, i) ? &pb.capped(i).k_tilde : &pb.capped(i).k);
  return expected_max(laws, 0.0);
}

CommittingPick best_committing(const Problem& pb, int threads) {
  const int n = pb.size();
  if (n > kMaxEnumBoxes) throw std::invalid_argument("committing enumeration refuses more than 20 boxes");
  const BoxSet full = all_boxes(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  // A fixed chunking keeps the reduction order independent of the thread count.
  const std::uint64_t chunks = std::min<std::uint64_t>(64, count);
  std::vector<CommittingPick> local(chunks);
  auto better = [](const CommittingPick& cand, const CommittingPick& cur) { return cand.value > cur.value + 1e-12; };
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = count * c / chunks, hi = count * (c + 1) / chunks;
    CommittingPick best{{full & ~lo}, committing_value_closed_form(pb, {full & ~lo})};
    for (std::uint64_t f_mask = lo + 1; f_mask < hi; ++f_mask) {
      const Partition part{full & ~f_mask};
      CommittingPick cand{part, committing_value_closed_form(pb, part)};
      if (better(cand, best)) best = cand;
    }
    local[c] = best;
  });
  CommittingPick best = local[0];
  for (std::size_t c = 1; c < local.size(); ++c)
    if (better(local[c], best)) best = local[c];
  return best;
}

CommittingPick half_apx_pick(const Problem& pb, Partition part) {
  const Partition flip = part.flipped(pb.size());
  const double a = committing_value_closed_form(pb, part);
  const double b = committing_value_closed_form(pb, flip);
  return b > a + 1e-12 ? CommittingPick{flip, b} : CommittingPick{part, a};
}

namespace {

std::vector<const DiscreteLaw*> committed_laws(const Problem& pb, Partition part) {
  std::vector<const DiscreteLaw*> laws;
  for (int i = 0; i < pb.size(); ++i)
    laws.push_back(contains(part.p_set, i) ? &pb.capped(i).k_tilde : &pb.capped(i).k);
  return laws;
}

}  // namespace

double median_tau(const Problem& pb, Partition part) {
  const DiscreteCdf cdf = max_cdf(committed_laws(pb, part), 0.0);
  for (std::size_t k = 0; k < cdf.points.size(); ++k)
    if (1.0 - cdf.cum[k] <= 0.5) return cdf.points[k];
  return cdf.points.back();
}

MedianThreshold median_threshold(const Problem& pb, Partition part) {
  MedianThreshold m{median_tau(pb, part), 0.0};
  const auto laws = committed_laws(pb, part);
  // P[no box exceeds tau] as a function of the tie probability; decreasing.
  auto none_exceed = [&](double q) {
    double prod = 1.0;
    for (const DiscreteLaw* l : laws) {
      const double below = l->cdf(m.tau);
      const double at = below - l->cdf(std::nextafter(m.tau, -kInf));
      prod *= below - q * at;
    }
    return prod - 0.5;
  };
  if (none_exceed(0.0) <= 0.0) return m;
  if (none_exceed(1.0) >= 0.0) {
    m.tie = 1.0;
    return m;
  }
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  const auto [lo, hi] = boost::math::tools::bisect(none_exceed, 0.0, 1.0, tol, iters);
  m.tie = 0.5 * (lo + hi);
  return m;
}

double online_value(const Problem& pb, Partition part, double tau, const std::vector<int>& order, double tie) {
  // Backward over the order: value from position k on, nothing selected yet.
  double later = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int i = *it;
    const auto& th = pb.thresholds(i);
    const auto& l = pb.laws(i);
    const double cf = pb.box(i).cost_full;
    // Full opening; a prize exactly at tau is kept with probability q.
    auto full_open = [&](const DiscreteLaw& law, double q) {
      double v = -cf;
      for (std::size_t k = 0; k < law.size(); ++k) {
        const double x = law.values[k];
        v += law.probs[k] * (x > tau ? x : x == tau ? q * x + (1.0 - q) * later : later);
      }
      return v;
    };
    // Acting on an index: always above tau, on the coin at tau. Once the
    // coin has come up, later ties on this box are taken.
    auto gate = [&](double index, double q, auto&& act) {
      if (index > tau) return act(q);
      if (index == tau) return q * act(1.0) + (1.0 - q) * later;
      return later;
    };
    double here;
    if (!contains(part.p_set, i)) {
      here = gate(th.f, tie, [&](double q) { return full_open(l.marginal, q); });
    } else {
      here = gate(th.p, tie, [&](double q) {
        double v = -pb.box(i).cost_partial;
        for (int t = 0; t < l.type_count(); ++t)
          v += l.type_prob[t] * gate(th.cond_f[t], q, [&](double q2) { return full_open(l.conditional[t], q2); });
        return v;
      });
    }
    later = here;
  }
  return later;
}

double online_worst_order(const Problem& pb, Partition part, double tau, double tie) {
  std::vector<int> order(pb.size());
  std::iota(order.begin(), order.end(), 0);
  double worst = kInf;
  do {
    worst = std::min(worst, online_value(pb, part, tau, order, tie));
  } while (std::next_permutation(order.begin(), order.end()));
  return worst;
}

}  // namespace psi
