// psi: command-line front end for the solver suite. Every subcommand writes
// CSV (or instance JSON for the generators) to stdout or --out.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "psi/analysis.hpp"
#include "psi/csv.hpp"
#include "psi/dp.hpp"
#include "psi/eval.hpp"
#include "psi/instances.hpp"
#include "psi/parallel.hpp"
#include "psi/policies.hpp"
#include "psi/problem.hpp"

namespace {

using namespace psi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad integer '" + tok + "' in list '" + text + "'");
    }
  }
  return out;
}

std::vector<int> parse_sizes(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<int> sizes;
  if (dots == std::string::npos) {
    for (auto v : parse_int_list(text)) sizes.push_back(static_cast<int>(v));
  } else {
    const auto lo = parse_int_list(text.substr(0, dots));
    const auto hi = parse_int_list(text.substr(dots + 2));
    if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) throw UsageError("bad size range '" + text + "'");
    for (long long n = lo[0]; n <= hi[0]; ++n) sizes.push_back(static_cast<int>(n));
  }
  for (int n : sizes)
    if (n < 1 || n > kMaxBoxes) throw UsageError("box counts must lie in 1..64");
  return sizes;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

std::string order_label(const std::vector<int>& order) {
  std::string s;
  for (std::size_t k = 0; k < order.size(); ++k) s += (k ? " " : "") + std::to_string(order[k]);
  return s;
}

void cmd_thresholds(const std::string& file) {
  const Problem pb(load_instance_file(file));
  std::vector<std::string> labels;
  for (int i = 0; i < pb.size(); ++i)
    for (const auto& t : pb.laws(i).types)
      if (std::find(labels.begin(), labels.end(), t) == labels.end()) labels.push_back(t);
  std::cout << "id,sigma_f,sigma_p,sigma_fp";
  for (const auto& t : labels) std::cout << ",sigma_f_given_" << t;
  std::cout << '\n';
  for (int i = 0; i < pb.size(); ++i) {
    const auto& th = pb.thresholds(i);
    std::cout << i << ',' << fmt(th.f) << ',' << fmt(th.p) << ',' << fmt(th.fp);
    for (const auto& t : labels) {
      const int k = pb.laws(i).type_index(t);
      std::cout << ',' << (k < 0 ? "" : fmt(th.cond_f[k]));
    }
    std::cout << '\n';
  }
}

void cmd_solve(const std::string& file, bool prune, bool stats) {
  const Problem pb(load_instance_file(file));
  const Solution sol = solve(pb, prune);
  std::cout << "root_value,root_action,root_box";
  if (stats) std::cout << ",states_created,states_revisited,frac_thm1,frac_thm2,frac_thm3,frac_overall";
  std::cout << '\n';
  std::cout << fmt(sol.root_value) << ',' << kind_name(sol.root_action.kind) << ','
            << (sol.root_action.box < 0 ? "" : std::to_string(sol.root_action.box));
  if (stats) {
    const auto& st = sol.stats;
    std::cout << ',' << st.states_created << ',' << st.states_revisited << ',' << fmt(st.frac_thm1()) << ','
              << fmt(st.frac_thm2()) << ',' << fmt(st.frac_thm3()) << ',' << fmt(st.frac_overall());
  }
  std::cout << '\n';
}

void cmd_eval(const std::string& file, const std::string& policy, std::uint64_t trials, std::uint64_t seed) {
  const Problem pb(load_instance_file(file));
  PolicyFn fn;
  try {
    fn = make_policy(pb, policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double value = evaluate_exact(pb, fn);
  std::string ratio;
  if (pb.size() <= kMaxOptimalBoxes) {
    const double opt = solve(pb, true).root_value;
    ratio = fmt(opt > 1e-12 ? value / opt : 1.0);
  }
  std::cout << "policy,value,ratio";
  if (trials > 0) std::cout << ",sim_mean,sim_stderr,sim_trials,rng";
  std::cout << '\n' << policy << ',' << fmt(value) << ',' << ratio;
  if (trials > 0) {
    const SimResult sim = simulate(pb, fn, trials, seed);
    std::cout << ',' << fmt(sim.mean) << ',' << fmt(sim.stderr_mean) << ',' << sim.trials << ',' << sim.rng;
  }
  std::cout << '\n';
}

void cmd_bounds(const std::string& file, const std::string& state) {
  const Problem pb(load_instance_file(file));
  SearchState s = state.empty() ? pb.initial_state() : parse_state(state, pb.all_laws());
  std::string exact;
  if (pb.size() <= kMaxOptimalBoxes) {
    // The state's y may lie off the support grid; give the solver that level too.
    const Problem with_y(pb.instance(), {s.best});
    Solver solver(with_y, true);
    exact = fmt(solver.value(s));
  }
  std::cout << "J,J_whittle,J_free_info\n"
            << exact << ',' << fmt(whittle_value(pb, s)) << ',' << fmt(free_info_value(pb, s)) << '\n';
}

void cmd_online(const std::string& file, const std::string& mask, const std::string& order_text, bool all_orders) {
  const Problem pb(load_instance_file(file));
  Partition part;
  try {
    part.p_set = parse_mask(mask, pb.size());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const MedianThreshold m = median_threshold(pb, part);
  const double tau = m.tau;
  const std::string head = fmt(tau) + ',' + fmt(m.tie) + ',';
  std::cout << "tau,tie,order,value\n";
  std::vector<int> order(pb.size());
  std::iota(order.begin(), order.end(), 0);
  if (all_orders) {
    double worst = kInf;
    do {
      const double v = online_value(pb, part, tau, order, m.tie);
      worst = std::min(worst, v);
      std::cout << head << order_label(order) << ',' << fmt(v) << '\n';
    } while (std::next_permutation(order.begin(), order.end()));
    std::cout << head << "worst," << fmt(worst) << '\n';
    return;
  }
  if (!order_text.empty()) {
    order.clear();
    for (auto v : parse_int_list(order_text)) order.push_back(static_cast<int>(v));
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < pb.size(); ++k)
      if (static_cast<int>(sorted.size()) != pb.size() || sorted[k] != k) throw UsageError("--order must be a permutation of the box ids");
  }
  std::cout << head << order_label(order) << ',' << fmt(online_value(pb, part, tau, order, m.tie)) << '\n';
}

void cmd_hard(const std::string& items, long long target, bool verify, bool ratio_guard, const std::string& out) {
  const auto a = parse_int_list(items);
  if (!verify) {
    const auto hard = gen_hard(a, target, ratio_guard);
    Output o(out);
    o.get() << dump_instance(hard.instance) << '\n';
    return;
  }
  const auto hard = gen_hard(a, target, ratio_guard);
  const auto check = verify_subset_sum_correspondence(a, target, worker_count());
  std::ostringstream mask;
  mask << std::hex << check.p_set;
  std::cout << "p_set,sum,target,matches_target,value,psi\n"
            << mask.str() << ',' << check.sum << ',' << target << ',' << (check.matches_target ? "true" : "false") << ','
            << fmt(check.value) << ',' << fmt(psi_objective(hard.spec, check.p_set)) << '\n';
}

void cmd_b2i(const B2IParams& prm, bool solve_it, bool table, const std::string& out) {
  if (!solve_it && !table) {
    Output o(out);
    o.get() << dump_instance(gen_b2i(prm)) << '\n';
    return;
  }
  const auto res = b2i_solve(prm);
  if (table) {
    std::cout << "n_closed,n_bad,move,value,q_full,q_partial,q_bad\n";
    for (const auto& r : res.table)
      std::cout << r.n_closed << ',' << r.n_bad << ',' << to_string(r.move) << ',' << fmt(r.value) << ',' << fmt(r.q_full)
                << ',' << fmt(r.q_partial) << ',' << fmt(r.q_bad) << '\n';
    return;
  }
  std::cout << "regime,value,switch_point,single_switch,defers_bad,nb_spread,degenerate\n"
            << res.regime << ',' << fmt(res.value) << ',' << res.switch_point << ',' << (res.single_switch ? "true" : "false")
            << ',' << (res.defers_bad ? "true" : "false") << ',' << fmt(res.nb_spread) << ','
            << (b2i_degenerate(prm) ? "true" : "false") << '\n';
}

void cmd_bench(BenchConfig cfg, const std::string& sizes, const std::string& policies, const std::string& out,
               const std::string& summary_out) {
  cfg.sizes = parse_sizes(sizes);
  cfg.policies = split_names(policies);
  if (cfg.policies.empty()) throw UsageError("--policies is empty");
  {
    const Problem probe(gen_random(1, 0));
    for (const auto& p : cfg.policies) {
      if (p == "opt") continue;
      try {
        make_policy(probe, p);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
  }
  cfg.threads = worker_count();
  const auto rows = benchmark(cfg);
  Output o(out);
  o.get() << "n,instance_seed,policy,value,ratio,millis\n";
  for (const auto& r : rows) {
    o.get() << r.n << ',' << r.instance_seed << ',' << r.policy << ',' << fmt(r.value) << ',' << fmt(r.ratio) << ','
            << (r.millis < 0 ? "" : fmt(r.millis)) << '\n';
    if (!r.error.empty())
      std::cerr << "warning: n=" << r.n << " seed=" << r.instance_seed << " policy=" << r.policy << ": " << r.error << '\n';
  }
  if (!summary_out.empty()) {
    Output s(summary_out);
    s.get() << "n,policy,count,mean_ratio,std_ratio,worst_ratio\n";
    for (const auto& g : summarize(rows))
      s.get() << g.n << ',' << g.policy << ',' << g.count << ',' << fmt(g.mean_ratio) << ',' << fmt(g.std_ratio) << ','
              << fmt(g.worst_ratio) << '\n';
  }
}

void cmd_analyze(const std::string& file, bool cov, bool fit, bool pr, bool disp) {
  const Problem pb(load_instance_file(file));
  if (!cov && !fit && !pr && !disp) cov = fit = pr = disp = true;
  std::vector<std::pair<std::string, std::string>> cells;
  if (cov) {
    const auto c = coverage(pb);
    cells.insert(cells.end(), {{"frac_thm1", fmt(c.frac_thm1)},
                               {"frac_thm2", fmt(c.frac_thm2)},
                               {"frac_thm3", fmt(c.frac_thm3)},
                               {"frac_overall", fmt(c.frac_overall)},
                               {"recall_thm2", fmt(c.recall_thm2)},
                               {"recall_thm3", fmt(c.recall_thm3)},
                               {"rule_conflicts", std::to_string(c.conflicts)}});
  }
  if (fit) {
    const auto f = index_fit(pb);
    cells.push_back({"index_fit", f.feasible ? "feasible" : "infeasible"});
    cells.push_back({"index_fit_states", std::to_string(f.states)});
  }
  if (pr) cells.push_back({"p_ratio", fmt(p_ratio(pb))});
  if (disp) cells.push_back({"dispersion", fmt(dispersion(pb))});
  for (std::size_t k = 0; k < cells.size(); ++k) std::cout << (k ? "," : "") << cells[k].first;
  std::cout << '\n';
  for (std::size_t k = 0; k < cells.size(); ++k) std::cout << (k ? "," : "") << cells[k].second;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pandora's box with sequential inspection: thresholds, exact DP, bounds and policies"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string file, state, policy, mask, order, items, sizes, policies, out, summary_out;
  std::string format = "csv";
  bool prune = false, stats = false, all_orders = false, verify = false, ratio_guard = false;
  bool b2i_solve_flag = false, b2i_table = false, timing = false;
  bool cov = false, fit = false, pr = false, disp = false;
  std::uint64_t trials = 0, seed = 0;
  long long target = 0;
  int boxes = 0;
  B2IParams b2i;
  BenchConfig bench;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  };

  auto* th = app.add_subcommand("thresholds", "Opening thresholds of every box");
  th->add_option("instance", file, "Instance JSON file")->required();
  add_format(th);

  auto* so = app.add_subcommand("solve", "Exact optimal value and root action");
  so->add_option("instance", file, "Instance JSON file")->required();
  so->add_flag("--prune", prune, "Apply the structural rules before expanding");
  so->add_flag("--stats", stats, "Print state counts and rule coverage");
  add_format(so);

  auto* ev = app.add_subcommand("eval", "Exact value of a policy");
  ev->add_option("instance", file, "Instance JSON file")->required();
  ev->add_option("--policy", policy, "opt|index|stp|whittle|committing:<hex>|best-committing|half:<hex>")->required();
  ev->add_option("--simulate", trials, "Monte Carlo trials to run alongside");
  ev->add_option("--seed", seed, "Random seed");
  add_format(ev);

  auto* bo = app.add_subcommand("bounds", "Exact value and upper bounds at a state");
  bo->add_option("instance", file, "Instance JSON file")->required();
  bo->add_option("--state", state, "State such as \"C=0,1;P=2:B;y=1.5\" (default: initial state)");
  add_format(bo);

  auto* on = app.add_subcommand("online", "Online threshold algorithm");
  on->add_option("instance", file, "Instance JSON file")->required();
  on->add_option("--partition", mask, "Hex mask of boxes opened partially first")->required();
  auto* order_opt = on->add_option("--order", order, "Presentation order, e.g. 2,0,1");
  on->add_flag("--all-orders", all_orders, "Evaluate every presentation order")->excludes(order_opt);
  add_format(on);

  auto* ge = app.add_subcommand("gen", "Random instance");
  ge->add_option("--boxes", boxes, "Number of boxes")->required()->check(CLI::Range(1, kMaxBoxes));
  ge->add_option("--seed", seed, "Random seed");
  ge->add_option("--out", out, "Output file");

  auto* ha = app.add_subcommand("hard", "Subset-sum hardness instance");
  ha->add_option("--items", items, "Comma separated positive integers")->required();
  ha->add_option("--target", target, "Subset-sum target")->required();
  ha->add_flag("--verify", verify, "Solve the committing problem and compare with the target");
  ha->add_flag("--ratio-guard", ratio_guard, "Also require every item share to be at most 0.05");
  ha->add_option("--out", out, "Output file");

  auto* bi = app.add_subcommand("b2i", "Identical Bernoulli two-type boxes");
  bi->add_option("--n", b2i.n, "Number of boxes")->required();
  bi->add_option("--pg", b2i.p_good, "P[T = G]")->required();
  bi->add_option("--qg", b2i.q_good, "P[V = 1 | G]")->required();
  bi->add_option("--qb", b2i.q_bad, "P[V = 1 | B]")->required();
  bi->add_option("--cf", b2i.c_f, "Full opening cost")->required();
  bi->add_option("--cp", b2i.c_p, "Partial opening cost")->required();
  bi->add_flag("--solve", b2i_solve_flag, "Solve the collapsed DP and report the switch point");
  bi->add_flag("--table", b2i_table, "Print the collapsed DP table");
  bi->add_option("--out", out, "Output file for the instance");

  auto* be = app.add_subcommand("bench", "Benchmark policies on random instances");
  be->add_option("--sizes", sizes, "Box counts, e.g. 2..7 or 3,5")->required();
  be->add_option("--count", bench.count, "Instances per size")->check(CLI::PositiveNumber);
  be->add_option("--seed", bench.seed, "Random seed");
  be->add_option("--policies", policies, "Comma separated policy names")->required();
  be->add_option("--out", out, "Output file");
  be->add_option("--summary-out", summary_out, "Per (n, policy) aggregate file");
  be->add_flag("--timing", timing, "Fill the millis column (output is then not reproducible)");

  auto* an = app.add_subcommand("analyze", "Structural statistics of the optimal policy");
  an->add_option("instance", file, "Instance JSON file")->required();
  an->add_flag("--coverage", cov, "Rule coverage");
  an->add_flag("--index-fit", fit, "Single-index representability");
  an->add_flag("--p-ratio", pr, "Share of partial first openings");
  an->add_flag("--dispersion", disp, "Threshold dispersion");
  add_format(an);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*th) cmd_thresholds(file);
    else if (*so) cmd_solve(file, prune, stats);
    else if (*ev) cmd_eval(file, policy, trials, seed);
    else if (*bo) cmd_bounds(file, state);
    else if (*on) cmd_online(file, mask, order, all_orders);
    else if (*ge) {
      Output o(out);
      o.get() << dump_instance(gen_random(boxes, seed)) << '\n';
    } else if (*ha) cmd_hard(items, target, verify, ratio_guard, out);
    else if (*bi) cmd_b2i(b2i, b2i_solve_flag, b2i_table, out);
    else if (*be) {
      bench.timing = timing;
      cmd_bench(bench, sizes, policies, out, summary_out);
    } else if (*an) cmd_analyze(file, cov, fit, pr, disp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
