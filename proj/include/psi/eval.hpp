#pragma once

// Exact and Monte Carlo evaluation of Markov policies, and the benchmark
// harness comparing policies on generated instances.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "psi/policies.hpp"
#include "psi/problem.hpp"

namespace psi {

/// Expected profit of running the policy from `root` (default: all boxes
/// closed, y = 0). Throws std::logic_error when the policy returns an
/// infeasible action.
double evaluate_exact(const Problem& pb, const PolicyFn& policy);
double evaluate_exact(const Problem& pb, const PolicyFn& policy, const SearchState& root);

struct SimResult {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t trials = 0;
  std::string rng;
};

/// Draws every box's (type, prize) up front per trial from a counter-based
/// stream keyed by (seed, trial, box), then runs the policy.
SimResult simulate(const Problem& pb, const PolicyFn& policy, std::uint64_t trials, std::uint64_t seed);

/// Builds a policy from its CLI name: opt, index, stp, whittle,
/// committing:<hex P-mask>, half:<hex P-mask>, best-committing.
/// Throws std::invalid_argument for unknown names.
PolicyFn make_policy(const Problem& pb, std::string_view name);

/// Parses a hexadecimal box mask (optional 0x prefix).
BoxSet parse_mask(std::string_view hex, int n);

struct BenchConfig {
  std::vector<int> sizes;
  int count = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> policies;
  int threads = 1;
  bool timing = false;
};

struct BenchRow {
  int n = 0;
  std::uint64_t instance_seed = 0;
  std::string policy;
  double value = 0.0;
  double ratio = 0.0;
  double millis = -1.0;  // negative when timing is off
  std::string error;
};

struct BenchSummary {
  int n = 0;
  std::string policy;
  int count = 0;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;
  double worst_ratio = 0.0;
};

/// Seed of the k-th instance of size n in a run seeded with `seed`.
std::uint64_t bench_instance_seed(std::uint64_t seed, int n, int k);

/// Rows ordered by size, instance, then policy list order. Ratios are
/// against the optimum for n <= 9 and against the best listed policy
/// otherwise. Failures are recorded in the row and the run continues.
std::vector<BenchRow> benchmark(const BenchConfig& cfg);
std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows);

inline constexpr int kMaxOptimalBoxes = 9;

}  // namespace psi
