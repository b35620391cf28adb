#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lacg/cg.hpp"
#include "lacg/instance.hpp"
#include "lacg/trace.hpp"

namespace lacg {

/// Bad algorithm name, or an algorithm the instance cannot support.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Algorithm { fw, afw, pfw, lacg_afw, lacg_pfw, muagd_fixed, warmup_lacg };

inline constexpr std::string_view kAlgorithmNames[] = {
    "fw", "afw", "pfw", "lacg-afw", "lacg-pfw", "muagd-fixed", "warmup-lacg"};

std::string_view to_string(Algorithm alg);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Vertex cap for algorithms that project onto the whole polytope.
inline constexpr std::size_t kEnumerationLimit = 5040;

struct SolveOptions {
  double eps = 1e-8;
  int max_iters = 20000;
  StepRule step_rule = StepRule::exact;
  bool enhancement = false;
  bool early_restart = false;
  bool culling = false;
  std::uint64_t seed = 0;
  std::optional<double> f_star;  // fills the primal_gap column when set
};

/// Called with (iteration, output iterate) for every trace row.
using IterateObserver = std::function<void(std::int64_t, const Vector&)>;

/// Runs one algorithm from the polytope's initial vertex. Throws UsageError
/// for incompatible algorithm/polytope pairs (muagd-fixed needs at most
/// kEnumerationLimit vertices, warmup-lacg needs membership and the affine
/// hull).
RunTrace run_algorithm(const Instance& instance, Algorithm alg, const SolveOptions& options,
                       const IterateObserver& observer = {});

struct Reference {
  double f_star = 0.0;
  Vector x_star;
  double wolfe_gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// High-accuracy solution by AFW with exact line search.
Reference compute_reference(const Instance& instance, double gap = 1e-13, int max_iters = 2000000);

std::string reference_to_json(const Reference& ref, const Instance& instance);
Reference reference_from_json(std::string_view text);

/// Threads to use for `requested` jobs: capped by LACG_THREADS when set to a
/// positive integer, and by the hardware concurrency.
int thread_budget(int requested);

/// Runs every algorithm on the same instance with the same options, in
/// parallel up to thread_budget; traces come back in input order.
std::vector<RunTrace> compare(const Instance& instance, std::span<const Algorithm> algorithms,
                              const SolveOptions& options);

}  // namespace lacg
