#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lacg/layered_dag.hpp"
#include "lacg/objective.hpp"
#include "lacg/polytope.hpp"

namespace lacg {

/// Serializable description of a feasible region.
struct PolytopeSpec {
  std::string kind;  // "simplex", "l1ball", "birkhoff" or "dag_flow"
  int n = 0;         // ambient dimension (simplex, l1ball) or side (birkhoff)
  double tau = 1.0;  // l1ball radius
  std::optional<LayeredDAG> graph;
};

std::unique_ptr<Polytope> make_polytope(const PolytopeSpec& spec);

/// An objective, its feasible region, and where they came from.
struct Instance {
  std::string id;
  std::string generator;
  std::uint64_t seed = 0;
  std::shared_ptr<const QuadraticObjective> objective;
  PolytopeSpec polytope_spec;
  std::shared_ptr<const Polytope> polytope;
};

inline constexpr std::string_view kGenerators[] = {"simplex-quadratic", "birkhoff-gram", "dag-flow",
                                                   "l1-lasso", "lb-instance"};

struct GeneratorParams {
  int n = 100;        // dimension; side length for birkhoff-gram
  double mu = 1.0;
  double L = 1000.0;
  double density = 0.01;
  double tau = 1.0;
  int layers = 10;
  int width = 10;
  bool interior_optimum = false;  // simplex-quadratic: put x* in the relative interior
  std::uint64_t seed = 0;
};

/// Builds one of kGenerators; throws std::invalid_argument for an unknown
/// name or bad parameters.
///   simplex-quadratic  spectrum quadratic (n, mu, L) over the n-simplex
///   birkhoff-gram      sparse Gram quadratic over n x n doubly stochastic
///   dag-flow           sparse Gram quadratic over unit flows of a layered DAG
///   l1-lasso           spectrum quadratic shifted away from the origin, l1 ball
///   lb-instance        |x|^2 over the n-simplex
Instance generate_instance(std::string_view generator, const GeneratorParams& params);

/// Spectrum quadratic whose simplex-constrained minimizer is a given point
/// c in the relative interior: b = -M c + t 1, so grad f(c) is parallel to 1.
QuadraticObjective interior_optimum_quadratic(const Vector& c, double mu, double L,
                                              std::uint64_t seed);

/// {"id", "generator", "seed", "n", "matrix": {"format": "dense"|"csr", ...},
///  "b", "L", "mu", "polytope": {...}}
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(std::string_view text);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

/// Small fixed-seed instances covering every generator and polytope.
std::vector<Instance> bundled_instances();

}  // namespace lacg
