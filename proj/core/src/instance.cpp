#include "lacg/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lacg {

using nlohmann::ordered_json;

std::unique_ptr<Polytope> make_polytope(const PolytopeSpec& spec) {
  if (spec.kind == "simplex") return std::make_unique<ProbabilitySimplex>(spec.n);
  if (spec.kind == "l1ball") return std::make_unique<L1Ball>(spec.n, spec.tau);
  if (spec.kind == "birkhoff") return std::make_unique<BirkhoffPolytope>(spec.n);
  if (spec.kind == "dag_flow") {
    if (!spec.graph) throw std::invalid_argument("dag_flow polytope needs a graph");
    return std::make_unique<FlowPolytope>(*spec.graph);
  }
  throw std::invalid_argument("unknown polytope kind '" + spec.kind + "'");
}

namespace {

Instance assemble(std::string id, std::string_view generator, std::uint64_t seed,
                  QuadraticObjective obj, PolytopeSpec spec) {
  Instance inst;
  inst.id = std::move(id);
  inst.generator = std::string(generator);
  inst.seed = seed;
  inst.polytope = make_polytope(spec);
  if (inst.polytope->dim() != obj.dim()) {
    throw std::invalid_argument("instance: objective and polytope dimensions differ");
  }
  inst.objective = std::make_shared<const QuadraticObjective>(std::move(obj));
  inst.polytope_spec = std::move(spec);
  return inst;
}

std::string tag(std::string_view generator, const std::string& shape, std::uint64_t seed) {
  return std::string(generator) + "-" + shape + "-s" + std::to_string(seed);
}

std::string real_tag(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

QuadraticObjective interior_optimum_quadratic(const Vector& c, double mu, double L,
                                              std::uint64_t seed) {
  const auto n = static_cast<int>(c.size());
  QuadraticObjective base = generate_spectrum_quadratic(n, mu, L, seed);
  Vector b = -(base.dense() * c) + Vector::Ones(n);
  return QuadraticObjective(base.dense(), std::move(b), L, mu);
}

Instance generate_instance(std::string_view generator, const GeneratorParams& p) {
  if (generator == "simplex-quadratic") {
    if (!p.interior_optimum) {
      return assemble(tag(generator, "n" + std::to_string(p.n) + "-k" + real_tag(p.L / p.mu), p.seed),
                      generator, p.seed, generate_spectrum_quadratic(p.n, p.mu, p.L, p.seed),
                      PolytopeSpec{"simplex", p.n, 1.0, std::nullopt});
    }
    if (p.n < 2) throw std::invalid_argument("simplex-quadratic: n must be >= 2");
    std::mt19937_64 rng(p.seed ^ 0x5eedULL);
    std::uniform_real_distribution<double> unit(0.5, 1.5);
    Vector c(p.n);
    for (int i = 0; i < p.n; ++i) c[i] = unit(rng);
    c /= c.sum();
    return assemble(tag(generator, "interior-n" + std::to_string(p.n) + "-k" + real_tag(p.L / p.mu), p.seed),
                    generator, p.seed, interior_optimum_quadratic(c, p.mu, p.L, p.seed),
                    PolytopeSpec{"simplex", p.n, 1.0, std::nullopt});
  }
  if (generator == "birkhoff-gram") {
    if (p.n < 2) throw std::invalid_argument("birkhoff-gram: side must be >= 2");
    return assemble(tag(generator, "n" + std::to_string(p.n), p.seed), generator, p.seed,
                    generate_sparse_gram_quadratic(p.n * p.n, p.density, p.seed),
                    PolytopeSpec{"birkhoff", p.n, 1.0, std::nullopt});
  }
  if (generator == "dag-flow") {
    LayeredDAG g = make_layered_dag(p.layers, p.width);
    const auto m = static_cast<int>(g.edges.size());
    return assemble(tag(generator, std::to_string(p.layers) + "x" + std::to_string(p.width), p.seed),
                    generator, p.seed, generate_sparse_gram_quadratic(m, p.density, p.seed),
                    PolytopeSpec{"dag_flow", m, 1.0, std::move(g)});
  }
  if (generator == "l1-lasso") {
    if (!(p.tau > 0.0)) throw std::invalid_argument("l1-lasso: tau must be positive");
    QuadraticObjective base = generate_spectrum_quadratic(p.n, p.mu, p.L, p.seed);
    // Target with ~10% support and l1 norm 2 tau, so the minimizer sits on
    // the boundary of the ball.
    std::mt19937_64 rng(p.seed ^ 0x1a550ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector target = Vector::Zero(p.n);
    for (int i = 0; i < p.n; ++i) {
      if (unit(rng) < 0.1) target[i] = gauss(rng);
    }
    if (target.lpNorm<1>() == 0.0) target[0] = 1.0;
    target *= 2.0 * p.tau / target.lpNorm<1>();
    Vector b = -(base.dense() * target);
    return assemble(tag(generator, "n" + std::to_string(p.n) + "-tau" + real_tag(p.tau), p.seed),
                    generator, p.seed,
                    QuadraticObjective(base.dense(), std::move(b), p.L, p.mu),
                    PolytopeSpec{"l1ball", p.n, p.tau, std::nullopt});
  }
  if (generator == "lb-instance") {
    if (p.n < 1) throw std::invalid_argument("lb-instance: n must be >= 1");
    return assemble(tag(generator, "n" + std::to_string(p.n), 0), generator, 0,
                    QuadraticObjective(DenseMatrix(2.0 * DenseMatrix::Identity(p.n, p.n)),
                                       Vector::Zero(p.n), 2.0, 2.0),
                    PolytopeSpec{"simplex", p.n, 1.0, std::nullopt});
  }
  throw std::invalid_argument("unknown generator '" + std::string(generator) + "'");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

ordered_json vector_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from(const ordered_json& a) {
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

ordered_json matrix_json(const QuadraticObjective& obj) {
  ordered_json m;
  const Eigen::Index n = obj.dim();
  m["rows"] = n;
  m["cols"] = n;
  if (obj.is_sparse()) {
    SparseMatrix s = obj.sparse();
    s.makeCompressed();
    m["format"] = "csr";
    ordered_json indptr = ordered_json::array(), indices = ordered_json::array(),
                 values = ordered_json::array();
    for (Eigen::Index i = 0; i <= n; ++i) indptr.push_back(s.outerIndexPtr()[i]);
    for (Eigen::Index k = 0; k < s.nonZeros(); ++k) {
      indices.push_back(s.innerIndexPtr()[k]);
      values.push_back(s.valuePtr()[k]);
    }
    m["indptr"] = std::move(indptr);
    m["indices"] = std::move(indices);
    m["values"] = std::move(values);
  } else {
    m["format"] = "dense";
    ordered_json data = ordered_json::array();
    const DenseMatrix& d = obj.dense();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) data.push_back(d(i, j));
    m["data"] = std::move(data);
  }
  return m;
}

ordered_json graph_json(const LayeredDAG& g) {
  ordered_json j;
  j["num_nodes"] = g.num_nodes;
  ordered_json edges = ordered_json::array();
  for (const auto& [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  j["source"] = g.source;
  j["sink"] = g.sink;
  return j;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  const QuadraticObjective& obj = *inst.objective;
  ordered_json j;
  j["id"] = inst.id;
  j["generator"] = inst.generator;
  j["seed"] = inst.seed;
  j["n"] = obj.dim();
  j["matrix"] = matrix_json(obj);
  j["b"] = vector_json(obj.linear());
  j["L"] = obj.L();
  j["mu"] = obj.mu();
  ordered_json p;
  p["kind"] = inst.polytope_spec.kind;
  p["n"] = inst.polytope_spec.n;
  if (inst.polytope_spec.kind == "l1ball") p["tau"] = inst.polytope_spec.tau;
  if (inst.polytope_spec.graph) p["graph"] = graph_json(*inst.polytope_spec.graph);
  j["polytope"] = std::move(p);
  return j.dump() + "\n";
}

Instance instance_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance: malformed JSON: ") + e.what());
  }
  try {
    const auto n = j.at("n").get<Eigen::Index>();
    const auto& m = j.at("matrix");
    const std::string format = m.at("format").get<std::string>();
    Vector b = vector_from(j.at("b"));
    const double L = j.at("L").get<double>();
    const double mu = j.at("mu").get<double>();
    std::optional<QuadraticObjective> obj;
    if (format == "dense") {
      const auto& data = m.at("data");
      if (data.size() != static_cast<std::size_t>(n * n)) {
        throw std::invalid_argument("instance: dense matrix has wrong size");
      }
      DenseMatrix d(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k) d(i, k) = data[static_cast<std::size_t>(i * n + k)].get<double>();
      obj.emplace(std::move(d), std::move(b), L, mu);
    } else if (format == "csr") {
      const auto& indptr = m.at("indptr");
      const auto& indices = m.at("indices");
      const auto& values = m.at("values");
      if (indptr.size() != static_cast<std::size_t>(n + 1) || indices.size() != values.size()) {
        throw std::invalid_argument("instance: malformed csr matrix");
      }
      std::vector<Eigen::Triplet<double>> entries;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto lo = indptr[static_cast<std::size_t>(i)].get<std::size_t>();
        const auto hi = indptr[static_cast<std::size_t>(i + 1)].get<std::size_t>();
        if (lo > hi || hi > indices.size()) throw std::invalid_argument("instance: malformed csr indptr");
        for (std::size_t k = lo; k < hi; ++k) {
          const auto col = indices[k].get<Eigen::Index>();
          if (col < 0 || col >= n) throw std::invalid_argument("instance: csr column out of range");
          entries.emplace_back(i, col, values[k].get<double>());
        }
      }
      SparseMatrix s(n, n);
      s.setFromTriplets(entries.begin(), entries.end());
      s.makeCompressed();
      obj.emplace(std::move(s), std::move(b), L, mu);
    } else {
      throw std::invalid_argument("instance: unknown matrix format '" + format + "'");
    }

    const auto& pj = j.at("polytope");
    PolytopeSpec spec;
    spec.kind = pj.at("kind").get<std::string>();
    spec.n = pj.at("n").get<int>();
    if (pj.contains("tau")) spec.tau = pj.at("tau").get<double>();
    if (pj.contains("graph")) spec.graph = layered_dag_from_json(pj.at("graph").dump());
    return assemble(j.value("id", std::string("instance")), j.value("generator", std::string()),
                    j.value("seed", std::uint64_t{0}), std::move(*obj), std::move(spec));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << instance_to_json(instance);
}

std::vector<Instance> bundled_instances() {
  std::vector<Instance> out;
  GeneratorParams p;

  p.n = 100;
  p.mu = 1.0;
  p.L = 100.0;
  p.seed = 1;
  out.push_back(generate_instance("simplex-quadratic", p));

  p = GeneratorParams{};
  p.n = 8;
  p.density = 0.05;
  p.seed = 2;
  out.push_back(generate_instance("birkhoff-gram", p));

  p = GeneratorParams{};
  p.layers = 4;
  p.width = 4;
  p.density = 0.05;
  p.seed = 3;
  out.push_back(generate_instance("dag-flow", p));

  p = GeneratorParams{};
  p.n = 60;
  p.mu = 1.0;
  p.L = 50.0;
  p.tau = 1.0;
  p.seed = 4;
  out.push_back(generate_instance("l1-lasso", p));

  p = GeneratorParams{};
  p.n = 100;
  out.push_back(generate_instance("lb-instance", p));
  return out;
}

}  // namespace lacg
