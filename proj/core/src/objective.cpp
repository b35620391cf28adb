#include "lacg/objective.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace lacg {

namespace {

void check_constants(double L, double mu) {
  if (!(mu > 0.0) || !(L > 0.0) || !std::isfinite(L) || !std::isfinite(mu)) {
    throw std::invalid_argument("QuadraticObjective: L and mu must be finite and positive");
  }
  if (mu > L) {
    throw std::invalid_argument("QuadraticObjective: mu must not exceed L");
  }
}

Vector power_start(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i) + 1.0);
  }
  return v.normalized();
}

template <class ApplyFn>
double power_iteration(Eigen::Index n, ApplyFn&& apply, int max_iters, double rel_tol) {
  Vector v = power_start(n);
  double rayleigh = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vector w = apply(v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - rayleigh) <= rel_tol * std::abs(next)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return rayleigh;
}

}  // namespace

QuadraticObjective::QuadraticObjective(DenseMatrix matrix, Vector linear, double L, double mu)
    : matrix_(std::move(matrix)), linear_(std::move(linear)), L_(L), mu_(mu) {
  const auto& m = std::get<DenseMatrix>(matrix_);
  if (m.rows() != m.cols() || m.rows() != linear_.size()) {
    throw std::invalid_argument("QuadraticObjective: matrix and linear term dimensions differ");
  }
  check_constants(L, mu);
}

QuadraticObjective::QuadraticObjective(SparseMatrix matrix, Vector linear, double L, double mu)
    : matrix_(std::move(matrix)), linear_(std::move(linear)), L_(L), mu_(mu) {
  auto& m = std::get<SparseMatrix>(matrix_);
  if (m.rows() != m.cols() || m.rows() != linear_.size()) {
    throw std::invalid_argument("QuadraticObjective: matrix and linear term dimensions differ");
  }
  m.makeCompressed();
  check_constants(L, mu);
}

DenseMatrix QuadraticObjective::to_dense() const {
  if (is_sparse()) return DenseMatrix(sparse());
  return dense();
}

void QuadraticObjective::check_dim(const Vector& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("QuadraticObjective: dimension mismatch (got " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim()) + ")");
  }
}

Vector QuadraticObjective::apply(const Vector& d) const {
  check_dim(d);
  if (is_sparse()) return sparse() * d;
  return dense() * d;
}

double QuadraticObjective::curvature(const Vector& d) const { return d.dot(apply(d)); }

double QuadraticObjective::eval(const Vector& x) const {
  return 0.5 * x.dot(apply(x)) + linear_.dot(x);
}

Vector QuadraticObjective::grad(const Vector& x) const { return apply(x) + linear_; }

double QuadraticObjective::eval_with_grad(const Vector& x, Vector& g) const {
  g = apply(x);
  const double value = 0.5 * x.dot(g) + linear_.dot(x);
  g += linear_;
  return value;
}

double power_iteration_lmax(const QuadraticObjective& obj, int max_iters, double rel_tol) {
  return power_iteration(
      obj.dim(), [&](const Vector& v) { return obj.apply(v); }, max_iters, rel_tol);
}

double power_iteration_lmax(const DenseMatrix& m, int max_iters, double rel_tol) {
  return power_iteration(
      m.rows(), [&](const Vector& v) -> Vector { return m * v; }, max_iters, rel_tol);
}

QuadraticObjective generate_spectrum_quadratic(int n, double mu, double L, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_spectrum_quadratic: n must be >= 2");
  if (!(mu > 0.0) || !(L > 0.0)) {
    throw std::invalid_argument("generate_spectrum_quadratic: mu and L must be positive");
  }
  if (mu > L) throw std::invalid_argument("generate_spectrum_quadratic: mu > L");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  DenseMatrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  const DenseMatrix basis = qr.householderQ() * DenseMatrix::Identity(n, n);

  Vector spectrum(n);
  for (int i = 0; i < n; ++i) spectrum[i] = mu + (L - mu) * unit(rng);
  spectrum[0] = mu;
  spectrum[n - 1] = L;

  DenseMatrix m = basis * spectrum.asDiagonal() * basis.transpose();
  m = 0.5 * (m + m.transpose()).eval();

  Vector b(n);
  for (int i = 0; i < n; ++i) b[i] = unit(rng);
  return QuadraticObjective(std::move(m), std::move(b), L, mu);
}

QuadraticObjective generate_sparse_gram_quadratic(int n, double density, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_sparse_gram_quadratic: n must be >= 1");
  if (!(density > 0.0) || density > 1.0) {
    throw std::invalid_argument("generate_sparse_gram_quadratic: density must be in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(density * n * n) + 16);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < density) entries.emplace_back(i, j, gauss(rng));
    }
  }
  SparseMatrix g(n, n);
  g.setFromTriplets(entries.begin(), entries.end());

  SparseMatrix identity(n, n);
  identity.setIdentity();
  SparseMatrix m = SparseMatrix(g.transpose()) * g;
  m = 0.5 * (m + identity);
  m.prune(0.0);
  m.makeCompressed();

  const double lmax = power_iteration(
      n, [&](const Vector& v) -> Vector { return m * v; }, 200, 1e-10);
  const double L = 1.01 * lmax;
  const double mu = 0.5;

  Vector b = Vector::Zero(n);
  if (n <= kDenseFallbackDim) {
    return QuadraticObjective(DenseMatrix(m), std::move(b), L, mu);
  }
  return QuadraticObjective(std::move(m), std::move(b), L, mu);
}

}  // namespace lacg
