#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lacg {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Matrices at or below this dimension are kept dense even when they come
// from a sparse generator.
inline constexpr Eigen::Index kDenseFallbackDim = 64;

/// f(x) = 1/2 x'Mx + b'x with M symmetric positive definite and certified
/// bounds mu <= lambda_min(M), lambda_max(M) <= L.
///
/// Immutable after construction; safe to share between threads.
class QuadraticObjective {
 public:
  QuadraticObjective(DenseMatrix matrix, Vector linear, double L, double mu);
  QuadraticObjective(SparseMatrix matrix, Vector linear, double L, double mu);

  Eigen::Index dim() const { return linear_.size(); }
  double L() const { return L_; }
  double mu() const { return mu_; }
  const Vector& linear() const { return linear_; }

  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(matrix_); }
  const DenseMatrix& dense() const { return std::get<DenseMatrix>(matrix_); }
  const SparseMatrix& sparse() const { return std::get<SparseMatrix>(matrix_); }
  DenseMatrix to_dense() const;

  double eval(const Vector& x) const;
  Vector grad(const Vector& x) const;
  /// Returns M*d.
  Vector apply(const Vector& d) const;
  /// Returns d'Md.
  double curvature(const Vector& d) const;

  /// f and grad f from a single matrix product.
  double eval_with_grad(const Vector& x, Vector& g) const;

 private:
  void check_dim(const Vector& x) const;

  std::variant<DenseMatrix, SparseMatrix> matrix_;
  Vector linear_;
  double L_;
  double mu_;
};

/// Largest eigenvalue estimate of a symmetric PSD operator by power
/// iteration from a fixed deterministic start. Stops after max_iters or when
/// the Rayleigh quotient changes by less than rel_tol (relative).
double power_iteration_lmax(const QuadraticObjective& obj, int max_iters = 200,
                            double rel_tol = 1e-10);
double power_iteration_lmax(const DenseMatrix& m, int max_iters = 200,
                            double rel_tol = 1e-10);

/// M = sum_i lambda_i u_i u_i' over a random orthonormal basis, lambda_i
/// uniform in [mu, L] with the extremes pinned to mu and L; b uniform in
/// [0, 1]. Deterministic in (n, mu, L, seed).
QuadraticObjective generate_spectrum_quadratic(int n, double mu, double L,
                                               std::uint64_t seed);

/// Matrix (G'G + I)/2 where G has about density*n^2 standard normal
/// entries, b = 0. mu = 1/2 exactly; L from power iteration inflated by 1%.
QuadraticObjective generate_sparse_gram_quadratic(int n, double density,
                                                  std::uint64_t seed);

}  // namespace lacg
