#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace opsim {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseOperator = Eigen::SparseMatrix<Complex>;

/// Throws InputError unless A is non-empty with finite entries.
void require_well_formed(const Operator& A, std::string_view name = "operator");
void require_square(const Operator& A, std::string_view name = "operator");

/// Largest singular value.
double op_norm(const Operator& A);
double op_norm(const SparseOperator& A);
double spectral_radius(const Operator& A);
double numerical_radius(const Operator& A);

Operator hermitian_part(const Operator& A);
/// Largest / smallest eigenvalue of the Hermitian part of H.
double max_eigenvalue(const Operator& H);
double min_eigenvalue(const Operator& H);

/// Unique PSD square root; eigenvalues in [-1e-12, 0) are clamped to 0.
Operator psd_sqrt(const Operator& G);

/// A^0 .. A^n_max, with A^0 = I even for A = 0.
std::vector<Operator> powers(const Operator& A, int n_max);

/// Largest eigenvalue of a Hermitian PSD operator given only through its
/// action. Lanczos with full reorthogonalization; stops when the Ritz
/// residual falls below tol times the Ritz value.
double lanczos_max_eigenvalue(const std::function<Vector(const Vector&)>& apply,
                              Eigen::Index dim, double tol = 1e-13, int max_iter = 400,
                              std::uint64_t seed = 0x5eed);

class MatrixPolynomial {
 public:
  explicit MatrixPolynomial(int size = 1);
  static MatrixPolynomial scalar(std::vector<Complex> coeffs);

  int size() const { return size_; }
  /// Maximal degree over all entries with trailing zeros ignored; -1 for zero.
  int degree() const;
  std::vector<Complex>& entry(int i, int j) { return coeffs_[i * size_ + j]; }
  const std::vector<Complex>& entry(int i, int j) const { return coeffs_[i * size_ + j]; }

  Operator evaluate(Complex z) const;
  void scale(Complex factor);
  /// P (x) I_k: the scalar-to-matrix diagonal embedding.
  MatrixPolynomial diagonal_embedding(int copies) const;

 private:
  int size_;
  std::vector<std::vector<Complex>> coeffs_;
};

/// Block matrix [p_ij(A)], Horner per block.
Operator matpoly_eval(const MatrixPolynomial& P, const Operator& A);

struct CircleSupNorm {
  double grid_value = 0.0;
  double refined_value = 0.0;
  int grid_size = 0;
  double value() const { return refined_value; }
};

/// max over |z| = 1 of the largest singular value of P(z); a lower bound on
/// the true supremum.
CircleSupNorm circle_sup_norm(const MatrixPolynomial& P, int grid_size = 1024);

struct PNormBracket {
  double lo = 0.0;
  double hi = 0.0;
};

double vector_pnorm(const Vector& x, double p);
PNormBracket induced_pnorm_bracket(const Operator& A, double p, int samples,
                                   std::uint64_t seed = 1);

}  // namespace opsim
