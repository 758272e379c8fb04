#pragma once

#include <vector>

#include "opsim/linalg.hpp"
#include "opsim/sequences.hpp"

namespace opsim {

/// Jordan-Wigner generators C_n = Z^{(x)n} (x) A (x) I on (C^2)^{(x)m}, with
/// A = [[0,1],[0,0]], Z = diag(1,-1) and mode 0 the most significant factor.
struct CarSystem {
  int m = 0;
  std::vector<SparseOperator> generators;
  Eigen::Index dim() const { return Eigen::Index{1} << m; }
};

CarSystem car_generators(int m);

/// sum_n u_n C_n.
SparseOperator lambda_of(const CarSystem& sys, const Vector& u);

struct CarDefects {
  double anticommute = 0.0;  // max_{i,j} |C_i C_j + C_j C_i|
  double canonical = 0.0;    // max_{i,j} |C_i C_j* + C_j* C_i - delta_ij I|
};

/// Defects measured with the upper bound sqrt(|M|_1 |M|_inf) >= |M|_2.
CarDefects car_defects(const CarSystem& sys);

/// sqrt(max column sum * max row sum): cheap upper bound on the spectral norm.
double sparse_norm_upper(const SparseOperator& M);

/// N x N block matrix with block (i,j) = alpha_{i+j+n} C_{i+j+n}. Requires
/// m >= 2N - 1 + n, otherwise "insufficient modes".
SparseOperator shifted_hankel(const AlphaSeq& alpha, int n, int N, const CarSystem& sys);
SparseOperator hankel(const AlphaSeq& alpha, int N, const CarSystem& sys);
SparseOperator hankel(const AlphaSeq& alpha, int N, int m);

/// R = [[S*, Y], [0, S]] and R0 = [[S*, 0], [0, S]] with S the N-truncated
/// unweighted shift of multiplicity 2^m.
struct FoguelHankel {
  AlphaSeq alpha = AlphaSeq::explicit_values({});
  int N = 0;
  int m = 0;
  SparseOperator S;
  SparseOperator Y;
  SparseOperator R;
  SparseOperator R0;
};

FoguelHankel foguel_hankel(const AlphaSeq& alpha, int N, int m);

/// |R^n - R0^n| through the off-diagonal block sum_{k<n} S*^k Y S^{n-1-k}.
double power_diff_norm(const FoguelHankel& fh, int n);
/// Same quantity by forming R^n and R0^n and subtracting.
double power_diff_norm_direct(const FoguelHankel& fh, int n);

/// (n+1) sqrt(tail(n)): the bound quoted for |R^n - R0^n|.
double power_diff_bound_literal(const AlphaSeq& alpha, int n);
/// n sqrt(tail(n-1)): the bound the block identity actually yields.
double power_diff_bound_shifted(const AlphaSeq& alpha, int n);

}  // namespace opsim
