#pragma once

#include <vector>

#include "opsim/linalg.hpp"
#include "opsim/sequences.hpp"

namespace opsim {

/// Weighted shift on span(e_0 .. e_{N-1}) (x) C^multiplicity. Basis vector
/// e_{n,j} has index n * multiplicity + j; e_{N-1,j} maps to 0.
struct TruncatedShift {
  long N = 0;
  long multiplicity = 1;
  std::vector<double> weights;  // w_0 .. w_{N-2}
  Operator matrix;
};

TruncatedShift truncated_weighted_shift(const BetaWeight& beta, long N, long multiplicity = 1);
/// Same shift in sparse form, for fibers too large to hold densely.
SparseOperator sparse_shift(const std::vector<double>& weights, long N, long multiplicity);

/// Norm of I - 2D*D + D*^2 D^2 restricted to span(e_0 .. e_{N-3}).
double two_isometry_defect(const TruncatedShift& D);

struct SarasonResult {
  double max_defect = 0.0;
  Operator T;      // P_H R |_H in the orthonormal basis `embed`
  Operator embed;  // orthonormal basis of H = H1 (-) H2 as columns
};

/// Compresses R to H = H1 (-) H2 and compares T^n with P_H R^n |_H for n <= n_max.
/// Throws "not invariant" when H1 or H2 fails R-invariance beyond 1e-10.
SarasonResult sarason_check(const Operator& R, const Operator& H1_basis, const Operator& H2_basis,
                            int n_max);

struct Dilation {
  Operator U;      // unitary on 2N+1 copies of H
  Operator embed;  // isometry H -> first copy
};

/// Finite unitary dilation of a contraction with T^n = embed* U^n embed for
/// 1 <= n <= 2N.
Dilation schaeffer_dilation(const Operator& T, int N);

}  // namespace opsim
