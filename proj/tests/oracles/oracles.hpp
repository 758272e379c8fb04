#pragma once

// Brute-force reference computations used by the tests. Everything here is
// written against Eigen alone and shares no code with the library.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct OracleResult {
  double value = 0.0;
  std::string method;
  std::string cost;
};

/// min X* Q X subject to A X = x, from the dense KKT system [[Q, A*], [A, 0]].
/// Throws std::runtime_error when the KKT matrix is singular.
OracleResult kkt_min(const Mat& Q, const Mat& A, const Vec& x);

/// x* (A Q^{-1} A*)^{-1} x, the Schur complement form of the same minimum.
double schur_value(const Mat& Q, const Mat& A, const Vec& x);

struct Qp {
  Mat Q;
  Mat A;
};

/// Explicit assembly of the renorming quadratic program over decompositions
/// x = sum_{k<=d} T^k x_k with cost gamma^2 |sum_k C^k V2 x_k|^2 + sum_k beta_k^2 |x_k|^2.
/// An empty C drops the first term; an empty V2 means the identity.
Qp renorm_qp(const Mat& T, const std::optional<Mat>& C, const Mat& V2, const std::vector<double>& beta,
             double gamma, int d);

/// |sum_{n<=N} beta_n^{-2} (T1^n - T2^n)(T1^n - T2^n)*| with every entry of the
/// sum assembled by explicit loops and the norm taken from a full eigensolve.
OracleResult direct_partial_sum_norm(const Mat& T1, const Mat& T2, const std::vector<double>& beta, int N);

/// Largest singular value from a full SVD.
double spectral_norm(const Mat& A);

/// Lower bound on sup |A x|_p / |x|_p from seeded random and basis starts,
/// each polished by coordinate pattern search.
OracleResult unit_sphere_max(const Mat& A, double p, int samples, std::uint64_t seed = 99);

/// Lower bound on the numerical radius sup_{|x|=1} |x* A x|, same search.
OracleResult numerical_range_max(const Mat& A, int samples, std::uint64_t seed = 99);

}  // namespace oracles
