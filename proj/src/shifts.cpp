#include "opsim/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "opsim/error.hpp"

namespace opsim {

namespace {

Operator orthonormal_basis(const Operator& cols) {
  if (cols.cols() == 0) return Operator(cols.rows(), 0);
  Eigen::JacobiSVD<Operator> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  const double cutoff = 1e-10 * std::max(1.0, sv(0));
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

// (I - X*X)^{1/2}. Eigenvalues at roundoff level are set to zero: their
// square roots would otherwise put 1e-8 noise into U.
Operator defect_root(const Operator& X) {
  const Eigen::Index n = X.cols();
  const Operator M = Operator::Identity(n, n) - X.adjoint() * X;
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(M));
  const Eigen::VectorXd ev =
      es.eigenvalues().unaryExpr([](double v) { return v < 1e-13 ? 0.0 : std::sqrt(v); });
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TruncatedShift truncated_weighted_shift(const BetaWeight& beta, long N, long multiplicity) {
  if (N < 2) throw InputError("", "truncated shift needs N >= 2");
  if (multiplicity < 1) throw InputError("", "multiplicity must be positive");
  TruncatedShift s;
  s.N = N;
  s.multiplicity = multiplicity;
  s.weights = shift_weights(beta, N - 1);
  s.matrix = Operator::Zero(N * multiplicity, N * multiplicity);
  for (long n = 0; n + 1 < N; ++n)
    for (long j = 0; j < multiplicity; ++j)
      s.matrix((n + 1) * multiplicity + j, n * multiplicity + j) = s.weights[n];
  return s;
}

SparseOperator sparse_shift(const std::vector<double>& weights, long N, long multiplicity) {
  SparseOperator S(N * multiplicity, N * multiplicity);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve((N - 1) * multiplicity);
  for (long n = 0; n + 1 < N; ++n)
    for (long j = 0; j < multiplicity; ++j)
      trips.emplace_back((n + 1) * multiplicity + j, n * multiplicity + j, weights.at(n));
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

double two_isometry_defect(const TruncatedShift& D) {
  if (D.N < 4) throw InputError("", "two_isometry_defect needs N >= 4");
  const Operator& S = D.matrix;
  const Operator S2 = S * S;
  const Eigen::Index n = S.rows();
  const Operator M = Operator::Identity(n, n) - 2.0 * S.adjoint() * S + S2.adjoint() * S2;
  const Eigen::Index k = (D.N - 2) * D.multiplicity;
  return op_norm(Operator(M.topLeftCorner(k, k)));
}

SarasonResult sarason_check(const Operator& R, const Operator& H1_basis, const Operator& H2_basis,
                            int n_max) {
  require_square(R, "R");
  const Eigen::Index n = R.rows();
  if (H1_basis.rows() != n || H2_basis.rows() != n)
    throw InputError("", "subspace bases must have as many rows as R");
  const Operator Q1 = orthonormal_basis(H1_basis);
  const Operator Q2 = orthonormal_basis(H2_basis);
  const double tol = 1e-10 * std::max(1.0, op_norm(R));

  auto invariance_defect = [&](const Operator& Q) {
    if (Q.cols() == 0) return 0.0;
    const Operator RQ = R * Q;
    return op_norm(Operator(RQ - Q * (Q.adjoint() * RQ)));
  };
  const double d1 = invariance_defect(Q1);
  if (d1 > tol) throw Error("not invariant: H1 defect " + std::to_string(d1));
  const double d2 = invariance_defect(Q2);
  if (d2 > tol) throw Error("not invariant: H2 defect " + std::to_string(d2));
  if (Q2.cols() > 0) {
    const double contain = op_norm(Operator(Q2 - Q1 * (Q1.adjoint() * Q2)));
    if (contain > 1e-10) throw Error("H2 is not contained in H1 (defect " + std::to_string(contain) + ")");
  }

  Operator M = Q1;
  if (Q2.cols() > 0) M -= Q2 * (Q2.adjoint() * Q1);
  SarasonResult out;
  out.embed = orthonormal_basis(M);
  const Operator& E = out.embed;
  out.T = E.adjoint() * R * E;

  Operator Tn = Operator::Identity(E.cols(), E.cols());
  Operator Rn = Operator::Identity(n, n);
  for (int k = 1; k <= n_max; ++k) {
    Tn = Tn * out.T;
    Rn = Rn * R;
    if (E.cols() == 0) break;
    out.max_defect = std::max(out.max_defect, op_norm(Operator(Tn - E.adjoint() * Rn * E)));
  }
  return out;
}

Dilation schaeffer_dilation(const Operator& T, int N) {
  require_square(T, "T");
  if (N < 1) throw InputError("", "schaeffer_dilation needs N >= 1");
  const double nt = op_norm(T);
  if (nt > 1.0 + 1e-12) throw Error("not a contraction (norm " + std::to_string(nt) + ")");
  const Eigen::Index h = T.rows();
  const Eigen::Index blocks = 2 * static_cast<Eigen::Index>(N) + 1;
  Dilation out;
  out.U = Operator::Zero(blocks * h, blocks * h);
  const Eigen::Index last = (blocks - 1) * h;
  out.U.block(0, 0, h, h) = T;
  out.U.block(0, last, h, h) = defect_root(T.adjoint());
  out.U.block(h, 0, h, h) = defect_root(T);
  out.U.block(h, last, h, h) = -T.adjoint();
  for (Eigen::Index j = 2; j < blocks; ++j) out.U.block(j * h, (j - 1) * h, h, h).setIdentity();
  out.embed = Operator::Zero(blocks * h, h);
  out.embed.topRows(h).setIdentity();
  return out;
}

}  // namespace opsim
