#include "opsim/car.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "opsim/error.hpp"
#include "opsim/shifts.hpp"

namespace opsim {

namespace {

using Triplets = std::vector<Eigen::Triplet<Complex>>;

void append_block(Triplets& out, const SparseOperator& M, Eigen::Index row0, Eigen::Index col0,
                  Complex scale = 1.0) {
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(M, k); it; ++it)
      out.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

SparseOperator from_triplets(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseOperator M(rows, cols);
  M.setFromTriplets(t.begin(), t.end());
  return M;
}

SparseOperator sparse_identity(Eigen::Index n) {
  SparseOperator I(n, n);
  I.setIdentity();
  return I;
}

}  // namespace

CarSystem car_generators(int m) {
  if (m < 1 || m > 12) throw InputError("", "car_generators: m must be in [1, 12]");
  CarSystem sys;
  sys.m = m;
  const std::uint64_t dim = std::uint64_t{1} << m;
  for (int n = 0; n < m; ++n) {
    const std::uint64_t bit = std::uint64_t{1} << (m - 1 - n);
    // Bits of modes 0..n-1 are the ones above `bit`.
    const std::uint64_t above = ~((bit << 1) - 1) & (dim - 1);
    Triplets t;
    t.reserve(dim / 2);
    for (std::uint64_t col = 0; col < dim; ++col) {
      if ((col & bit) == 0) continue;
      const double sign = (std::popcount(col & above) % 2 == 0) ? 1.0 : -1.0;
      t.emplace_back(static_cast<Eigen::Index>(col & ~bit), static_cast<Eigen::Index>(col), sign);
    }
    sys.generators.push_back(from_triplets(dim, dim, t));
  }
  return sys;
}

SparseOperator lambda_of(const CarSystem& sys, const Vector& u) {
  if (u.size() > sys.m) throw InputError("", "lambda_of: vector longer than the number of modes");
  SparseOperator out(sys.dim(), sys.dim());
  for (Eigen::Index n = 0; n < u.size(); ++n)
    if (u(n) != Complex(0.0)) out += u(n) * sys.generators[n];
  return out;
}

double sparse_norm_upper(const SparseOperator& M) {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(M.cols());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(M.rows());
  for (int k = 0; k < M.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(M, k); it; ++it) {
      col(it.col()) += std::abs(it.value());
      row(it.row()) += std::abs(it.value());
    }
  const double c = col.size() ? col.maxCoeff() : 0.0;
  const double r = row.size() ? row.maxCoeff() : 0.0;
  return std::sqrt(c * r);
}

CarDefects car_defects(const CarSystem& sys) {
  CarDefects d;
  const SparseOperator I = sparse_identity(sys.dim());
  for (int i = 0; i < sys.m; ++i) {
    const SparseOperator& Ci = sys.generators[i];
    for (int j = 0; j < sys.m; ++j) {
      const SparseOperator& Cj = sys.generators[j];
      const SparseOperator Cjh = Cj.adjoint();
      SparseOperator anti = Ci * Cj + Cj * Ci;
      SparseOperator canon = Ci * Cjh + Cjh * Ci;
      if (i == j) canon -= I;
      d.anticommute = std::max(d.anticommute, sparse_norm_upper(anti));
      d.canonical = std::max(d.canonical, sparse_norm_upper(canon));
    }
  }
  return d;
}

SparseOperator shifted_hankel(const AlphaSeq& alpha, int n, int N, const CarSystem& sys) {
  if (N < 1 || n < 0) throw InputError("", "hankel: need N >= 1 and n >= 0");
  if (sys.m < 2 * N - 1 + n) throw InputError("", "insufficient modes");
  const Eigen::Index b = sys.dim();
  Triplets t;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const int idx = i + j + n;
      const double a = alpha[idx];
      if (a != 0.0) append_block(t, sys.generators[idx], i * b, j * b, a);
    }
  return from_triplets(N * b, N * b, t);
}

SparseOperator hankel(const AlphaSeq& alpha, int N, const CarSystem& sys) {
  return shifted_hankel(alpha, 0, N, sys);
}

SparseOperator hankel(const AlphaSeq& alpha, int N, int m) { return hankel(alpha, N, car_generators(m)); }

FoguelHankel foguel_hankel(const AlphaSeq& alpha, int N, int m) {
  if (N < 1) throw InputError("", "foguel_hankel: N must be >= 1");
  if (m < 2 * N - 1) throw InputError("", "insufficient modes");
  const CarSystem sys = car_generators(m);
  FoguelHankel fh;
  fh.alpha = alpha;
  fh.N = N;
  fh.m = m;
  const Eigen::Index fiber = sys.dim();
  fh.S = sparse_shift(std::vector<double>(std::max(N - 1, 0), 1.0), N, fiber);
  fh.Y = hankel(alpha, N, sys);
  const Eigen::Index h = N * fiber;
  const SparseOperator Sh = fh.S.adjoint();
  Triplets diag;
  append_block(diag, Sh, 0, 0);
  append_block(diag, fh.S, h, h);
  Triplets full = diag;
  append_block(full, fh.Y, 0, h);
  fh.R0 = from_triplets(2 * h, 2 * h, diag);
  fh.R = from_triplets(2 * h, 2 * h, full);
  return fh;
}

double power_diff_norm(const FoguelHankel& fh, int n) {
  if (n < 1) throw InputError("", "power_diff_norm: n must be >= 1");
  const SparseOperator Sh = fh.S.adjoint();
  const Eigen::Index h = fh.S.rows();
  // S^{n-1-k} for k = 0..n-1, built from the identity upward.
  std::vector<SparseOperator> right(n);
  right[0] = sparse_identity(h);
  for (int k = 1; k < n; ++k) right[k] = right[k - 1] * fh.S;
  SparseOperator left = sparse_identity(h);
  SparseOperator sum(h, h);
  for (int k = 0; k < n; ++k) {
    sum += SparseOperator(left * fh.Y * right[n - 1 - k]);
    left = left * Sh;
  }
  sum.prune(Complex(0.0));
  if (sum.nonZeros() == 0) return 0.0;
  return op_norm(sum);
}

double power_diff_norm_direct(const FoguelHankel& fh, int n) {
  if (n < 1) throw InputError("", "power_diff_norm: n must be >= 1");
  SparseOperator Rn = fh.R;
  SparseOperator R0n = fh.R0;
  for (int k = 1; k < n; ++k) {
    Rn = Rn * fh.R;
    R0n = R0n * fh.R0;
  }
  SparseOperator diff = Rn - R0n;
  diff.prune(Complex(0.0));
  if (diff.nonZeros() == 0) return 0.0;
  return op_norm(diff);
}

double power_diff_bound_literal(const AlphaSeq& alpha, int n) {
  return (n + 1) * std::sqrt(alpha.tail(n));
}

double power_diff_bound_shifted(const AlphaSeq& alpha, int n) {
  if (n < 1) return 0.0;
  return n * std::sqrt(alpha.tail(n - 1));
}

}  // namespace opsim
