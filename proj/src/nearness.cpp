#include "opsim/nearness.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "opsim/error.hpp"
#include "opsim/rng.hpp"

namespace opsim {

namespace {

// |X^n| <= c * q^floor(n/K) for every n >= 0, by submultiplicativity.
struct Envelope {
  long K = 1;
  double c = 0.0;
  double q = 0.0;
  double at(long n) const { return q == 0.0 ? (n < K ? c : 0.0) : c * std::pow(q, n / K); }
};

std::optional<Envelope> power_envelope(const std::vector<double>& norms) {
  std::optional<Envelope> best;
  double best_rate = 1.0;
  double running_max = 0.0;
  for (long K = 1; K < static_cast<long>(norms.size()); ++K) {
    running_max = std::max(running_max, norms[K - 1]);
    const double q = norms[K];
    if (q >= 1.0) continue;
    const double rate = std::pow(q, 1.0 / K);
    if (!best || rate < best_rate) {
      best = Envelope{K, running_max, q};
      best_rate = rate;
    }
    if (q == 0.0) break;
  }
  return best;
}

struct EnvelopeTerm {
  Envelope env;
  double scale = 1.0;
};

std::optional<double> envelope_tail(const std::vector<EnvelopeTerm>& terms, const BetaWeight& beta,
                                    long N) {
  if (beta.kind() == BetaWeight::Kind::Table) return std::nullopt;
  const long span = 4096;
  long double sum = 0.0L;
  for (long n = N + 1; n <= N + span; ++n) {
    double e = 0.0;
    for (const auto& t : terms) e += t.scale * t.env.at(n);
    const double b = beta(n);
    sum += static_cast<long double>(e) * e / (static_cast<long double>(b) * b);
  }
  // Remainder past n_end, with (a+b)^2 <= 2a^2 + 2b^2 and beta nondecreasing.
  const long n_end = N + span + 1;
  const double b_end = beta(n_end);
  long double rest = 0.0L;
  for (const auto& t : terms) {
    const Envelope& v = t.env;
    if (v.q == 0.0) continue;
    const double first = std::pow(v.q, 2.0 * static_cast<double>(n_end / v.K));
    rest += 2.0L * v.K * t.scale * t.scale * v.c * v.c * first / (1.0 - v.q * v.q);
  }
  sum += rest / (static_cast<long double>(b_end) * b_end);
  return std::sqrt(static_cast<double>(sum));
}

std::vector<double> power_norms(const Operator& X, long n_max) {
  std::vector<double> out;
  Operator P = Operator::Identity(X.rows(), X.cols());
  out.push_back(op_norm(P));
  for (long n = 1; n <= n_max; ++n) {
    P = P * X;
    out.push_back(op_norm(P));
  }
  return out;
}

NearnessReport accumulate(const Operator& T, const Operator& V1, const Operator& C, const Operator& V2,
                          const BetaWeight& beta, long N_max, bool two_operator) {
  if (N_max < 1) throw InputError("", "nearness: N_max must be >= 1");
  const Eigen::Index h = T.rows();
  NearnessReport rep;
  rep.N_used = N_max;
  Operator A = Operator::Zero(h, h);
  Operator Tn = Operator::Identity(h, h);
  Operator Cn = Operator::Identity(C.rows(), C.cols());
  long double u2 = 0.0L;
  for (long n = 0; n <= N_max; ++n) {
    if (n > 0) {
      Tn = Tn * T;
      Cn = Cn * C;
    }
    const Operator D = two_operator ? Operator(Tn - Cn) : Operator(Tn - V1 * Cn * V2);
    const double b = beta(n);
    A.noalias() += (D * D.adjoint()) / (b * b);
    A = hermitian_part(A);
    const double dn = D.isZero(0.0) ? 0.0 : op_norm(D) / b;
    rep.term_norms.push_back(dn);
    u2 += static_cast<long double>(dn) * dn;
    const double sn = std::sqrt(std::max(0.0, max_eigenvalue(A)));
    if (!rep.s_partial.empty() && sn < rep.s_partial.back() * (1.0 - 1e-13)) rep.monotone = false;
    rep.s_partial.push_back(sn);
  }
  rep.s = rep.s_partial.back();
  rep.u = std::sqrt(static_cast<double>(u2));

  const auto envT = power_envelope(power_norms(T, N_max));
  const auto envC = power_envelope(power_norms(C, N_max));
  if (envT && envC) {
    const double vscale = two_operator ? 1.0 : op_norm(V1) * op_norm(V2);
    rep.tail_bound = envelope_tail({{*envT, 1.0}, {*envC, vscale}}, beta, N_max);
  }
  return rep;
}

}  // namespace

NearnessReport quadratic_nearness(const Operator& T1, const Operator& T2, const BetaWeight& beta,
                                  long N_max) {
  require_square(T1, "T1");
  require_square(T2, "T2");
  if (T1.rows() != T2.rows()) throw InputError("", "T1 and T2 dimensions differ");
  return accumulate(T1, Operator(), T2, Operator(), beta, N_max, true);
}

NearnessReport factored_nearness(const Operator& T, const Operator& V1, const Operator& C,
                                 const Operator& V2, const BetaWeight& beta, long N_max) {
  require_square(T, "T");
  require_square(C, "C");
  const Eigen::Index h = T.rows();
  const Eigen::Index k = C.rows();
  if (V2.rows() != k || V2.cols() != h) throw InputError("", "V2 must be dim(C) x dim(T)");
  if (V1.rows() != h || V1.cols() != k) throw InputError("", "V1 must be dim(T) x dim(C)");
  return accumulate(T, V1, C, V2, beta, N_max, false);
}

double row_form_check(const Operator& T1, const Operator& T2, const BetaWeight& beta, long N,
                      int samples, std::uint64_t seed) {
  require_square(T1, "T1");
  require_square(T2, "T2");
  if (T1.rows() != T2.rows()) throw InputError("", "T1 and T2 dimensions differ");
  std::vector<Operator> diffs;
  Operator P1 = Operator::Identity(T1.rows(), T1.cols());
  Operator P2 = P1;
  for (long n = 0; n <= N; ++n) {
    if (n > 0) {
      P1 = P1 * T1;
      P2 = P2 * T2;
    }
    diffs.push_back((P1 - P2) / beta(n));
  }
  auto form = [&](const Vector& y) {
    double acc = 0.0;
    for (const auto& D : diffs) acc += (D.adjoint() * y).squaredNorm();
    return acc;
  };
  auto apply = [&](const Vector& y) {
    Vector out = Vector::Zero(y.size());
    for (const auto& D : diffs) out += D * (D.adjoint() * y);
    return out;
  };
  Rng rng(seed);
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector y = random_gaussian_vector(rng, T1.rows());
    for (int step = 0; step < 2; ++step) {
      Vector z = apply(y);
      if (z.norm() == 0.0) break;
      y = z / z.norm();
    }
    best = std::max(best, form(y) / y.squaredNorm());
  }
  return best;
}

AsymptoticNearness asymptotic_nearness(const Operator& T1, const Operator& T2, long n_max) {
  require_square(T1, "T1");
  require_square(T2, "T2");
  if (T1.rows() != T2.rows()) throw InputError("", "T1 and T2 dimensions differ");
  AsymptoticNearness out;
  Operator P1 = Operator::Identity(T1.rows(), T1.cols());
  Operator P2 = P1;
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) {
      P1 = P1 * T1;
      P2 = P2 * T2;
    }
    const Operator D = P1 - P2;
    out.norms.push_back(D.isZero(0.0) ? 0.0 : op_norm(D));
  }
  const long from = n_max - n_max / 4;
  for (long n = from; n <= n_max; ++n) out.last_quarter_max = std::max(out.last_quarter_max, out.norms[n]);
  return out;
}

SandwichResult sandwich_check(const Operator& T, const Operator& W, double r, int m_max, int samples,
                              std::uint64_t seed) {
  require_square(T, "T");
  require_square(W, "W");
  if (T.rows() != W.rows()) throw InputError("", "T and W dimensions differ");
  if (!(r > 0.0 && r < 1.0)) throw InputError("", "sandwich_check: r must lie in (0, 1)");
  const Eigen::Index h = W.rows();
  const double iso = op_norm(Operator(W.adjoint() * W - Operator::Identity(h, h)));
  if (iso > 1e-10) throw Error("W is not an isometry (defect " + std::to_string(iso) + ")");

  SandwichResult out;
  std::vector<Operator> Tp;
  Operator Pt = Operator::Identity(h, h);
  Operator Pw = Pt;
  for (int m = 1; m <= m_max; ++m) {
    Pt = Pt * T;
    Pw = Pw * W;
    Tp.push_back(Pt);
    out.premise_max = std::max(out.premise_max, op_norm(Operator(Pt - Pw)));
  }
  out.premise_ok = out.premise_max <= r;
  if (!out.premise_ok) return out;

  Rng rng(seed);
  double lower = std::numeric_limits<double>::infinity();
  double upper = lower;
  for (int s = 0; s < samples; ++s) {
    const Vector x = random_gaussian_vector(rng, h);
    const double nx = x.norm();
    for (const auto& P : Tp) {
      const double ratio = (P * x).norm() / nx;
      lower = std::min(lower, ratio - (1.0 - r));
      upper = std::min(upper, (1.0 + r) - ratio);
    }
  }
  out.worst_lower = lower;
  out.worst_upper = upper;
  return out;
}

CesaroDiagnostic cesaro_diagnostic(const Operator& T, int M) {
  require_square(T, "T");
  if (M < 1) throw InputError("", "cesaro_diagnostic: M must be >= 1");
  const Eigen::Index h = T.rows();
  CesaroDiagnostic out;
  out.gram = Operator::Zero(h, h);
  Operator P = Operator::Identity(h, h);
  for (int m = 0; m < M; ++m) {
    out.gram += P.adjoint() * P;
    P = P * T;
  }
  out.gram = hermitian_part(out.gram / static_cast<double>(M));
  Eigen::SelfAdjointEigenSolver<Operator> es(out.gram);
  const double lo = es.eigenvalues()(0);
  out.invertible = lo > 1e-12 * std::max(1.0, es.eigenvalues()(h - 1));
  if (!out.invertible) return out;
  out.lower_norm = std::sqrt(lo);
  const Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
  const Operator& V = es.eigenvectors();
  const Operator L = V * sq.cast<Complex>().asDiagonal() * V.adjoint();
  const Operator Linv = V * sq.cwiseInverse().cast<Complex>().asDiagonal() * V.adjoint();
  out.conj_norm = op_norm(Operator(L * T * Linv));
  return out;
}

}  // namespace opsim
