#include "opsim/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "opsim/error.hpp"
#include "opsim/nearness.hpp"
#include "opsim/shifts.hpp"

namespace opsim {

namespace {

struct Resolved {
  Operator C;
  Operator V1;
  Operator V2;
};

Resolved resolve(const RenormConfig& cfg) {
  require_square(cfg.T, "T");
  const Eigen::Index n = cfg.T.rows();
  Resolved r;
  if (cfg.rota()) {
    r.C = Operator::Zero(1, 1);
    r.V1 = Operator::Zero(n, 1);
    r.V2 = Operator::Zero(1, n);
    return r;
  }
  r.C = *cfg.C;
  require_square(r.C, "C");
  const Eigen::Index k = r.C.rows();
  r.V2 = cfg.V2.size() ? cfg.V2 : Operator(Operator::Identity(k, n));
  r.V1 = cfg.V1.size() ? cfg.V1 : Operator(Operator::Identity(n, k));
  if (!cfg.V2.size() && k != n) throw InputError("/V2", "V2 is required when dim(C) != dim(T)");
  if (!cfg.V1.size() && k != n) throw InputError("/V1", "V1 is required when dim(C) != dim(T)");
  if (r.V2.rows() != k || r.V2.cols() != n) throw InputError("/V2", "V2 must be dim(C) x dim(T)");
  if (r.V1.rows() != n || r.V1.cols() != k) throw InputError("/V1", "V1 must be dim(T) x dim(C)");
  return r;
}

Operator inverse_sqrt(const Eigen::SelfAdjointEigenSolver<Operator>& es) {
  const Eigen::VectorXd s = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::optional<double> gamma_opt(const Operator& V1, const Operator& V2, double beta0, double s) {
  const double n2 = op_norm(V2);
  if (n2 == 0.0) throw Error("gamma_opt: V2 is the null operator");
  if (!(s > 0.0)) return std::nullopt;
  return std::sqrt(beta0 * op_norm(V1) / (s * n2));
}

GramCertificate build_gram(const RenormConfig& cfg) {
  if (cfg.p != 2.0) throw InputError("/p", "build_gram requires p = 2");
  if (cfg.d < 0) throw InputError("/d", "d must be >= 0");
  if (cfg.gamma && !(*cfg.gamma > 0.0)) throw InputError("/gamma", "gamma must be positive");
  const Resolved r = resolve(cfg);
  const Operator& T = cfg.T;
  const Eigen::Index n = T.rows();
  const Eigen::Index k = r.C.rows();
  const int d = cfg.d;
  const double beta0 = cfg.beta(0);

  GramCertificate cert;
  cert.d = d;
  cert.rota = cfg.rota();
  const NearnessReport near = factored_nearness(T, r.V1, r.C, r.V2, cfg.beta, std::max(d, 1));
  cert.s_d = near.s_partial[d];

  const double nV1 = op_norm(r.V1);
  const double nV2 = op_norm(r.V2);
  if (!cert.rota) {
    if (cfg.gamma) {
      cert.gamma = *cfg.gamma;
    } else if (auto g = gamma_opt(r.V1, r.V2, beta0, cert.s_d)) {
      cert.gamma = *g;
    } else {
      // s_d = 0: any gamma works; a tiny effective s keeps the bracket within 1e-6 of |V1||V2|.
      const double s_eff = 1e-6 * nV1 * nV2 / beta0;
      cert.gamma = s_eff > 0.0 ? *gamma_opt(r.V1, r.V2, beta0, s_eff) : 1.0;
    }
  }
  const double g2 = cert.gamma * cert.gamma;

  // P = sum T^j T^j* / b_j^2, Z = g sum C^j V2 T^j* / b_j^2, W = g^2 sum C^j V2 V2* C^j* / b_j^2.
  Operator P = Operator::Zero(n, n);
  Operator Z = Operator::Zero(k, n);
  Operator W = Operator::Zero(k, k);
  Operator BB = Operator::Zero(k, k);
  Operator Tj = Operator::Identity(n, n);
  Operator CjV2 = r.V2;
  double bmax = 0.0;
  double bmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= d; ++j) {
    if (j > 0) {
      Tj = Tj * T;
      CjV2 = r.C * CjV2;
    }
    const double b = cfg.beta(j);
    bmax = std::max(bmax, b);
    bmin = std::min(bmin, b);
    const double w = 1.0 / (b * b);
    P.noalias() += w * (Tj * Tj.adjoint());
    if (!cert.rota) {
      const Operator CC = CjV2 * CjV2.adjoint();
      Z.noalias() += (cert.gamma * w) * (CjV2 * Tj.adjoint());
      W.noalias() += (g2 * w) * CC;
      BB.noalias() += g2 * CC;
    }
  }
  const double bb = cert.rota ? 0.0 : op_norm(hermitian_part(BB));
  cert.condition_estimate = (bb + bmax * bmax) / (bmin * bmin);
  if (!(cert.condition_estimate <= 1e14)) throw Error("degenerate weights (condition estimate > 1e14)");

  Operator M = hermitian_part(P);
  if (!cert.rota) {
    const Operator IW = hermitian_part(Operator(Operator::Identity(k, k) + W));
    Eigen::LDLT<Operator> ldlt(IW);
    M -= Z.adjoint() * ldlt.solve(Z);
    M = hermitian_part(M);
  }
  Eigen::LLT<Operator> llt(M);
  if (llt.info() != Eigen::Success) throw Error("degenerate weights (Schur complement not positive)");
  cert.G = hermitian_part(Operator(llt.solve(Operator::Identity(n, n))));

  Eigen::SelfAdjointEigenSolver<Operator> es(cert.G);
  cert.eig_lo = es.eigenvalues()(0);
  cert.eig_hi = es.eigenvalues()(n - 1);
  if (!(cert.eig_lo > 0.0)) throw Error("degenerate weights (Gram matrix not positive)");
  cert.L = psd_sqrt(cert.G);
  cert.L_inv = inverse_sqrt(es);
  cert.T1 = cert.L * T * cert.L_inv;
  cert.norm_T1 = op_norm(cert.T1);
  cert.sim_const = std::sqrt(cert.eig_hi / cert.eig_lo);

  if (cert.rota) {
    cert.bound_lo = cert.s_d > 0.0 ? 1.0 / cert.s_d : std::numeric_limits<double>::infinity();
    cert.bound_hi = beta0;
    cert.sim_bound = beta0 * cert.s_d;
  } else {
    const double lo_sq = (cert.gamma > 0.0 ? nV1 * nV1 / g2 : (nV1 > 0.0 ? INFINITY : 0.0)) +
                         cert.s_d * cert.s_d;
    cert.bound_lo = 1.0 / std::sqrt(lo_sq);
    cert.bound_hi = std::sqrt(g2 * nV2 * nV2 + beta0 * beta0);
    cert.sim_bound = nV1 * nV2 + beta0 * cert.s_d;
  }
  return cert;
}

EquivalenceMargins equivalence_check(const GramCertificate& cert, const RenormConfig& cfg) {
  if (cfg.p != 2.0) throw InputError("/p", "equivalence_check requires p = 2");
  EquivalenceMargins m;
  m.lower = cert.eig_lo - cert.bound_lo * cert.bound_lo;
  m.upper = cert.bound_hi * cert.bound_hi - cert.eig_hi;
  m.ok = m.lower >= -1e-8 && m.upper >= -1e-8;
  if (!m.ok) {
    Eigen::SelfAdjointEigenSolver<Operator> es(cert.G);
    m.witness = m.lower < -1e-8 ? Vector(es.eigenvectors().col(0))
                                : Vector(es.eigenvectors().col(cert.G.rows() - 1));
  }
  return m;
}

double gram_norm_sq(const Operator& G, const Vector& stacked) {
  const Eigen::Index n = G.rows();
  if (stacked.size() % n != 0) throw InputError("", "vector length is not a multiple of dim(T)");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < stacked.size() / n; ++j) {
    const Vector xj = stacked.segment(j * n, n);
    acc += xj.dot(G * xj).real();
  }
  return acc;
}

DominanceStep dominance_step_check(const RenormConfig& cfg, const MatrixPolynomial& P, const Vector& x,
                                   int e) {
  if (P.degree() > e) throw InputError("", "dominance_step_check: deg P exceeds e");
  const GramCertificate cert_d = build_gram(cfg);
  RenormConfig wide = cfg;
  wide.d = cfg.d + e;
  if (!cfg.rota()) wide.gamma = cert_d.gamma;
  const GramCertificate cert_de = build_gram(wide);
  return dominance_step_check(cfg, cert_d, cert_de, P, x);
}

DominanceStep dominance_step_check(const RenormConfig& cfg, const GramCertificate& cert_d,
                                   const GramCertificate& cert_de, const MatrixPolynomial& P,
                                   const Vector& x) {
  const Eigen::Index n = cfg.T.rows();
  if (x.size() != P.size() * n) throw InputError("", "x must stack P.size() vectors of dim(T)");
  DominanceStep out;
  const int deg = std::max(P.degree(), 0);
  const long trunc = cert_de.d + deg + 4;
  const TruncatedShift S = truncated_weighted_shift(cfg.beta, trunc, 1);
  out.norm_PS = op_norm(matpoly_eval(P, S.matrix));
  if (!cfg.rota()) out.norm_PC = op_norm(matpoly_eval(P, *cfg.C));
  const Vector y = matpoly_eval(P, cfg.T) * x;
  out.lhs = std::sqrt(std::max(0.0, gram_norm_sq(cert_de.G, y)));
  out.rhs = std::max(out.norm_PC, out.norm_PS) * std::sqrt(std::max(0.0, gram_norm_sq(cert_d.G, x)));
  out.ok = out.lhs <= out.rhs + 1e-8 * out.rhs;
  return out;
}

double banach_norm_value(const Operator& T, const Vector& x, double p, const BetaWeight& beta, int d) {
  require_square(T, "T");
  if (!(p > 1.0)) throw InputError("/p", "p must exceed 1");
  if (d < 0) throw InputError("/d", "d must be >= 0");
  const Eigen::Index n = T.rows();
  if (x.size() != n) throw InputError("", "x must have dim(T) entries");
  const double xnorm = x.norm();
  if (xnorm == 0.0) return 0.0;
  const double b0 = beta(0);
  if (d == 0) return b0 * xnorm;

  const Vector xs = x / xnorm;
  std::vector<Operator> Tk = powers(T, d);
  std::vector<double> bp(d + 1);
  for (int k = 0; k <= d; ++k) bp[k] = std::pow(beta(k), p);

  const Eigen::Index dim = 2 * n * d;
  auto unpack = [&](const Eigen::VectorXd& z, int k) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = {z(2 * (n * (k - 1) + i)), z(2 * (n * (k - 1) + i) + 1)};
    return v;
  };
  auto objective = [&](const Eigen::VectorXd& z, Eigen::VectorXd& grad) {
    Vector r = xs;
    std::vector<Vector> xk(d + 1);
    for (int k = 1; k <= d; ++k) {
      xk[k] = unpack(z, k);
      r -= Tk[k] * xk[k];
    }
    const double rn = r.norm();
    double f = bp[0] * std::pow(rn, p);
    const Vector gr = rn > 0.0 ? Vector(bp[0] * p * std::pow(rn, p - 2.0) * r) : Vector(Vector::Zero(n));
    grad.resize(dim);
    for (int k = 1; k <= d; ++k) {
      const double nk = xk[k].norm();
      f += bp[k] * std::pow(nk, p);
      Vector g = -(Tk[k].adjoint() * gr);
      if (nk > 0.0) g += bp[k] * p * std::pow(nk, p - 2.0) * xk[k];
      for (Eigen::Index i = 0; i < n; ++i) {
        grad(2 * (n * (k - 1) + i)) = g(i).real();
        grad(2 * (n * (k - 1) + i) + 1) = g(i).imag();
      }
    }
    return f;
  };

  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd g;
  double f = objective(z, g);
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;  // (s, y)
  const int max_iter = 100000;
  int quiet = 0;
  for (int it = 0; it < max_iter; ++it) {
    if (g.norm() <= 1e-12) return std::pow(f, 1.0 / p) * xnorm;
    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(mem.size());
    for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = mem[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    if (!mem.empty()) {
      const auto& [s, y] = mem.back();
      q *= s.dot(y) / y.dot(y);
    } else {
      q /= std::max(1.0, g.norm());
    }
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const auto& [s, y] = mem[i];
      const double b = y.dot(q) / y.dot(s);
      q += s * (alpha[i] - b);
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      mem.clear();
      dir = -g / std::max(1.0, g.norm());
      slope = g.dot(dir);
    }
    double t = 1.0;
    Eigen::VectorXd g_new;
    double f_new = objective(z + t * dir, g_new);
    while (f_new > f + 1e-4 * t * slope && t > 1e-20) {
      t *= 0.5;
      f_new = objective(z + t * dir, g_new);
    }
    if (!(f_new <= f)) return std::pow(f, 1.0 / p) * xnorm;  // no descent left at machine precision
    const Eigen::VectorXd s = t * dir;
    const Eigen::VectorXd y = g_new - g;
    z += s;
    const double decrease = f - f_new;
    f = f_new;
    g = g_new;
    if (s.dot(y) > 1e-300) {
      mem.emplace_back(s, y);
      if (mem.size() > 10) mem.pop_front();
    }
    quiet = decrease <= 1e-15 * std::max(f, 1e-300) ? quiet + 1 : 0;
    if (quiet >= 5) return std::pow(f, 1.0 / p) * xnorm;
  }
  throw ConvergenceError("banach_norm_value: no convergence in 1e5 iterations",
                         std::pow(f, 1.0 / p) * xnorm);
}

}  // namespace opsim
