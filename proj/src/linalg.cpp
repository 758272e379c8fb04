#include "opsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "opsim/error.hpp"
#include "opsim/rng.hpp"

namespace opsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PeriodicMax {
  double grid = 0.0;
  double refined = 0.0;
};

// Golden-section search for a maximum of f on [a, b]; returns the best value seen.
double golden_max(const std::function<double(double)>& f, double a, double b, double best) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-11) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

// Uniform grid over [0, 2pi) followed by golden-section refinement around the
// largest local maxima of the grid.
PeriodicMax maximize_periodic(const std::function<double(double)>& f, int grid,
                              int refine_top = 8) {
  const double h = kTwoPi / grid;
  std::vector<double> vals(grid);
  for (int i = 0; i < grid; ++i) vals[i] = f(i * h);

  std::vector<int> peaks;
  for (int i = 0; i < grid; ++i) {
    const double prev = vals[(i + grid - 1) % grid];
    const double next = vals[(i + 1) % grid];
    if (vals[i] >= prev && vals[i] >= next) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](int a, int b) { return vals[a] > vals[b]; });

  PeriodicMax out;
  out.grid = *std::max_element(vals.begin(), vals.end());
  out.refined = out.grid;
  const int n_refine = std::min<int>(refine_top, static_cast<int>(peaks.size()));
  for (int k = 0; k < n_refine; ++k) {
    const double t = peaks[k] * h;
    out.refined = golden_max(f, t - h, t + h, out.refined);
  }
  return out;
}

double gram_norm(const Operator& A) {
  const Operator g = A.rows() <= A.cols() ? Operator(A * A.adjoint()) : Operator(A.adjoint() * A);
  Eigen::SelfAdjointEigenSolver<Operator> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

}  // namespace

void require_well_formed(const Operator& A, std::string_view name) {
  if (A.rows() == 0 || A.cols() == 0) throw InputError("", std::string(name) + ": empty operator");
  if (!A.allFinite()) throw InputError("", std::string(name) + ": non-finite entry");
}

void require_square(const Operator& A, std::string_view name) {
  require_well_formed(A, name);
  if (A.rows() != A.cols())
    throw InputError("", std::string(name) + ": not square (" + std::to_string(A.rows()) + "x" +
                             std::to_string(A.cols()) + ")");
}

double op_norm(const Operator& A) {
  if (A.rows() == 0 || A.cols() == 0) throw Error("empty operator");
  const Eigen::Index m = std::min(A.rows(), A.cols());
  if (m <= 16) {
    Eigen::JacobiSVD<Operator> svd(A);
    return svd.singularValues()(0);
  }
  if (m <= 192) return gram_norm(A);
  const Operator Ah = A.adjoint();
  if (A.cols() <= A.rows()) {
    return std::sqrt(lanczos_max_eigenvalue([&](const Vector& v) { return Vector(Ah * (A * v)); },
                                            A.cols()));
  }
  return std::sqrt(
      lanczos_max_eigenvalue([&](const Vector& v) { return Vector(A * (Ah * v)); }, A.rows()));
}

double spectral_radius(const Operator& A) {
  require_square(A);
  Eigen::ComplexEigenSolver<Operator> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Operator hermitian_part(const Operator& A) { return (A + A.adjoint()) / 2.0; }

double max_eigenvalue(const Operator& H) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

double min_eigenvalue(const Operator& H) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double numerical_radius(const Operator& A) {
  require_square(A);
  if (A.isZero(0.0)) return 0.0;
  if (A.rows() == 1) return std::abs(A(0, 0));
  const Operator Ah = A.adjoint();
  auto f = [&](double theta) {
    const Complex e = std::polar(1.0, theta);
    const Operator h = (e * A + std::conj(e) * Ah) / 2.0;
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
  };
  return maximize_periodic(f, 1024).refined;
}

Operator psd_sqrt(const Operator& G) {
  require_square(G, "psd_sqrt");
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
  if ((G - G.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale) throw Error("psd_sqrt: not Hermitian");

  const Eigen::Index n = G.rows();
  bool diagonal = true;
  for (Eigen::Index i = 0; i < n && diagonal; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && G(i, j) != Complex(0.0)) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    Operator out = Operator::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = G(i, i).real();
      if (v < -1e-12) throw Error("not PSD (eigenvalue " + std::to_string(v) + ")");
      out(i, i) = std::sqrt(std::max(0.0, v));
    }
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(G));
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev(0) < -1e-12) throw Error("not PSD (eigenvalue " + std::to_string(ev(0)) + ")");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  const Operator& V = es.eigenvectors();
  return V * ev.cast<Complex>().asDiagonal() * V.adjoint();
}

std::vector<Operator> powers(const Operator& A, int n_max) {
  require_square(A);
  std::vector<Operator> out;
  out.reserve(n_max + 1);
  out.push_back(Operator::Identity(A.rows(), A.cols()));
  for (int k = 1; k <= n_max; ++k) out.push_back(out.back() * A);
  return out;
}

double lanczos_max_eigenvalue(const std::function<Vector(const Vector&)>& apply, Eigen::Index dim,
                              double tol, int max_iter, std::uint64_t seed) {
  if (dim == 0) throw Error("empty operator");
  Rng rng(seed);
  const int steps = static_cast<int>(std::min<Eigen::Index>(max_iter, dim));
  std::vector<Vector> basis;
  basis.reserve(steps + 1);
  Vector v = random_gaussian_vector(rng, dim);
  v.normalize();
  basis.push_back(v);

  std::vector<double> alpha;
  std::vector<double> beta;
  double theta = 0.0;
  double theta_prev = -1.0;
  int stagnant = 0;
  for (int j = 0; j < steps; ++j) {
    Vector w = apply(basis[j]);
    const double a = basis[j].dot(w).real();
    alpha.push_back(a);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : basis) w -= q * q.dot(w);
    const double b = w.norm();

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), alpha.size());
    Eigen::VectorXd sub = beta.empty() ? Eigen::VectorXd()
                                       : Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), beta.size()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    theta = tri.eigenvalues()(tri.eigenvalues().size() - 1);

    const double scale = std::max(std::abs(theta), 1e-300);
    if (b <= 1e-14 * scale) break;  // invariant subspace found: Ritz values exact
    if (std::abs(theta - theta_prev) <= tol * scale) {
      if (++stagnant >= 3) break;
    } else {
      stagnant = 0;
    }
    theta_prev = theta;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return theta;
}

MatrixPolynomial::MatrixPolynomial(int size) : size_(size), coeffs_(size * size) {
  if (size < 1) throw InputError("", "matrix polynomial size must be positive");
}

MatrixPolynomial MatrixPolynomial::scalar(std::vector<Complex> coeffs) {
  MatrixPolynomial p(1);
  p.entry(0, 0) = std::move(coeffs);
  return p;
}

int MatrixPolynomial::degree() const {
  int deg = -1;
  for (const auto& c : coeffs_)
    for (int k = static_cast<int>(c.size()) - 1; k > deg; --k)
      if (c[k] != Complex(0.0)) {
        deg = k;
        break;
      }
  return deg;
}

Operator MatrixPolynomial::evaluate(Complex z) const {
  Operator out(size_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) {
      Complex acc = 0.0;
      const auto& c = entry(i, j);
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
      out(i, j) = acc;
    }
  return out;
}

void MatrixPolynomial::scale(Complex factor) {
  for (auto& c : coeffs_)
    for (auto& a : c) a *= factor;
}

MatrixPolynomial MatrixPolynomial::diagonal_embedding(int copies) const {
  MatrixPolynomial out(size_ * copies);
  for (int b = 0; b < copies; ++b)
    for (int i = 0; i < size_; ++i)
      for (int j = 0; j < size_; ++j) out.entry(b * size_ + i, b * size_ + j) = entry(i, j);
  return out;
}

Operator matpoly_eval(const MatrixPolynomial& P, const Operator& A) {
  require_square(A, "matpoly_eval");
  const Eigen::Index m = A.rows();
  const int n = P.size();
  Operator out = Operator::Zero(n * m, n * m);
  const Operator I = Operator::Identity(m, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& c = P.entry(i, j);
      if (c.empty()) continue;
      Operator acc = c.back() * I;
      for (auto it = c.rbegin() + 1; it != c.rend(); ++it) acc = acc * A + (*it) * I;
      out.block(i * m, j * m, m, m) = acc;
    }
  return out;
}

CircleSupNorm circle_sup_norm(const MatrixPolynomial& P, int grid_size) {
  if (grid_size < 256) throw InputError("", "circle_sup_norm: grid_size must be >= 256");
  std::function<double(double)> f;
  if (P.size() == 1) {
    f = [&](double t) { return std::abs(P.evaluate(std::polar(1.0, t))(0, 0)); };
  } else {
    f = [&](double t) { return op_norm(P.evaluate(std::polar(1.0, t))); };
  }
  const PeriodicMax m = maximize_periodic(f, grid_size);
  return {m.grid, m.refined, grid_size};
}

double vector_pnorm(const Vector& x, double p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), p);
  return std::pow(s, 1.0 / p);
}

PNormBracket induced_pnorm_bracket(const Operator& A, double p, int samples, std::uint64_t seed) {
  if (!(p > 1.0)) throw InputError("", "induced_pnorm_bracket: p must exceed 1");
  require_square(A, "induced_pnorm_bracket");
  const Eigen::Index n = A.rows();
  PNormBracket out;
  for (Eigen::Index j = 0; j < n; ++j) out.lo = std::max(out.lo, vector_pnorm(A.col(j), p));
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vector x = random_gaussian_vector(rng, n);
    x /= vector_pnorm(x, p);
    out.lo = std::max(out.lo, vector_pnorm(A * x, p));
  }
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  const double norm_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
  out.hi = std::pow(norm1, 1.0 / p) * std::pow(norm_inf, 1.0 - 1.0 / p);
  return out;
}

}  // namespace opsim
