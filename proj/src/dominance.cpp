#include "opsim/dominance.hpp"

#include <cmath>
#include <limits>

#include "opsim/error.hpp"

namespace opsim {

namespace {

constexpr double kFloor = 1e-13;

void normalize_on_circle(MatrixPolynomial& P) {
  const double sup = circle_sup_norm(P, 1024).value();
  if (sup > 0.0) P.scale(1.0 / sup);
}

// Coefficients of the Chebyshev polynomial T_k, ascending.
std::vector<double> chebyshev(int k) {
  std::vector<double> a{1.0};
  std::vector<double> b{0.0, 1.0};
  if (k == 0) return a;
  for (int j = 1; j < k; ++j) {
    std::vector<double> c(b.size() + 1, 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) c[i + 1] += 2.0 * b[i];
    for (std::size_t i = 0; i < a.size(); ++i) c[i] -= a[i];
    a = std::move(b);
    b = std::move(c);
  }
  return b;
}

MatrixPolynomial draw(const PolyFamily& fam, Rng& rng, int level, int index) {
  switch (fam.kind) {
    case PolyFamily::Kind::RandomCoeff:
      return random_matrix_polynomial(rng, level, fam.degree_max);
    case PolyFamily::Kind::ZdVanishing: {
      const int deg = std::max(fam.degree_max, fam.d);
      MatrixPolynomial P = random_matrix_polynomial(rng, level, deg);
      for (int i = 0; i < level; ++i)
        for (int j = 0; j < level; ++j)
          for (int c = 0; c < fam.d && c < static_cast<int>(P.entry(i, j).size()); ++c)
            P.entry(i, j)[c] = 0.0;
      normalize_on_circle(P);
      return P;
    }
    case PolyFamily::Kind::ChebyshevLike: {
      MatrixPolynomial P(level);
      for (int i = 0; i < level; ++i)
        for (int j = 0; j < level; ++j) {
          const int k = rng.uniform_int(0, fam.degree_max);
          const Complex g = rng.complex_gaussian();
          const auto t = chebyshev(k);
          auto& e = P.entry(i, j);
          e.assign(t.size(), 0.0);
          for (std::size_t c = 0; c < t.size(); ++c) e[c] = g * t[c];
        }
      normalize_on_circle(P);
      return P;
    }
    case PolyFamily::Kind::Monomials: {
      const int k = 1 + index % std::max(fam.degree_max, 1);
      std::vector<Complex> c(k + 1, 0.0);
      c[k] = 1.0;
      return MatrixPolynomial::scalar(std::move(c)).diagonal_embedding(level);
    }
  }
  return MatrixPolynomial(level);
}

}  // namespace

PolyFamily::Kind PolyFamily::parse_kind(const std::string& name) {
  if (name == "random_coeff") return Kind::RandomCoeff;
  if (name == "chebyshev_like") return Kind::ChebyshevLike;
  if (name == "zd_vanishing") return Kind::ZdVanishing;
  if (name == "monomials") return Kind::Monomials;
  throw InputError("/family", "unknown polynomial family '" + name + "'");
}

std::string PolyFamily::kind_name(Kind kind) {
  switch (kind) {
    case Kind::RandomCoeff: return "random_coeff";
    case Kind::ChebyshevLike: return "chebyshev_like";
    case Kind::ZdVanishing: return "zd_vanishing";
    case Kind::Monomials: return "monomials";
  }
  return "";
}

MatrixPolynomial random_matrix_polynomial(Rng& rng, int level, int degree) {
  MatrixPolynomial P(level);
  for (int i = 0; i < level; ++i)
    for (int j = 0; j < level; ++j) {
      auto& e = P.entry(i, j);
      e.resize(degree + 1);
      for (auto& c : e) c = rng.complex_gaussian();
    }
  normalize_on_circle(P);
  return P;
}

std::vector<MatrixPolynomial> sample_family(const PolyFamily& fam, int level) {
  if (level < 1) throw InputError("/level", "level must be >= 1");
  if (fam.count < 1) throw InputError("/count", "count must be >= 1");
  if (fam.degree_max < 0) throw InputError("/degree", "degree must be >= 0");
  std::vector<MatrixPolynomial> out;
  Rng base(stream_seed(fam.seed, "family/level1"));
  for (int i = 0; i < fam.count; ++i) out.push_back(draw(fam, base, 1, i).diagonal_embedding(level));
  if (level > 1) {
    Rng rng(stream_seed(fam.seed, "family/level" + std::to_string(level)));
    for (int i = 0; i < fam.count; ++i) out.push_back(draw(fam, rng, level, i));
  }
  return out;
}

RatioResult dominance_ratio(const Operator& T1, const Operator& T2,
                            const std::vector<MatrixPolynomial>& family) {
  require_square(T1, "T1");
  require_square(T2, "T2");
  RatioResult out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double den = op_norm(matpoly_eval(family[i], T2));
    if (den < kFloor) {
      ++out.skipped;
      out.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double ratio = op_norm(matpoly_eval(family[i], T1)) / den;
    out.ratios.push_back(ratio);
    if (out.witness_index < 0 || ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.witness_index = static_cast<int>(i);
    }
  }
  if (out.witness_index < 0) throw Error("T2 annihilates family");
  out.witness = family[out.witness_index];
  return out;
}

RatioResult dominance_ratio(const Operator& T1, const Operator& T2, const PolyFamily& fam, int level) {
  return dominance_ratio(T1, T2, sample_family(fam, level));
}

RatioResult paulsen_ratio(const Operator& T, const std::vector<MatrixPolynomial>& family) {
  require_square(T, "T");
  RatioResult out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double den = circle_sup_norm(family[i], 1024).value();
    if (den < kFloor) {
      ++out.skipped;
      out.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double ratio = op_norm(matpoly_eval(family[i], T)) / den;
    out.ratios.push_back(ratio);
    if (out.witness_index < 0 || ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.witness_index = static_cast<int>(i);
    }
  }
  if (out.witness_index >= 0) out.witness = family[out.witness_index];
  return out;
}

RatioResult paulsen_ratio(const Operator& T, const PolyFamily& fam, int level) {
  return paulsen_ratio(T, sample_family(fam, level));
}

NearnessReport zd_pipeline_check(const Operator& T, const Operator& V1, const Operator& C,
                                 const Operator& V2, int d, int N_max) {
  require_square(T, "T");
  require_square(C, "C");
  if (d < 0 || N_max < std::max(d, 1)) throw InputError("", "zd_pipeline_check: need 0 <= d <= N_max");
  if (V1.rows() != T.rows() || V1.cols() != C.rows() || V2.rows() != C.rows() || V2.cols() != T.rows())
    throw InputError("", "zd_pipeline_check: V1, C, V2 do not compose");
  Operator Tk = Operator::Identity(T.rows(), T.cols());
  Operator Ck = Operator::Identity(C.rows(), C.cols());
  for (int k = 0; k <= N_max; ++k) {
    if (k > 0) {
      Tk = Tk * T;
      Ck = Ck * C;
    }
    if (k < d) continue;
    const Operator D = Tk - V1 * Ck * V2;
    const double defect = D.isZero(0.0) ? 0.0 : op_norm(D);
    if (defect > 1e-8)
      throw Error("factorization T^k = V1 C^k V2 fails at k = " + std::to_string(k) + " (defect " +
                  std::to_string(defect) + ")");
  }
  return factored_nearness(T, V1, C, V2, BetaWeight::constant(1.0), N_max);
}

}  // namespace opsim
