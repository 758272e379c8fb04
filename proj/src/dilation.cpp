#include "opsim/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "opsim/error.hpp"

namespace opsim {

RhoSeq RhoSeq::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InputError("/rho", "rho must be positive");
  return RhoSeq(Kind::Const, value, 0.0, 0.0, {});
}

RhoSeq RhoSeq::table(std::vector<double> values) {
  if (values.empty()) throw InputError("/rho", "rho table is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("/rho", "rho entries must be positive");
  return RhoSeq(Kind::Table, 0.0, 0.0, 0.0, std::move(values));
}

RhoSeq RhoSeq::power(double base, double scale, double exponent) {
  if (!(base > 0.0) || scale < 0.0 || exponent < 0.0)
    throw InputError("/rho", "power rho needs base > 0, scale >= 0, exponent >= 0");
  return RhoSeq(Kind::Power, base, scale, exponent, {});
}

RhoSeq RhoSeq::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("/rho", "expected const:v or table:a,b,...");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  std::vector<double> vals;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("/rho", "not a number: '" + item + "'");
    }
  }
  if (kind == "const" && vals.size() == 1) return constant(vals[0]);
  if (kind == "table") return table(vals);
  if (kind == "power" && vals.size() == 3) return power(vals[0], vals[1], vals[2]);
  throw InputError("/rho", "cannot parse rho specifier '" + text + "'");
}

RhoSeq RhoSeq::from_json(const Json& j, const std::string& pointer) {
  if (j.is_string()) return parse(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind")) throw InputError(pointer, "rho specifier needs a kind");
  const std::string kind = j["kind"];
  auto num = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw InputError(pointer + "/" + key, "expected a number");
    return j[key].get<double>();
  };
  if (kind == "const") return constant(num("value"));
  if (kind == "table") {
    if (!j.contains("table") || !j["table"].is_array()) throw InputError(pointer + "/table", "expected an array");
    return table(j["table"].get<std::vector<double>>());
  }
  if (kind == "power") return power(num("base"), num("scale"), num("exponent"));
  throw InputError(pointer + "/kind", "unknown rho kind '" + kind + "'");
}

Json RhoSeq::to_json() const {
  switch (kind_) {
    case Kind::Const: return {{"kind", "const"}, {"value", a_}};
    case Kind::Table: return {{"kind", "table"}, {"table", table_}};
    case Kind::Power: return {{"kind", "power"}, {"base", a_}, {"scale", b_}, {"exponent", c_}};
  }
  return {};
}

double RhoSeq::operator()(long n) const {
  if (n < 1) throw Error("rho is indexed from n = 1");
  switch (kind_) {
    case Kind::Const: return a_;
    case Kind::Table: return table_[std::min<std::size_t>(n - 1, table_.size() - 1)];
    case Kind::Power: return a_ + b_ * std::pow(static_cast<double>(n), -c_);
  }
  return 1.0;
}

double RhoSeq::inf_after(long n) const {
  switch (kind_) {
    case Kind::Const: return a_;
    case Kind::Table: {
      const std::size_t from = std::min<std::size_t>(std::max<long>(n, 0), table_.size() - 1);
      return *std::min_element(table_.begin() + from, table_.end());
    }
    case Kind::Power: return a_;
  }
  return 1.0;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "";
}

CrhoResult crho_positivity(const Operator& T, const RhoSeq& rho, double r_max, int grid, int N_trunc) {
  require_square(T, "T");
  if (!(r_max > 0.0 && r_max < 1.0)) throw InputError("/rmax", "r_max must lie in (0, 1)");
  if (grid < 8) throw InputError("/grid", "grid must be >= 8");
  if (N_trunc < 1) throw InputError("/ntrunc", "N_trunc must be >= 1");
  const Eigen::Index h = T.rows();
  CrhoResult out;
  out.r_max = r_max;
  out.grid = grid;
  out.radii = std::max(16, grid / 4);
  out.N_trunc = N_trunc;

  // Coefficients 2 T^n / rho_n, and whether the series terminates.
  std::vector<Operator> terms;
  Operator P = Operator::Identity(h, h);
  bool nilpotent = false;
  for (int n = 1; n <= N_trunc + 1; ++n) {
    P = P * T;
    if (P.isZero(0.0)) {
      nilpotent = true;
      break;
    }
    if (n <= N_trunc) terms.push_back((2.0 / rho(n)) * P);
  }

  if (nilpotent) {
    out.tail_bound = 0.0;
  } else {
    const double q = r_max * op_norm(T);
    if (q < 1.0) out.tail_bound = 2.0 * std::pow(q, N_trunc + 1) / ((1.0 - q) * rho.inf_after(N_trunc));
  }

  out.min_eig = std::numeric_limits<double>::infinity();
  const Operator I = Operator::Identity(h, h);
  for (int j = 1; j <= out.radii; ++j) {
    const double r = r_max * j / out.radii;
    for (int i = 0; i < grid; ++i) {
      const Complex lambda = std::polar(r, 2.0 * std::numbers::pi * i / grid);
      Operator F = I;
      Complex lp = 1.0;
      for (const auto& t : terms) {
        lp *= lambda;
        F += lp * t;
      }
      const double e = min_eigenvalue(F);
      if (e < out.min_eig) {
        out.min_eig = e;
        out.witness = lambda;
      }
    }
  }
  if (!out.tail_bound) {
    out.verdict = Verdict::Inconclusive;
  } else {
    out.verdict = out.min_eig >= -*out.tail_bound - 1e-10 ? Verdict::Pass : Verdict::Fail;
  }
  return out;
}

double rho_dilation_check(const Operator& T, const Operator& U, const Operator& V, const RhoSeq& rho,
                          int n_max) {
  require_square(T, "T");
  require_square(U, "U");
  if (V.rows() != U.rows() || V.cols() != T.rows()) throw InputError("", "V must map dim(T) into dim(U)");
  const double unitary = op_norm(Operator(U.adjoint() * U - Operator::Identity(U.rows(), U.cols())));
  if (unitary > 1e-10) throw Error("U is not unitary (defect " + std::to_string(unitary) + ")");
  const double iso = op_norm(Operator(V.adjoint() * V - Operator::Identity(V.cols(), V.cols())));
  if (iso > 1e-10) throw Error("V is not an isometry (defect " + std::to_string(iso) + ")");
  double worst = 0.0;
  Operator Tn = Operator::Identity(T.rows(), T.cols());
  Operator UnV = V;
  for (int n = 1; n <= n_max; ++n) {
    Tn = Tn * T;
    UnV = U * UnV;
    const Operator D = Tn - rho(n) * (V.adjoint() * UnV);
    worst = std::max(worst, D.isZero(0.0) ? 0.0 : op_norm(D));
  }
  return worst;
}

RaczDeficiency racz_deficiency(const RhoSeq& rho, int k, double M, long N) {
  if (k < 1) throw InputError("/k", "k must be >= 1");
  if (!(M > 0.0)) throw InputError("/M", "M must be positive");
  if (N < 1) throw InputError("/N", "N must be >= 1");
  RaczDeficiency out;
  std::vector<double> partial(N);
  long double s = 0.0L;
  for (long n = 1; n <= N; ++n) {
    const double dev = rho(n * k) - M;
    s += static_cast<long double>(dev) * dev;
    partial[n - 1] = static_cast<double>(s);
    if (n <= 4096) out.majorants.push_back(std::abs(dev));
  }
  out.partial = static_cast<double>(s);
  out.converged = !decade_divergence(partial);
  if (out.converged && N >= 4) {
    const double tN = std::pow(rho(N * k) - M, 2);
    const double tH = std::pow(rho((N / 2) * k) - M, 2);
    if (tN == 0.0) {
      out.tail_estimate = 0.0;
    } else if (tH > 0.0) {
      const double q = std::log2(tH / tN) / std::log2(static_cast<double>(N) / (N / 2));
      if (q > 1.0) out.tail_estimate = tN * N / (q - 1.0);
    }
  }
  return out;
}

RaczPipeline racz_pipeline(const Operator& T, const Dilation& dil, const RhoSeq& rho, int k, double M,
                           int N) {
  require_square(T, "T");
  const Operator& U = dil.U;
  const Operator& V = dil.embed;
  RaczPipeline out;
  out.racz = racz_deficiency(rho, k, M, N);

  Operator S = Operator::Identity(T.rows(), T.cols());
  for (int i = 0; i < k; ++i) S = S * T;
  Operator Uk = Operator::Identity(U.rows(), U.cols());
  for (int i = 0; i < k; ++i) Uk = Uk * U;

  // Per-term defects |S^n - rho_{nk} V* U^{nk} V|.
  long double bound = static_cast<long double>(1.0 - M) * (1.0 - M);
  Operator Sn = Operator::Identity(S.rows(), S.cols());
  Operator UnV = V;
  for (int n = 1; n <= N; ++n) {
    Sn = Sn * S;
    UnV = Uk * UnV;
    const Operator D = Sn - rho(static_cast<long>(n) * k) * (V.adjoint() * UnV);
    const double defect = D.isZero(0.0) ? 0.0 : op_norm(D);
    out.dilation_defect = std::max(out.dilation_defect, defect);
    const double term = defect + std::abs(rho(static_cast<long>(n) * k) - M);
    bound += static_cast<long double>(term) * term;
  }
  out.bound = static_cast<double>(bound);
  out.nearness = factored_nearness(S, M * V.adjoint(), Uk, V, BetaWeight::constant(1.0), N);
  const double s2 = out.nearness.s * out.nearness.s;
  out.ok = s2 <= out.bound + 1e-10 * std::max(1.0, out.bound);
  return out;
}

}  // namespace opsim
