#include "sandwich/irkbs.hpp"

#include <cmath>
#include <sstream>

#include "sandwich/errors.hpp"

namespace sandwich::irkbs {

namespace {

Rational factorial(int n) {
  Rational f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Rational rabs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

std::vector<int> nonzero_indices(const std::vector<Rational>& c) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) idx.push_back(static_cast<int>(i));
  return idx;
}

// Constant index gap and constant |b_j / b_i| along the nonzero entries.
struct Geometric {
  bool ok = false;
  int gap = 0;
  Rational ratio;
};

Geometric geometric_pattern(const std::vector<Rational>& b, const std::vector<int>& idx) {
  Geometric g;
  if (idx.size() < 2) return g;
  g.gap = idx[1] - idx[0];
  g.ratio = rabs(b[idx[1]] / b[idx[0]]);
  for (std::size_t k = 2; k < idx.size(); ++k) {
    if (idx[k] - idx[k - 1] != g.gap) return g;
    if (rabs(b[idx[k]] / b[idx[k - 1]]) != g.ratio) return g;
  }
  g.ok = true;
  return g;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

void SeriesSpec::validate() const {
  const int n = truncation == 0 ? static_cast<int>(coefficients.size()) : truncation;
  if (n < 2) throw ValidationError("series.truncation", "at least two coefficients are needed");
  if (n > static_cast<int>(coefficients.size())) {
    throw ValidationError("series.truncation", "truncation exceeds the number of coefficients");
  }
  bool any = false;
  for (int i = 0; i < n; ++i) any = any || coefficients[i] != 0;
  if (!any) throw ValidationError("series.coefficients", "coefficients are all zero");
  if (rho.is_finite() && rho.value() <= 0) {
    throw ValidationError("series.rho", "domain radius must be positive");
  }
}

std::vector<Rational> SeriesSpec::used() const {
  const std::size_t n = truncation == 0 ? coefficients.size() : static_cast<std::size_t>(truncation);
  return {coefficients.begin(), coefficients.begin() + static_cast<std::ptrdiff_t>(n)};
}

SeriesSpec parse_series(std::string_view text, int truncation) {
  if (truncation < 2) throw Error(ErrorCode::ParameterRange, "series truncation must be >= 2");
  SeriesSpec s;
  s.truncation = truncation;
  const std::string t(text);
  auto gen = [&](auto f) {
    for (int i = 0; i < truncation; ++i) s.coefficients.push_back(f(i));
  };
  if (t == "cos") {
    gen([](int i) -> Rational {
      if (i % 2) return 0;
      return Rational((i / 2) % 2 ? -1 : 1) / factorial(i);
    });
  } else if (t == "cosh") {
    gen([](int i) -> Rational { return i % 2 ? Rational(0) : 1 / factorial(i); });
  } else if (t == "exp") {
    gen([](int i) { return Rational(1) / factorial(i); });
  } else if (t == "ones") {
    gen([](int) { return Rational(1); });
  } else if (t.rfind("geometric:", 0) == 0) {
    const ExtRational r = ExtRational::parse(t.substr(10));
    if (r.is_infinite() || r.value() <= 0) {
      throw Error(ErrorCode::ParameterRange, "geometric ratio must be positive and finite");
    }
    Rational p = 1;
    gen([&](int) {
      const Rational c = p;
      p *= r.value();
      return c;
    });
  } else {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      ExtRational v;
      try {
        v = ExtRational::parse(item);
      } catch (const Error&) {
        throw Error(ErrorCode::Parse, "unknown series '" + t + "'");
      }
      if (v.is_infinite()) throw Error(ErrorCode::Parse, "series coefficients must be finite");
      s.coefficients.push_back(v.value());
    }
    s.truncation = static_cast<int>(s.coefficients.size());
    return s;
  }
  s.name = t;
  return s;
}

const char* to_string(RadiusMethod m) {
  switch (m) {
    case RadiusMethod::GeometricFit: return "geometric-fit";
    case RadiusMethod::FactorialDetect: return "factorial-detect";
    case RadiusMethod::CauchyHadamard: return "cauchy-hadamard";
    case RadiusMethod::AllZero: return "all-zero";
  }
  return "?";
}

std::string RadiusEstimate::str() const {
  if (infinite) return "inf";
  if (exact) return ExtRational(*exact).str();
  return fmt(value);
}

RadiusEstimate radius_lower_bound(const std::vector<Rational>& coeffs) {
  if (coeffs.size() < 2) throw Error(ErrorCode::Precondition, "radius estimate needs at least two coefficients");
  RadiusEstimate r;
  const std::vector<int> idx = nonzero_indices(coeffs);
  if (idx.empty()) {
    r.infinite = true;
    r.method = RadiusMethod::AllZero;
    r.flagged = true;
    r.caveat = "all coefficients vanish; radius taken as inf by convention";
    return r;
  }
  if (idx.size() >= 3) {
    std::vector<Rational> b(coeffs.size());
    for (int i : idx) b[i] = rabs(coeffs[i]) * factorial(i);
    if (geometric_pattern(b, idx).ok) {
      r.infinite = true;
      r.method = RadiusMethod::FactorialDetect;
      r.caveat = "|lambda_i| i! is geometric on the truncation";
      return r;
    }
  }
  if (const Geometric g = geometric_pattern(coeffs, idx); g.ok) {
    r.method = RadiusMethod::GeometricFit;
    r.caveat = "constant coefficient ratio on the truncation";
    if (g.gap == 1) {
      r.exact = 1 / g.ratio;
      r.value = static_cast<double>(*r.exact);
    } else {
      r.value = std::pow(static_cast<double>(g.ratio), -1.0 / g.gap);
    }
    return r;
  }
  // 1 / max |lambda_i|^(1/i) over the upper half of the truncation
  r.method = RadiusMethod::CauchyHadamard;
  r.flagged = true;
  r.caveat = "raw Cauchy-Hadamard estimate from " + std::to_string(coeffs.size()) + " terms";
  double L = 0;
  for (std::size_t i = std::max<std::size_t>(1, coeffs.size() / 2); i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    L = std::max(L, std::pow(static_cast<double>(rabs(coeffs[i])), 1.0 / static_cast<double>(i)));
  }
  if (L == 0) {
    r.infinite = true;
  } else {
    r.value = 1 / L;
  }
  return r;
}

Split split_series(const SeriesSpec& spec) {
  spec.validate();
  Split s;
  for (const Rational& c : spec.used()) {
    s.plus.push_back(c > 0 ? c : Rational(0));
    s.minus.push_back(c < 0 ? Rational(-c) : Rational(0));
  }
  return s;
}

const char* to_string(MeasureKind k) {
  return k == MeasureKind::AllFiniteSigned ? "all-finite-signed" : "user-restricted";
}

MeasureKind parse_measure_kind(std::string_view text) {
  if (text == "all" || text == "all-finite-signed") return MeasureKind::AllFiniteSigned;
  if (text == "restricted" || text == "user-restricted") return MeasureKind::UserRestricted;
  throw Error(ErrorCode::Parse, "unknown measure class '" + std::string(text) + "'");
}

MeasureClass rewrite(const MeasureClass& m, const Normalizing& beta) {
  MeasureClass out = m;
  out.support_radius = min(m.support_radius, beta.support_radius);
  out.tv_scale = m.tv_scale * beta.sup_abs;
  if (out.support_radius.is_finite()) out.kind = MeasureKind::UserRestricted;
  return out;
}

const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::Yes: return "yes";
    case Tristate::No: return "no";
    case Tristate::Undetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(Applicability a) {
  switch (a) {
    case Applicability::YesBoundedKernels: return "yes-bounded-kernels";
    case Applicability::YesIntegrable: return "yes-integrable";
    case Applicability::Conditional: return "conditional";
    case Applicability::No: return "no";
  }
  return "?";
}

namespace {

// sum |lambda_i| t^i in closed form for the built-in series, as a function of
// the placeholder `t`.
std::optional<std::string> abs_closed_form(const std::string& name, const std::string& t) {
  if (name == "cos" || name == "cosh") return "cosh(" + t + ")";
  if (name == "exp") return "exp(" + t + ")";
  if (name == "ones") return "1/(1-" + t + ")";
  if (name.rfind("geometric:", 0) == 0) return "1/(1-" + name.substr(10) + "*" + t + ")";
  return std::nullopt;
}

std::optional<double> abs_closed_value(const std::string& name, double t) {
  if (name == "cos" || name == "cosh") return std::cosh(t);
  if (name == "exp") return std::exp(t);
  if (name == "ones") return 1 / (1 - t);
  if (name.rfind("geometric:", 0) == 0) {
    return 1 / (1 - ExtRational::parse(name.substr(10)).to_double() * t);
  }
  return std::nullopt;
}

double abs_partial_sum(const std::vector<Rational>& c, double t) {
  double acc = 0, p = 1;
  for (const Rational& x : c) {
    acc += std::abs(static_cast<double>(x)) * p;
    p *= t;
  }
  return acc;
}

std::string abs_series_text(const SeriesSpec& spec, const std::vector<Rational>& c, const std::string& t) {
  if (auto f = abs_closed_form(spec.name, t)) return *f;
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += " + ";
    s += ExtRational(rabs(c[i])).str();
    if (i >= 1) s += "*" + t;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

bool less_than_radius(const Rational& x, const RadiusEstimate& r) {
  if (r.infinite) return true;
  if (r.exact) return x < *r.exact;
  return static_cast<double>(x) < r.value;
}

Tristate psi_bounded(const SeriesSpec& spec, const std::vector<Rational>& c) {
  if (spec.rho.is_finite()) return Tristate::Yes;
  if (spec.name == "cos") return Tristate::Yes;
  bool pos = false, neg = false, higher = false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    pos = pos || c[i] > 0;
    neg = neg || c[i] < 0;
    higher = higher || (i >= 1 && c[i] != 0);
  }
  if (!higher) return Tristate::Yes;
  // one-signed entire series grow without bound along t -> +inf
  if (pos != neg) return Tristate::No;
  return Tristate::Undetermined;
}

// Verdict for Psi on the domain, given the radius of a ball containing the
// supports of the integrating measures.
Applicability verdict(const SeriesSpec& spec, Tristate bounded, const ExtRational& support) {
  if (spec.rho.is_finite()) return Applicability::YesBoundedKernels;
  if (bounded == Tristate::No) return Applicability::No;
  if (support.is_finite() && bounded == Tristate::Yes) return Applicability::YesIntegrable;
  return Applicability::Conditional;
}

}  // namespace

DecompositionReport check_applicability(const SeriesSpec& spec, const MeasureClass& measures,
                                        const Normalizing& beta) {
  spec.validate();
  if (measures.kind == MeasureKind::AllFiniteSigned && measures.support_radius.is_finite()) {
    throw ValidationError("measures.support", "all finite signed measures have unbounded supports");
  }
  if (measures.support_radius.is_finite() && measures.support_radius.value() <= 0) {
    throw ValidationError("measures.support", "support radius must be positive");
  }
  if (beta.sup_abs <= 0) throw ValidationError("beta.sup", "sup |beta| must be positive");
  if (measures.tv_scale <= 0) throw ValidationError("measures.tv", "total-variation scale must be positive");

  DecompositionReport rep;
  const std::vector<Rational> c = spec.used();
  const Split s = split_series(spec);
  rep.sigma_plus = s.plus;
  rep.sigma_minus = s.minus;
  rep.radius_plus = radius_lower_bound(s.plus);
  rep.radius_minus = radius_lower_bound(s.minus);
  auto smaller = [](const RadiusEstimate& a, const RadiusEstimate& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  };
  rep.radius = smaller(rep.radius_minus, rep.radius_plus) ? rep.radius_minus : rep.radius_plus;

  if (spec.rho.is_infinite()) {
    if (!rep.radius.infinite) {
      throw Error(ErrorCode::OutOfDomain, "inputs range over R^d but the series radius is " + rep.radius.str());
    }
  } else if (!less_than_radius(spec.rho.value() * spec.rho.value(), rep.radius)) {
    throw Error(ErrorCode::OutOfDomain, "rho^2 = " + ExtRational(spec.rho.value() * spec.rho.value()).str() +
                                            " is not below the radius " + rep.radius.str());
  }

  rep.psi_bounded = psi_bounded(spec, c);

  // two paths: (Psi, beta, M) with beta kept inside the integrand, and
  // (Psi, 1, beta M) after moving beta into the measures
  const ExtRational support_a = min(measures.support_radius, beta.support_radius);
  const Applicability path_a = verdict(spec, rep.psi_bounded, support_a);
  rep.effective_measures = rewrite(measures, beta);
  const Applicability path_b = verdict(spec, rep.psi_bounded, rep.effective_measures.support_radius);
  rep.rewrite_agrees = path_a == path_b;
  if (!rep.rewrite_agrees) {
    throw Error(ErrorCode::Precondition, "normalizing-function rewrite changed the verdict");
  }
  rep.applicability = path_b;
  if (!beta.is_one()) rep.notes.push_back("beta moved into the measures; verdicts agree on both paths");

  const std::string cond = abs_series_text(spec, c, "<.,x>") + " in L1(mu) for all x in X and mu in M";
  switch (rep.applicability) {
    case Applicability::YesBoundedKernels: {
      const double t = spec.rho.to_double() * spec.rho.to_double();
      if (auto v = abs_closed_value(spec.name, t)) {
        rep.diagonal_bound = *v;
        rep.diagonal_expression = *abs_closed_form(spec.name, "rho^2") + " = " + fmt(*v);
      } else {
        rep.diagonal_bound = abs_partial_sum(c, t);
        rep.diagonal_expression = "sum_i |lambda_i| rho^(2i) = " + fmt(*rep.diagonal_bound) + " (truncated)";
        rep.notes.push_back("diagonal bound uses the truncation only");
      }
      rep.required_integrability =
          "int sqrt(k1(x,x) + k2(x,x)) d|mu|(x) < inf holds for every finite mu: k1(x,x) + k2(x,x) <= " +
          rep.diagonal_expression;
      rep.chain = {"E_{M,Psi,1}", "H1+H2", "l_inf(X)"};
      break;
    }
    case Applicability::YesIntegrable: {
      const double r = rep.effective_measures.support_radius.to_double();
      const std::optional<double> v = abs_closed_value(spec.name, r * r);
      rep.diagonal_bound = v ? *v : abs_partial_sum(c, r * r);
      rep.diagonal_expression = "sup over the supports of k1(x,x) + k2(x,x) = " + fmt(*rep.diagonal_bound);
      rep.required_integrability = "int sqrt(k1(x,x) + k2(x,x)) d|mu|(x) < inf holds: supports lie in a ball of radius " +
                                   rep.effective_measures.support_radius.str();
      rep.chain = {"E_{M,Psi,1}", "H1+H2"};
      break;
    }
    case Applicability::Conditional:
      rep.required_integrability = cond;
      if (rep.psi_bounded == Tristate::Undetermined) rep.notes.push_back("Psi must also be bounded on X");
      rep.notes.push_back("the condition is necessary; sufficiency is not claimed");
      rep.chain = {"E_{M,Psi,1}", "H1+H2"};
      break;
    case Applicability::No:
      rep.required_integrability = cond;
      rep.notes.push_back("Psi is unbounded on X");
      break;
  }
  if (rep.radius_plus.flagged || rep.radius_minus.flagged) {
    rep.notes.push_back("radius from truncation: " +
                        (rep.radius_plus.flagged ? rep.radius_plus.caveat : rep.radius_minus.caveat));
  }
  return rep;
}

}  // namespace sandwich::irkbs
