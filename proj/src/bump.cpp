#include <cmath>
#include <cstdlib>

#include "sandwich/bump_lab.hpp"
#include "sandwich/errors.hpp"

namespace sandwich::lab {

namespace {

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      MultiIndex e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

void add_to(Poly& a, const Poly& b, const Rational& scale = 1) {
  for (const auto& [e, c] : b) a[e] += scale * c;
  std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
}

Poly partial(const Poly& a, int j) {
  Poly out;
  for (const auto& [e, c] : a) {
    if (e[j] == 0) continue;
    MultiIndex f = e;
    --f[j];
    out[f] += c * e[j];
  }
  return out;
}

Poly monomial(int d, int j, const Rational& c) {
  MultiIndex e(d, 0);
  if (j >= 0) e[j] = 1;
  return Poly{{e, c}};
}

// 1 - |x|^2
Poly one_minus_norm2(int d) {
  Poly u{{MultiIndex(d, 0), Rational(1)}};
  for (int j = 0; j < d; ++j) {
    MultiIndex e(d, 0);
    e[j] = 2;
    u[e] = -1;
  }
  return u;
}

double eval_poly(const Poly& p, const Point& x) {
  double acc = 0;
  for (const auto& [e, c] : p) {
    double term = static_cast<double>(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    acc += term;
  }
  return acc;
}

double norm2(const Point& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

const char* to_string(Scheme s) {
  return s == Scheme::MidpointTensor ? "midpoint-tensor" : "adaptive-refinement";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "midpoint-tensor" || text == "midpoint") return Scheme::MidpointTensor;
  if (text == "adaptive-refinement" || text == "adaptive") return Scheme::AdaptiveRefinement;
  throw Error(ErrorCode::Parse, "unknown quadrature scheme '" + std::string(text) + "'");
}

void QuadratureConfig::validate() const {
  if (resolution < 16) throw Error(ErrorCode::ParameterRange, "quadrature resolution must be >= 16");
  if (!(tolerance > 0 && tolerance <= 1e-3)) {
    throw Error(ErrorCode::ParameterRange, "quadrature tolerance must lie in (0, 1e-3]");
  }
  if (max_levels < 0 || max_levels > 12) throw Error(ErrorCode::ParameterRange, "max_levels out of range");
  if (mc_samples < 1) throw Error(ErrorCode::ParameterRange, "mc_samples must be positive");
}

QuadratureConfig quadrature_profile(std::string_view name) {
  QuadratureConfig q;
  if (name == "fast") {
    q.resolution = 16;
    q.tolerance = 1e-3;
    q.max_levels = 4;
    q.mc_samples = 500;
  } else if (name == "accurate") {
    q.resolution = 64;
    q.tolerance = 1e-8;
    q.max_levels = 6;
    q.mc_samples = 20000;
  } else if (name != "default") {
    throw Error(ErrorCode::Parse, "unknown quadrature profile '" + std::string(name) + "'");
  }
  return q;
}

QuadratureConfig quadrature_from_env() {
  const char* v = std::getenv("SANDWICH_QUADRATURE");
  return quadrature_profile(v && *v ? v : "default");
}

Box box_of(const DomainSpec& domain) {
  if (domain.kind != DomainKind::UnitCube) {
    throw Error(ErrorCode::Precondition, "expected a cube domain, got " + domain.str());
  }
  const double side = static_cast<double>(domain.extent);
  return Box{Point(domain.dimension, 0.0), Point(domain.dimension, side)};
}

SmoothBump::SmoothBump(int dimension) : d_(dimension) {
  if (d_ < 1) throw Error(ErrorCode::ParameterRange, "bump dimension must be positive");
  cache_[MultiIndex(d_, 0)] = Poly{{MultiIndex(d_, 0), Rational(1)}};
}

double SmoothBump::normalization() { return std::exp(1.0); }

const Poly& SmoothBump::prefactor(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != d_) {
    throw Error(ErrorCode::ParameterRange, "multi-index length differs from the dimension");
  }
  if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
  int j = 0;
  while (alpha[j] == 0) ++j;
  MultiIndex lower = alpha;
  --lower[j];
  const Poly P = prefactor(lower);
  const int m = 2 * order(lower);
  const Poly u = one_minus_norm2(d_);
  const Poly xj = monomial(d_, j, 1);
  // d_j (P / u^m f) = (d_j P u^2 + 2 m x_j P u - 2 x_j P) / u^(m+2) f
  Poly next = multiply(partial(P, j), multiply(u, u));
  add_to(next, multiply(multiply(xj, P), u), Rational(2 * m));
  add_to(next, multiply(xj, P), Rational(-2));
  return cache_[alpha] = std::move(next);
}

double SmoothBump::operator()(const Point& x) const {
  const double u = 1 - norm2(x);
  if (u <= 0) return 0;
  return std::exp(1 - 1 / u);
}

double SmoothBump::derivative(const MultiIndex& alpha, const Point& x) const {
  const double u = 1 - norm2(x);
  if (u <= 0) return 0;
  const Poly& P = prefactor(alpha);
  const int m = 2 * order(alpha);
  // the exponential factor dominates u^-m near the boundary
  return eval_poly(P, x) * std::exp(1 - 1 / u - m * std::log(u));
}

double eval_bump(const Point& x) { return SmoothBump(static_cast<int>(x.size()))(x); }

double eval_bump_derivative(const MultiIndex& alpha, const Point& x) {
  return SmoothBump(static_cast<int>(x.size())).derivative(alpha, x);
}

namespace {
double central(const SmoothBump& f, MultiIndex alpha, Point x, double h) {
  std::size_t j = 0;
  while (j < alpha.size() && alpha[j] == 0) ++j;
  if (j == alpha.size()) return f(x);
  --alpha[j];
  Point a = x, b = x;
  a[j] += h;
  b[j] -= h;
  return (central(f, alpha, a, h) - central(f, alpha, b, h)) / (2 * h);
}
}  // namespace

double finite_difference(const MultiIndex& alpha, const Point& x, double h) {
  SmoothBump f(static_cast<int>(x.size()));
  const double coarse = central(f, alpha, x, h);
  const double fine = central(f, alpha, x, h / 2);
  return (4 * fine - coarse) / 3;
}

}  // namespace sandwich::lab
