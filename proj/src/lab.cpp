#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "sandwich/bump_lab.hpp"
#include "sandwich/errors.hpp"

namespace sandwich::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nodes and weights on [0,1].
struct Rule1D {
  std::vector<double> x, w;
};

template <unsigned N>
Rule1D gauss_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule1D r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) {
      r.x.push_back(0.5);
      r.w.push_back(w[i] / 2);
      continue;
    }
    r.x.push_back(0.5 - a[i] / 2);
    r.w.push_back(w[i] / 2);
    r.x.push_back(0.5 + a[i] / 2);
    r.w.push_back(w[i] / 2);
  }
  return r;
}

Rule1D cell_rule(Scheme s, int q) {
  if (s == Scheme::MidpointTensor) return Rule1D{{0.5}, {1.0}};
  switch (q) {
    case 2: return gauss_rule<2>();
    case 3: return gauss_rule<3>();
    default: return gauss_rule<4>();
  }
}

struct AxisNodes {
  std::vector<double> x, w;
};

// Cells of roughly equal width between consecutive breakpoints.
AxisNodes axis_nodes(double lo, double hi, int cells, const Rule1D& rule,
                     const std::vector<double>& breaks = {}) {
  std::vector<double> edges{lo};
  for (double b : breaks)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  AxisNodes out;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double len = edges[s + 1] - edges[s];
    const int m = std::max(1, static_cast<int>(std::ceil(cells * len / (hi - lo) - 1e-9)));
    const double h = len / m;
    for (int c = 0; c < m; ++c)
      for (std::size_t a = 0; a < rule.x.size(); ++a) {
        out.x.push_back(edges[s] + (c + rule.x[a]) * h);
        out.w.push_back(rule.w[a] * h);
      }
  }
  return out;
}

template <class Fn>
void for_each_node(const std::vector<AxisNodes>& axes, Fn&& fn) {
  const int d = static_cast<int>(axes.size());
  std::vector<std::size_t> idx(d, 0);
  Point x(d);
  while (true) {
    double w = 1;
    for (int k = 0; k < d; ++k) {
      x[k] = axes[k].x[idx[k]];
      w *= axes[k].w[idx[k]];
    }
    fn(x, w);
    int k = d - 1;
    while (k >= 0 && ++idx[k] == axes[k].x.size()) idx[k--] = 0;
    if (k < 0) return;
  }
}

// Visits tensor nodes of a box split into `cells` per axis.
template <class Fn>
void for_each_node(const Box& box, int cells, const Rule1D& rule, Fn&& fn) {
  std::vector<AxisNodes> axes;
  for (int k = 0; k < box.dim(); ++k) axes.push_back(axis_nodes(box.lo[k], box.hi[k], cells, rule));
  for_each_node(axes, fn);
}

// Doubles the resolution until every entry changes by at most the tolerance.
template <class Eval>
std::vector<double> refine(Eval&& eval, const QuadratureConfig& q) {
  q.validate();
  std::vector<double> prev = eval(q.resolution);
  double change = kInf;
  for (int level = 1; level <= q.max_levels; ++level) {
    std::vector<double> cur = eval(q.resolution << level);
    change = 0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double scale = std::max(std::abs(cur[k]), 1e-300);
      if (cur[k] != prev[k]) change = std::max(change, std::abs(cur[k] - prev[k]) / scale);
    }
    if (change <= q.tolerance) return cur;
    prev = std::move(cur);
  }
  throw AccuracyError(change, prev.empty() ? 0.0 : prev.front());
}

double abs_pow(double v, double p) {
  v = std::abs(v);
  if (p == 1) return v;
  if (p == 2) return v * v;
  return std::pow(v, p);
}

double dist2(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// One bump per thread and dimension keeps the prefactor tables warm.
const SmoothBump& bump_of(int d) {
  thread_local std::map<int, SmoothBump> bumps;
  auto it = bumps.find(d);
  if (it == bumps.end()) it = bumps.emplace(d, SmoothBump(d)).first;
  return it->second;
}

MultiIndex zero_index(int d, const MultiIndex& a) { return a.empty() ? MultiIndex(d, 0) : a; }

Box family_box(const BumpFamily& f) {
  if (f.reference == Reference::Tent && f.domain.kind == DomainKind::UnitCube) return box_of(f.domain);
  // smallest box around the supports
  Box b{Point(f.dim, kInf), Point(f.dim, -kInf)};
  const double r = f.support_radius();
  for (const auto& c : f.centers)
    for (int k = 0; k < f.dim; ++k) {
      b.lo[k] = std::min(b.lo[k], c[k] - r);
      b.hi[k] = std::max(b.hi[k], c[k] + r);
    }
  return b;
}

bool is_axial(const MultiIndex& a) {
  for (std::size_t k = 1; k < a.size(); ++k)
    if (a[k] != 0) return false;
  return true;
}

// Sign changes of a 1-D bump derivative in (-1,1); |d^k f|^p has kinks there.
std::vector<double> derivative_roots(int k) {
  const SmoothBump& f = bump_of(1);
  const MultiIndex a{k};
  std::vector<double> roots;
  const int m = 4000;
  double px = -1, pv = 0;
  for (int i = 1; i < m; ++i) {
    const double x = -1 + 2.0 * i / m;
    const double v = f.derivative(a, {x});
    if (v != 0 && pv != 0 && (v > 0) != (pv > 0)) {
      double lo = px, hi = x;
      const bool lo_pos = pv > 0;
      for (int it = 0; it < 80; ++it) {
        const double mid = (lo + hi) / 2;
        const double mv = f.derivative(a, {mid});
        if (mv == 0) {
          lo = hi = mid;
          break;
        }
        ((mv > 0) == lo_pos ? lo : hi) = mid;
      }
      roots.push_back((lo + hi) / 2);
    }
    if (v != 0) {
      px = x;
      pv = v;
    }
  }
  return roots;
}

}  // namespace

// ---------------------------------------------------------------- families

const char* to_string(Reference r) {
  switch (r) {
    case Reference::Smooth: return "smooth";
    case Reference::Tent: return "hoelder-tent";
    case Reference::UnitVectors: return "unit-vectors";
    case Reference::Indicators: return "indicators";
  }
  return "?";
}

double BumpFamily::support_radius() const {
  switch (reference) {
    case Reference::Smooth: return scale;
    case Reference::Tent: return std::pow(scale, 1 / alpha);
    case Reference::Indicators: return scale * std::sqrt(static_cast<double>(dim)) / 2;
    case Reference::UnitVectors: return 0;
  }
  return 0;
}

double BumpFamily::member(int i, const Point& x) const {
  if (reference == Reference::UnitVectors) {
    throw Error(ErrorCode::Unsupported, "unit vectors have no pointwise values");
  }
  const Point& c = centers.at(i);
  switch (reference) {
    case Reference::Smooth: {
      Point y(dim);
      for (int k = 0; k < dim; ++k) y[k] = (x[k] - c[k]) / scale;
      return bump_of(dim)(y);
    }
    case Reference::Tent: {
      const double v = scale - std::pow(dist2(x, c), alpha / 2);
      return v > 0 ? v : 0;
    }
    case Reference::Indicators: {
      for (int k = 0; k < dim; ++k)
        if (std::abs(x[k] - c[k]) > scale / 2) return 0;
      return 1;
    }
    case Reference::UnitVectors: break;
  }
  throw Error(ErrorCode::Unsupported, "unit vectors have no pointwise values");
}

double BumpFamily::member_derivative(int i, const MultiIndex& a, const Point& x) const {
  const MultiIndex alpha = zero_index(dim, a);
  if (order(alpha) == 0) return member(i, x);
  if (reference != Reference::Smooth) {
    throw Error(ErrorCode::Unsupported, std::string(to_string(reference)) + " members are not differentiable");
  }
  const Point& c = centers.at(i);
  Point y(dim);
  for (int k = 0; k < dim; ++k) y[k] = (x[k] - c[k]) / scale;
  return bump_of(dim).derivative(alpha, y) * std::pow(scale, -order(alpha));
}

double BumpFamily::sum(const std::vector<int>& signs, const Point& x) const {
  double s = 0;
  for (int i = 0; i < count; ++i)
    if (signs[i]) s += signs[i] * member(i, x);
  return s;
}

double BumpFamily::sum_derivative(const std::vector<int>& signs, const MultiIndex& a,
                                  const Point& x) const {
  double s = 0;
  for (int i = 0; i < count; ++i)
    if (signs[i]) s += signs[i] * member_derivative(i, a, x);
  return s;
}

BumpFamily smooth_family(int d, double delta, std::vector<Point> centers) {
  if (!(delta > 0)) throw Error(ErrorCode::ParameterRange, "delta must be positive");
  BumpFamily f;
  f.reference = Reference::Smooth;
  f.dim = d;
  f.scale = delta;
  f.centers = std::move(centers);
  f.count = static_cast<int>(f.centers.size());
  f.domain = DomainSpec::ball(d, 1);
  return f;
}

BumpFamily smooth_family(int d, const Rational& delta) {
  if (delta <= 0 || delta > Rational(1, 2)) {
    throw Error(ErrorCode::ParameterRange, "family delta must lie in (0, 1/2]");
  }
  PackingResult pack = greedy_packing(DomainSpec::ball(d, Rational(1, 2)), 3 * delta);
  BumpFamily f = smooth_family(d, static_cast<double>(delta), pack.centers);
  f.center_index = pack.index;
  f.grid_step = static_cast<double>(pack.step);
  return f;
}

BumpFamily tent_family(int d, double delta, double alpha, std::vector<Point> centers) {
  if (!(delta > 0)) throw Error(ErrorCode::ParameterRange, "delta must be positive");
  if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorCode::ParameterRange, "alpha must lie in (0,1]");
  BumpFamily f;
  f.reference = Reference::Tent;
  f.dim = d;
  f.scale = delta;
  f.alpha = alpha;
  f.centers = std::move(centers);
  f.count = static_cast<int>(f.centers.size());
  f.domain = DomainSpec::cube(d);
  return f;
}

BumpFamily tent_family(const DomainSpec& domain, const Rational& delta, const Rational& alpha) {
  if (delta <= 0 || delta > Rational(1, 2)) {
    throw Error(ErrorCode::ParameterRange, "family delta must lie in (0, 1/2]");
  }
  PackingResult pack = greedy_packing(domain, 3 * delta, alpha);
  BumpFamily f = tent_family(domain.dimension, static_cast<double>(delta),
                             static_cast<double>(alpha), pack.centers);
  f.domain = domain;
  f.center_index = pack.index;
  f.grid_step = static_cast<double>(pack.step);
  return f;
}

BumpFamily unit_vectors(int n) {
  if (n < 1) throw Error(ErrorCode::ParameterRange, "need at least one unit vector");
  BumpFamily f;
  f.reference = Reference::UnitVectors;
  f.dim = 0;
  f.count = n;
  f.domain = DomainSpec::sequence();
  return f;
}

BumpFamily indicator_partition(int d, int m) {
  if (d < 1 || m < 1) throw Error(ErrorCode::ParameterRange, "need d >= 1 and m >= 1");
  BumpFamily f;
  f.reference = Reference::Indicators;
  f.dim = d;
  f.scale = 1.0 / m;
  f.domain = DomainSpec::cube(d);
  std::vector<int> k(d, 0);
  while (true) {
    Point c(d);
    for (int j = 0; j < d; ++j) c[j] = (k[j] + 0.5) / m;
    f.centers.push_back(c);
    int j = d - 1;
    while (j >= 0 && ++k[j] == m) k[j--] = 0;
    if (j < 0) break;
  }
  f.count = static_cast<int>(f.centers.size());
  return f;
}

bool well_separated(const BumpFamily& f) {
  if (f.reference != Reference::Smooth && f.reference != Reference::Tent) return true;
  // exact when centres are packing grid points
  if (!f.center_index.empty()) {
    for (std::size_t i = 0; i < f.center_index.size(); ++i)
      for (std::size_t j = i + 1; j < f.center_index.size(); ++j) {
        long long S = 0;
        for (int k = 0; k < f.dim; ++k) {
          const long long dk = f.center_index[i][k] - f.center_index[j][k];
          S += dk * dk;
        }
        const double dist = std::sqrt(static_cast<double>(S)) * f.grid_step;
        const double lhs = f.reference == Reference::Tent ? std::pow(dist, f.alpha) : dist;
        if (lhs < 3 * f.scale * (1 - 1e-12)) return false;
      }
    return true;
  }
  for (int i = 0; i < f.count; ++i)
    for (int j = i + 1; j < f.count; ++j) {
      const double dist = std::sqrt(dist2(f.centers[i], f.centers[j]));
      const double lhs = f.reference == Reference::Tent ? std::pow(dist, f.alpha) : dist;
      if (lhs < 3 * f.scale * (1 - 1e-12)) return false;
    }
  return true;
}

std::vector<std::vector<int>> all_patterns(int n) {
  if (n < 0 || n > 20) throw Error(ErrorCode::Mode, "exhaustive sign enumeration needs n <= 20");
  std::vector<std::vector<int>> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = (code >> (n - 1 - i)) & 1 ? -1 : 1;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- L_p

std::vector<double> lp_norms(const BumpFamily& family, const MultiIndex& a, double p,
                             const std::vector<std::vector<int>>& patterns,
                             const QuadratureConfig& q) {
  if (!(p >= 1)) throw Error(ErrorCode::ParameterRange, "p must be >= 1");
  const MultiIndex alpha = zero_index(family.dim, a);
  const Rule1D rule = cell_rule(q.scheme, 4);
  const double r = family.support_radius();
  const int n = family.count;
  const int d = family.dim;
  // Smooth members are integrated over their own boxes, with cell edges on
  // the centre and, in 1-D, on the kinks of |d_alpha f|.
  const bool per_member = family.reference == Reference::Smooth;
  std::vector<double> breaks{0.0};
  if (per_member && d == 1 && order(alpha) > 0)
    for (double t : derivative_roots(alpha[0])) breaks.push_back(t);
  std::sort(breaks.begin(), breaks.end());

  auto eval = [&](int cells) {
    std::vector<double> acc(patterns.size(), 0.0);
    std::vector<double> v(n);
    auto visit = [&](int owner, const Point& x, double w) {
      bool any = false;
      for (int i = 0; i < n; ++i) {
        v[i] = 0;
        const double r2 = dist2(x, family.centers[i]);
        if (owner >= 0 && i != owner && r2 < dist2(x, family.centers[owner])) return;
        if (r2 < r * r) {
          v[i] = family.member_derivative(i, alpha, x);
          any = any || v[i] != 0;
        }
      }
      if (!any) return;
      for (std::size_t k = 0; k < patterns.size(); ++k) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += patterns[k][i] * v[i];
        acc[k] = std::isinf(p) ? std::max(acc[k], std::abs(s)) : acc[k] + w * abs_pow(s, p);
      }
    };
    if (!per_member) {
      for_each_node(family_box(family), cells, rule, [&](const Point& x, double w) { visit(-1, x, w); });
      return acc;
    }
    for (int i = 0; i < n; ++i) {
      std::vector<AxisNodes> axes;
      for (int k = 0; k < d; ++k) {
        std::vector<double> b;
        for (double t : (k == 0 ? breaks : std::vector<double>{0.0})) b.push_back(family.centers[i][k] + r * t);
        axes.push_back(axis_nodes(family.centers[i][k] - r, family.centers[i][k] + r, cells, rule, b));
      }
      for_each_node(axes, [&](const Point& x, double w) { visit(i, x, w); });
    }
    return acc;
  };
  std::vector<double> I = std::isinf(p) ? eval(q.resolution << q.max_levels) : refine(eval, q);
  if (!std::isinf(p))
    for (double& v : I) v = std::pow(v, 1 / p);
  return I;
}

double lp_norm(const BumpFamily& family, const MultiIndex& alpha, double p,
               const std::vector<int>& signs, const QuadratureConfig& q) {
  return lp_norms(family, alpha, p, {signs}, q).front();
}

double reference_lp_norm(int d, const MultiIndex& a, double p, const QuadratureConfig& q) {
  const MultiIndex alpha = zero_index(d, a);
  SmoothBump f(d);
  if (std::isinf(p)) {
    // sup over a fine grid of the ball, origin included
    double best = std::abs(f.derivative(alpha, Point(d, 0.0)));
    const int m = d <= 2 ? 401 : (d == 3 ? 81 : 33);
    std::vector<int> k(d, 0);
    Point x(d);
    while (true) {
      for (int j = 0; j < d; ++j) x[j] = -1 + 2.0 * k[j] / (m - 1);
      best = std::max(best, std::abs(f.derivative(alpha, x)));
      int j = d - 1;
      while (j >= 0 && ++k[j] == m) k[j--] = 0;
      if (j < 0) break;
    }
    return best;
  }
  if (d >= 2 && is_axial(alpha)) {
    // d_alpha f depends on (x_1, |x'|) only: integrate over the half disc
    // with the surface measure of the (d-2)-sphere.
    const double sphere = (d - 1) * unit_ball_volume(d - 1);
    const Rule1D rule = cell_rule(q.scheme, 4);
    const Box half{{-1.0, 0.0}, {1.0, 1.0}};
    auto eval = [&](int cells) {
      double acc = 0;
      Point x(d, 0.0);
      for_each_node(half, cells, rule, [&](const Point& y, double w) {
        if (y[0] * y[0] + y[1] * y[1] >= 1) return;
        x[0] = y[0];
        x[1] = y[1];
        acc += w * sphere * std::pow(y[1], d - 2) * abs_pow(f.derivative(alpha, x), p);
      });
      return std::vector<double>{acc};
    };
    return std::pow(refine(eval, q).front(), 1 / p);
  }
  BumpFamily one = smooth_family(d, 1.0, {Point(d, 0.0)});
  return lp_norm(one, alpha, p, {1}, q);
}

// ---------------------------------------------------------------- Slobodeckij

namespace {

// int over the cell pair (Q,Q), side h, of |v.(x-y)|^p / |x-y|^(theta p + d)
// for unit gradient v; e = p(1-theta).
double diagonal_cell(int d, double h, double e, double p, double psi) {
  if (d == 1) return 2 * std::pow(h, e + 1) / (e * (e + 1));
  auto radial = [&](double phi) {
    const double c = std::abs(std::cos(phi)), s = std::abs(std::sin(phi));
    const double R = h / std::max(c, s);
    const double inner = h * h * std::pow(R, e) / e - h * (c + s) * std::pow(R, e + 1) / (e + 1) +
                         c * s * std::pow(R, e + 2) / (e + 2);
    return abs_pow(std::cos(phi - psi), p) * inner;
  };
  std::vector<double> cuts;
  for (int k = 0; k <= 8; ++k) cuts.push_back(k * std::numbers::pi / 4);
  for (double extra : {psi + std::numbers::pi / 2, psi - std::numbers::pi / 2, psi + 1.5 * std::numbers::pi}) {
    double t = std::fmod(extra, 2 * std::numbers::pi);
    if (t < 0) t += 2 * std::numbers::pi;
    cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] < 1e-15) continue;
    acc += boost::math::quadrature::gauss<double, 10>::integrate(radial, cuts[k], cuts[k + 1]);
  }
  return acc;
}

}  // namespace

double slobodeckij_seminorm(const Function& g, double theta, double p, const Box& box,
                            const QuadratureConfig& q) {
  const int d = box.dim();
  if (d < 1 || d > 2) throw Error(ErrorCode::Unsupported, "Slobodeckij quadrature supports d in {1,2}");
  if (!(theta > 0 && theta < 1)) throw Error(ErrorCode::ParameterRange, "theta must lie in (0,1)");
  if (!(p >= 1) || std::isinf(p)) throw Error(ErrorCode::ParameterRange, "p must lie in [1,inf)");
  q.validate();
  const Rule1D rule = cell_rule(q.scheme, 2);
  const int per = static_cast<int>(rule.x.size());
  const double e = p * (1 - theta);
  const double power = -(theta * p + d) / 2;  // applied to |x-y|^2

  auto level = [&](int cells) {
    const int m = cells * per;  // nodes per axis
    std::vector<double> h(d);
    std::vector<std::vector<double>> xs(d), ws(d);
    for (int k = 0; k < d; ++k) {
      h[k] = (box.hi[k] - box.lo[k]) / cells;
      for (int c = 0; c < cells; ++c)
        for (int a = 0; a < per; ++a) {
          xs[k].push_back(box.lo[k] + (c + rule.x[a]) * h[k]);
          ws[k].push_back(rule.w[a] * h[k]);
        }
    }
    const std::size_t total = d == 1 ? m : static_cast<std::size_t>(m) * m;
    std::vector<double> val(total), wt(total);
    std::vector<int> cell(total);
    std::vector<Point> pts(total, Point(d));
    for (std::size_t idx = 0; idx < total; ++idx) {
      const int i0 = d == 1 ? static_cast<int>(idx) : static_cast<int>(idx / m);
      const int i1 = d == 1 ? 0 : static_cast<int>(idx % m);
      pts[idx][0] = xs[0][i0];
      wt[idx] = ws[0][i0];
      cell[idx] = i0 / per;
      if (d == 2) {
        pts[idx][1] = xs[1][i1];
        wt[idx] *= ws[1][i1];
        cell[idx] = cell[idx] * cells + i1 / per;
      }
      val[idx] = g(pts[idx]);
    }
    double acc = 0;
    for (std::size_t a = 0; a < total; ++a) {
      double row = 0;
      for (std::size_t b = a + 1; b < total; ++b) {
        if (cell[a] == cell[b]) continue;
        const double dv = val[a] - val[b];
        if (dv == 0) continue;
        row += wt[b] * abs_pow(dv, p) * std::pow(dist2(pts[a], pts[b]), power);
      }
      acc += 2 * wt[a] * row;
    }
    // same-cell pairs: local linearisation of g
    Point c(d), plus(d), minus(d);
    std::vector<int> ci(d, 0);
    while (true) {
      for (int k = 0; k < d; ++k) c[k] = box.lo[k] + (ci[k] + 0.5) * h[k];
      std::vector<double> grad(d);
      double gn2 = 0;
      for (int k = 0; k < d; ++k) {
        plus = c;
        minus = c;
        plus[k] += h[k] / 2;
        minus[k] -= h[k] / 2;
        grad[k] = (g(plus) - g(minus)) / h[k];
        gn2 += grad[k] * grad[k];
      }
      if (gn2 > 0) {
        const double psi = d == 2 ? std::atan2(grad[1], grad[0]) : 0;
        acc += std::pow(gn2, p / 2) * diagonal_cell(d, h[0], e, p, psi);
      }
      int k = d - 1;
      while (k >= 0 && ++ci[k] == cells) ci[k--] = 0;
      if (k < 0) break;
    }
    return acc;
  };

  std::vector<double> seq{level(q.resolution)};
  for (int lv = 1; lv <= q.max_levels; ++lv) {
    const double cur = level(q.resolution << lv);
    const double prev = seq.back();
    seq.push_back(cur);
    if (!std::isfinite(cur)) throw Error(ErrorCode::Divergence, "Slobodeckij integral is not finite");
    if (cur == prev || std::abs(cur - prev) <= q.tolerance * std::abs(cur)) {
      return std::pow(cur, 1 / p);
    }
    if (seq.size() >= 4) {
      const double d1 = seq[seq.size() - 3] - seq[seq.size() - 4];
      const double d2 = seq[seq.size() - 2] - seq[seq.size() - 3];
      const double d3 = cur - prev;
      if (d1 > 0 && d2 > 0 && d3 > 0 && d2 >= 0.95 * d1 && d3 >= 0.95 * d2) {
        throw Error(ErrorCode::Divergence,
                    "Slobodeckij estimate grows without bound under refinement (last " +
                        std::to_string(cur) + ")");
      }
    }
  }
  const double last = seq.back(), prev = seq[seq.size() - 2];
  throw AccuracyError(std::abs(last - prev) / std::max(std::abs(last), 1e-300), std::pow(last, 1 / p));
}

double slobodeckij_seminorm(const Function& g, double theta, double p, const DomainSpec& cube,
                            const QuadratureConfig& q) {
  return slobodeckij_seminorm(g, theta, p, box_of(cube), q);
}

// ---------------------------------------------------------------- Hoelder

double hoelder_norm(const Function& g, double h, const std::vector<Point>& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::EmptyInput, "Hoelder norm needs at least two points");
  std::vector<double> v(sample.size());
  double best = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    v[i] = g(sample[i]);
    best = std::max(best, std::abs(v[i]));
  }
  if (h == 0) return best;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      const double dv = std::abs(v[i] - v[j]);
      if (dv == 0) continue;
      best = std::max(best, dv / std::pow(dist2(sample[i], sample[j]), h / 2));
    }
  return best;
}

double hoelder_norm(const std::vector<double>& values, double h,
                    const std::vector<std::vector<Rational>>& metric) {
  if (values.size() < 2 || values.size() != metric.size()) {
    throw Error(ErrorCode::EmptyInput, "Hoelder norm needs one value per point and two points");
  }
  double best = 0;
  for (double v : values) best = std::max(best, std::abs(v));
  if (h == 0) return best;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double dv = std::abs(values[i] - values[j]);
      if (dv == 0) continue;
      best = std::max(best, dv / std::pow(static_cast<double>(metric[i][j]), h));
    }
  return best;
}

namespace {

struct Block {
  int member = -1;
  std::vector<Point> pts;
  std::vector<double> vals;
  Point lo, hi;
  double sup = 0;
  std::string signature;  // kept local points, for the translation cache
};

struct PairMax {
  double same = 0;      // |v_a(x) - v_b(y)| / d^h
  double opposite = 0;  // |v_a(x) + v_b(y)| / d^h
};

PairMax pair_max(const Block& a, const Block& b, double h) {
  PairMax m;
  for (std::size_t i = 0; i < a.pts.size(); ++i)
    for (std::size_t j = 0; j < b.pts.size(); ++j) {
      const double r2 = dist2(a.pts[i], b.pts[j]);
      if (r2 == 0) continue;
      const double scale = std::pow(r2, -h / 2);
      m.same = std::max(m.same, std::abs(a.vals[i] - b.vals[j]) * scale);
      m.opposite = std::max(m.opposite, std::abs(a.vals[i] + b.vals[j]) * scale);
    }
  return m;
}

double self_max(const Block& a, double h) {
  double best = 0;
  for (std::size_t i = 0; i < a.pts.size(); ++i)
    for (std::size_t j = i + 1; j < a.pts.size(); ++j) {
      const double dv = std::abs(a.vals[i] - a.vals[j]);
      if (dv == 0) continue;
      best = std::max(best, dv * std::pow(dist2(a.pts[i], a.pts[j]), -h / 2));
    }
  return best;
}

double box_gap(const Block& a, const Block& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    const double g = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
    s += g * g;
  }
  return std::sqrt(s);
}

void finish(Block& b, int d) {
  b.lo.assign(d, kInf);
  b.hi.assign(d, -kInf);
  for (std::size_t i = 0; i < b.pts.size(); ++i) {
    for (int k = 0; k < d; ++k) {
      b.lo[k] = std::min(b.lo[k], b.pts[i][k]);
      b.hi[k] = std::max(b.hi[k], b.pts[i][k]);
    }
    b.sup = std::max(b.sup, std::abs(b.vals[i]));
  }
}

bool inside_domain(const DomainSpec& dom, const Point& x) {
  if (dom.kind == DomainKind::UnitCube) {
    const double side = static_cast<double>(dom.extent);
    for (double v : x)
      if (v <= 0 || v >= side) return false;
    return true;
  }
  if (dom.kind == DomainKind::EuclideanBall) {
    const double r = static_cast<double>(dom.extent);
    double s = 0;
    for (double v : x) s += v * v;
    return s < r * r;
  }
  return true;
}

std::string offset_key(const MultiIndex& a, const MultiIndex& b) {
  std::string k;
  for (std::size_t i = 0; i < a.size(); ++i) k += std::to_string(b[i] - a[i]) + ",";
  return k;
}

}  // namespace

std::vector<double> hoelder_norms(const BumpFamily& family, double h,
                                  const std::vector<Point>& sample,
                                  const std::vector<std::vector<int>>& patterns, int local) {
  if (family.reference != Reference::Smooth && family.reference != Reference::Tent) {
    throw Error(ErrorCode::Unsupported, "Hoelder norms need a pointwise family");
  }
  const int d = family.dim;
  const int n = family.count;
  const double r = family.support_radius();
  std::vector<Block> blocks;
  Block zero;
  bool cached = false;
  if (!sample.empty()) {
    blocks.resize(n);
    for (int i = 0; i < n; ++i) blocks[i].member = i;
    for (const auto& x : sample) {
      int owner = -1;
      double v = 0;
      for (int i = 0; i < n; ++i) {
        if (dist2(x, family.centers[i]) < r * r) {
          v = family.member(i, x);
          if (v != 0) {
            owner = i;
            break;
          }
        }
      }
      Block& b = owner < 0 ? zero : blocks[owner];
      b.pts.push_back(x);
      b.vals.push_back(owner < 0 ? 0.0 : v);
    }
  } else {
    if (local < 2) throw Error(ErrorCode::ParameterRange, "local grids need at least 2 points per axis");
    cached = !family.center_index.empty();
    blocks.resize(n);
    for (int i = 0; i < n; ++i) {
      Block& b = blocks[i];
      b.member = i;
      std::vector<int> k(d, 0);
      Point x(d);
      while (true) {
        for (int j = 0; j < d; ++j) x[j] = family.centers[i][j] + r * (2.0 * k[j] / (local - 1) - 1);
        const bool keep = inside_domain(family.domain, x);
        b.signature.push_back(keep ? '1' : '0');
        if (keep) {
          b.pts.push_back(x);
          b.vals.push_back(family.member(i, x));
        }
        int j = d - 1;
        while (j >= 0 && ++k[j] == local) k[j--] = 0;
        if (j < 0) break;
      }
    }
  }
  for (auto& b : blocks) finish(b, d);
  finish(zero, d);

  // per-block part, independent of the signs
  std::vector<double> own(n, 0.0);
  std::unordered_map<std::string, double> self_cache;
  for (int i = 0; i < n; ++i) {
    const Block& b = blocks[i];
    own[i] = b.sup;
    if (b.pts.empty() || h == 0) continue;
    double s;
    if (cached) {
      auto it = self_cache.find(b.signature);
      if (it == self_cache.end()) it = self_cache.emplace(b.signature, self_max(b, h)).first;
      s = it->second;
    } else {
      s = self_max(b, h);
    }
    own[i] = std::max(own[i], s);
    if (!zero.pts.empty()) own[i] = std::max(own[i], pair_max(b, zero, h).same);
  }
  double base = zero.sup;
  for (double v : own) base = std::max(base, v);
  struct Cross {
    int a, b;
    PairMax m;
  };
  std::vector<Cross> cross;
  if (h > 0) {
    std::unordered_map<std::string, PairMax> cross_cache;
    auto consider = [&](int a, int b) {
      const Block& A = blocks[a];
      const Block& B = blocks[b];
      const double floor = std::max(own[a], own[b]);
      const double gap = box_gap(A, B);
      if (gap > 0 && (A.sup + B.sup) * std::pow(gap, -h) <= floor) return;
      PairMax m;
      if (cached) {
        const std::string key = offset_key(family.center_index[a], family.center_index[b]) + "|" +
                                A.signature + "|" + B.signature;
        auto it = cross_cache.find(key);
        if (it == cross_cache.end()) it = cross_cache.emplace(key, pair_max(A, B, h)).first;
        m = it->second;
      } else {
        m = pair_max(A, B, h);
      }
      if (std::max(m.same, m.opposite) > floor) cross.push_back({a, b, m});
    };
    // Pairs further apart than `reach` cannot beat the smaller floor.
    std::vector<int> live;
    double top = 0, low = kInf, extent = 0;
    for (int i = 0; i < n; ++i) {
      if (blocks[i].pts.empty()) continue;
      live.push_back(i);
      top = std::max(top, blocks[i].sup);
      low = std::min(low, own[i]);
      double e = 0;
      for (int k = 0; k < d; ++k) e += std::pow(blocks[i].hi[k] - blocks[i].lo[k], 2);
      extent = std::max(extent, std::sqrt(e));
    }
    const double reach = low > 0 ? std::pow(2 * top / low, 1 / h) + extent : kInf;
    if (!std::isfinite(reach) || live.size() < 64) {
      for (std::size_t x = 0; x < live.size(); ++x)
        for (std::size_t y = x + 1; y < live.size(); ++y) consider(live[x], live[y]);
    } else {
      std::map<std::vector<long long>, std::vector<int>> cells;
      auto key_of = [&](int i) {
        std::vector<long long> key(d);
        for (int k = 0; k < d; ++k) key[k] = static_cast<long long>(std::floor(blocks[i].lo[k] / reach));
        return key;
      };
      for (int i : live) cells[key_of(i)].push_back(i);
      for (int a : live) {
        const auto base_key = key_of(a);
        std::vector<int> off(d, -1);
        while (true) {
          auto key = base_key;
          for (int k = 0; k < d; ++k) key[k] += off[k];
          if (auto it = cells.find(key); it != cells.end())
            for (int b : it->second)
              if (b > a) consider(a, b);
          int k = d - 1;
          while (k >= 0 && ++off[k] == 2) off[k--] = -1;
          if (k < 0) break;
        }
      }
      std::sort(cross.begin(), cross.end(), [](const Cross& x, const Cross& y) {
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
      });
    }
  }
  std::vector<double> out;
  out.reserve(patterns.size());
  for (const auto& s : patterns) {
    double v = 0;
    if (std::all_of(s.begin(), s.end(), [](int e) { return e != 0; })) {
      v = base;
    } else {
      // members with a zero sign vanish; their own maxima drop out
      v = zero.sup;
      for (int i = 0; i < n; ++i)
        if (s[i]) v = std::max(v, own[i]);
    }
    for (const auto& c : cross) {
      if (s[c.a] == 0 || s[c.b] == 0) continue;
      v = std::max(v, s[c.a] == s[c.b] ? c.m.same : c.m.opposite);
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------- functionals

NormFunctional NormFunctional::lp(double p, MultiIndex alpha) {
  NormFunctional f;
  f.kind = NormKind::LpDerivative;
  f.p = p;
  f.alpha = std::move(alpha);
  return f;
}
NormFunctional NormFunctional::slobodeckij(double theta, double p, MultiIndex alpha) {
  NormFunctional f;
  f.kind = NormKind::Slobodeckij;
  f.theta = theta;
  f.p = p;
  f.alpha = std::move(alpha);
  return f;
}
NormFunctional NormFunctional::slobodeckij_norm(double s, double p) {
  NormFunctional f;
  f.kind = NormKind::SlobodeckijNorm;
  f.s = s;
  f.p = p;
  f.order = static_cast<int>(std::floor(s));
  f.theta = s - f.order;
  return f;
}
NormFunctional NormFunctional::hoelder_norm(double h) {
  NormFunctional f;
  f.kind = NormKind::Hoelder;
  f.hoelder = h;
  return f;
}
NormFunctional NormFunctional::sup(int order) {
  NormFunctional f;
  f.kind = NormKind::Sup;
  f.order = order;
  return f;
}
NormFunctional NormFunctional::mixed(CoherentSet A, double p) {
  NormFunctional f;
  f.kind = NormKind::MixedSobolev;
  f.A = std::move(A);
  f.p = p;
  return f;
}
NormFunctional NormFunctional::sequence(double p) {
  NormFunctional f;
  f.kind = NormKind::SequenceLp;
  f.p = p;
  return f;
}
NormFunctional NormFunctional::interpolated(double s, double p) {
  NormFunctional f;
  f.kind = NormKind::Interpolated;
  f.s = s;
  f.p = p;
  f.order = static_cast<int>(std::floor(s));
  f.theta = s - f.order;
  return f;
}

std::string NormFunctional::str() const {
  std::ostringstream os;
  os.precision(6);
  auto pstr = [&] { return std::isinf(p) ? std::string("inf") : (std::ostringstream() << p).str(); };
  auto astr = [&] {
    std::string s = "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) s += (i ? "," : "") + std::to_string(alpha[i]);
    return s + ")";
  };
  switch (kind) {
    case NormKind::LpDerivative: os << "Lp(p=" << pstr() << ",alpha=" << astr() << ")"; break;
    case NormKind::Slobodeckij:
      os << "slobodeckij(theta=" << theta << ",p=" << pstr() << ",alpha=" << astr() << ")";
      break;
    case NormKind::SlobodeckijNorm: os << "slobodeckij-norm(s=" << s << ",p=" << pstr() << ")"; break;
    case NormKind::Hoelder: os << "hoelder(" << hoelder << ")"; break;
    case NormKind::Sup: os << "sup(order=" << order << ")"; break;
    case NormKind::MixedSobolev: os << "mixed-sobolev(" << (A ? A->str() : "") << ",p=" << pstr() << ")"; break;
    case NormKind::SequenceLp: os << "lp-sequence(p=" << pstr() << ")"; break;
    case NormKind::Interpolated: os << "interpolated(s=" << s << ",p=" << pstr() << ")"; break;
  }
  return os.str();
}

namespace {

std::vector<MultiIndex> indices_up_to(int d, int order_max) {
  std::vector<MultiIndex> out;
  std::vector<int> k(d, 0);
  while (true) {
    if (order(k) <= order_max) out.push_back(k);
    int j = d - 1;
    while (j >= 0 && ++k[j] > order_max) k[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

std::vector<MultiIndex> indices_of_order(int d, int k) {
  std::vector<MultiIndex> out;
  for (auto& a : indices_up_to(d, k))
    if (order(a) == k) out.push_back(a);
  return out;
}

MultiIndex axial(int d, int k) {
  MultiIndex a(d, 0);
  a[0] = k;
  return a;
}

// ||d_alpha member||_p for a smooth bump of radius eta: eta^(d/p-|alpha|) ||d_alpha f||_p.
double scaled_member_lp(int d, const MultiIndex& alpha, double p, double eta, double reference) {
  const double e = std::isinf(p) ? -order(alpha) : d / p - order(alpha);
  return std::pow(eta, e) * reference;
}

// Lp norm of every signed sum of a disjoint family: patterns do not matter.
double disjoint_lp(const BumpFamily& f, const MultiIndex& alpha, double p, const QuadratureConfig& q,
                   int members) {
  if (f.reference == Reference::Smooth) {
    const double ref = reference_lp_norm(f.dim, alpha, p, q);
    const double one = scaled_member_lp(f.dim, alpha, p, f.scale, ref);
    if (std::isinf(p)) return one;
    return std::pow(static_cast<double>(members), 1 / p) * one;
  }
  if (f.reference == Reference::Indicators) {
    if (order(alpha) != 0) throw Error(ErrorCode::Unsupported, "indicators are not differentiable");
    if (std::isinf(p)) return 1;
    const double vol = std::pow(f.scale, f.dim);
    return std::pow(members * vol, 1 / p);
  }
  throw Error(ErrorCode::Unsupported, "no disjoint L_p evaluation for this family");
}

}  // namespace

std::vector<double> family_norms(const BumpFamily& family, const NormFunctional& F,
                                 const std::vector<std::vector<int>>& patterns,
                                 const QuadratureConfig& q) {
  const int d = family.dim;
  const std::size_t P = patterns.size();
  auto nonzero = [](const std::vector<int>& s) {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [](int v) { return v != 0; }));
  };
  // Families of many members use the disjoint-support decomposition.
  const bool small = family.count <= 8 && d <= 2 && patterns.size() <= 64;
  switch (F.kind) {
    case NormKind::SequenceLp: {
      if (family.reference != Reference::UnitVectors) {
        throw Error(ErrorCode::Unsupported, "sequence norms apply to unit vectors");
      }
      std::vector<double> out;
      for (const auto& s : patterns) {
        double acc = 0;
        for (int v : s) acc = std::isinf(F.p) ? std::max(acc, std::abs(1.0 * v)) : acc + abs_pow(v, F.p);
        out.push_back(std::isinf(F.p) ? acc : std::pow(acc, 1 / F.p));
      }
      return out;
    }
    case NormKind::LpDerivative: {
      const MultiIndex alpha = zero_index(d, F.alpha);
      if (family.reference == Reference::Tent || (small && family.reference == Reference::Smooth)) {
        return lp_norms(family, alpha, F.p, patterns, q);
      }
      // one quadrature; the pattern only enters through its support size
      const double one = disjoint_lp(family, alpha, F.p, q, 1);
      std::vector<double> out;
      for (const auto& s : patterns) {
        const int m = nonzero(s);
        out.push_back(m == 0 ? 0.0 : std::isinf(F.p) ? one : std::pow(static_cast<double>(m), 1 / F.p) * one);
      }
      return out;
    }
    case NormKind::MixedSobolev: {
      if (!F.A) throw Error(ErrorCode::Precondition, "mixed functional without a coherent set");
      std::vector<double> out(P, 0.0);
      for (const auto& a : F.A->elements()) {
        auto v = family_norms(family, NormFunctional::lp(F.p, a), patterns, q);
        for (std::size_t k = 0; k < P; ++k) out[k] = std::max(out[k], v[k]);
      }
      return out;
    }
    case NormKind::Interpolated: {
      auto low = family_norms(family, NormFunctional::lp(F.p, axial(d, F.order)), patterns, q);
      if (F.theta == 0) return low;
      auto high = family_norms(family, NormFunctional::lp(F.p, axial(d, F.order + 1)), patterns, q);
      std::vector<double> out(P);
      for (std::size_t k = 0; k < P; ++k) out[k] = std::pow(low[k], 1 - F.theta) * std::pow(high[k], F.theta);
      return out;
    }
    case NormKind::Slobodeckij: {
      const MultiIndex alpha = zero_index(d, F.alpha);
      const Box box = family_box(family);
      std::vector<double> out;
      for (const auto& s : patterns) {
        out.push_back(slobodeckij_seminorm(
            [&](const Point& x) { return family.sum_derivative(s, alpha, x); }, F.theta, F.p, box, q));
      }
      return out;
    }
    case NormKind::SlobodeckijNorm: {
      std::vector<double> acc(P, 0.0);
      for (const auto& a : indices_up_to(d, F.order)) {
        auto v = family_norms(family, NormFunctional::lp(F.p, a), patterns, q);
        for (std::size_t k = 0; k < P; ++k) acc[k] += abs_pow(v[k], F.p);
      }
      if (F.theta > 0) {
        for (const auto& a : indices_of_order(d, F.order)) {
          auto v = family_norms(family, NormFunctional::slobodeckij(F.theta, F.p, a), patterns, q);
          for (std::size_t k = 0; k < P; ++k) acc[k] += abs_pow(v[k], F.p);
        }
      }
      for (double& v : acc) v = std::pow(v, 1 / F.p);
      return acc;
    }
    case NormKind::Hoelder: {
      if (family.reference == Reference::Indicators || family.reference == Reference::UnitVectors) {
        throw Error(ErrorCode::Unsupported, "Hoelder norms need a pointwise family");
      }
      return hoelder_norms(family, F.hoelder, {}, patterns);
    }
    case NormKind::Sup: {
      if (family.reference == Reference::UnitVectors || family.reference == Reference::Indicators) {
        std::vector<double> out;
        for (const auto& s : patterns) out.push_back(nonzero(s) ? 1.0 : 0.0);
        return out;
      }
      if (family.reference == Reference::Tent) {
        if (F.order != 0) throw Error(ErrorCode::Unsupported, "tents are not differentiable");
        return hoelder_norms(family, 0, {}, patterns);
      }
      // disjoint supports: the sup of a signed sum is the largest member sup
      double best = 0;
      for (const auto& a : indices_up_to(d, F.order)) {
        const double ref = reference_lp_norm(d, a, kInf, q);
        best = std::max(best, scaled_member_lp(d, a, kInf, family.scale, ref));
      }
      std::vector<double> out;
      for (const auto& s : patterns) out.push_back(nonzero(s) ? best : 0.0);
      return out;
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown functional");
}

double member_norm(const BumpFamily& family, int i, const NormFunctional& F, const QuadratureConfig& q) {
  if (i < 0 || i >= family.count) throw Error(ErrorCode::ParameterRange, "member index out of range");
  std::vector<int> s(family.count, 0);
  s[i] = 1;
  return family_norms(family, F, {s}, q).front();
}

double seq_l2_norm(const BumpFamily& family, const NormFunctional& F, const QuadratureConfig& q) {
  // identical translates share one value unless a tent is clipped by the domain
  const bool translates = family.reference == Reference::UnitVectors ||
                          family.reference == Reference::Indicators ||
                          family.reference == Reference::Smooth;
  if (translates && family.count > 0) {
    const double one = member_norm(family, 0, F, q);
    return std::sqrt(static_cast<double>(family.count)) * one;
  }
  // tents near the boundary are clipped: evaluate each member on its own
  double acc = 0;
  for (int i = 0; i < family.count; ++i) {
    BumpFamily one;
    one.reference = family.reference;
    one.dim = family.dim;
    one.scale = family.scale;
    one.alpha = family.alpha;
    one.domain = family.domain;
    one.centers = {family.centers[i]};
    one.count = 1;
    const double v = family_norms(one, F, {{1}}, q).front();
    acc += v * v;
  }
  return std::sqrt(acc);
}

RademacherEstimate rademacher(
    int n, const std::function<std::vector<double>(const std::vector<std::vector<int>>&)>& norms,
    RademacherMode mode, const QuadratureConfig& q) {
  RademacherEstimate est;
  if (mode == RademacherMode::Exhaustive) {
    if (n > 20) throw Error(ErrorCode::Mode, "exhaustive Rademacher averages need n <= 20");
    const auto values = norms(all_patterns(n));
    double acc = 0;
    for (double v : values) acc += v;
    est.mean = acc / values.size();
    est.samples = values.size();
    est.exhaustive = true;
    return est;
  }
  std::mt19937_64 rng(q.seed);
  std::bernoulli_distribution coin(0.5);
  // batches keep the pattern buffer near 4M entries
  const std::size_t batch = std::max<std::size_t>(1, std::size_t{1 << 22} / std::max(n, 1));
  double mean = 0, m2 = 0;
  std::size_t seen = 0;
  while (seen < static_cast<std::size_t>(q.mc_samples)) {
    const std::size_t take = std::min(batch, q.mc_samples - seen);
    std::vector<std::vector<int>> patterns(take, std::vector<int>(n));
    for (auto& s : patterns)
      for (int& v : s) v = coin(rng) ? 1 : -1;
    for (double v : norms(patterns)) {
      ++seen;
      const double delta = v - mean;
      mean += delta / seen;
      m2 += delta * (v - mean);
    }
  }
  est.mean = mean;
  est.samples = seen;
  est.exhaustive = false;
  est.stderr_ = seen > 1 ? std::sqrt(m2 / (seen - 1) / seen) : 0;
  return est;
}

RademacherEstimate rademacher_norm(const BumpFamily& family, const NormFunctional& F,
                                   RademacherMode mode, const QuadratureConfig& q) {
  return rademacher(
      family.count, [&](const auto& patterns) { return family_norms(family, F, patterns, q); }, mode, q);
}

// ---------------------------------------------------------------- radial

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1);
}

double radial_integral(const std::function<double(double)>& f, double a, double b, int d) {
  if (d < 1) throw Error(ErrorCode::ParameterRange, "dimension must be positive");
  if (!(a >= 0 && a < b)) throw Error(ErrorCode::ParameterRange, "need 0 <= a < b");
  auto g = [&](double r) { return f(r) * std::pow(r, d - 1); };
  const double factor = d * unit_ball_volume(d);
  double value = 0, error = 0, l1 = 0;
  try {
    if (std::isinf(b)) {
      // tail test: a non-integrable tail keeps dyadic shells from shrinking
      auto shell = [&](double R) {
        return boost::math::quadrature::tanh_sinh<double>().integrate(g, R, 2 * R);
      };
      const double R = std::max(1.0, 2 * a) * 1024;
      const double s1 = std::abs(shell(R)), s2 = std::abs(shell(2 * R)), s3 = std::abs(shell(4 * R));
      if (!std::isfinite(s1 + s2 + s3) || (s1 > 0 && s2 >= 0.99 * s1 && s3 >= 0.99 * s2)) {
        throw Error(ErrorCode::Divergence, "radial integral has a non-integrable tail");
      }
      boost::math::quadrature::exp_sinh<double> integrator;
      value = integrator.integrate(g, a, b, 1e-12, &error, &l1);
    } else {
      // nodes stay 1e-40 (relative) away from the ends: r^(d-1) f(r) may be 0 * inf there
      boost::math::quadrature::tanh_sinh<double> integrator(15, 1e-40);
      value = integrator.integrate(g, a, b, 1e-12, &error, &l1);
    }
  } catch (const std::domain_error&) {
    throw Error(ErrorCode::Divergence, "radial integrand is not integrable");
  } catch (const boost::math::evaluation_error&) {
    throw Error(ErrorCode::Divergence, "radial integrand is not integrable");
  }
  if (!std::isfinite(value) || error > 1e-6 * std::max(1.0, l1)) {
    throw Error(ErrorCode::Divergence, "radial integral does not converge");
  }
  return factor * value;
}

}  // namespace sandwich::lab
