#include "sandwich/packing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;
using Big = boost::multiprecision::cpp_bin_float_50;

Rational rpow(const Rational& x, unsigned e) {
  Rational out = 1;
  for (unsigned i = 0; i < e; ++i) out *= x;
  return out;
}

unsigned to_unsigned(const BigInt& v) { return static_cast<unsigned>(v); }

void check_args(const Rational& delta, const Rational& alpha) {
  if (delta <= 0) throw Error(ErrorCode::ParameterRange, "delta must be positive");
  if (alpha <= 0 || alpha > 1) throw Error(ErrorCode::ParameterRange, "metric power must lie in (0,1]");
}

// Candidate grid on a cube or ball, or the point list of a finite metric set.
struct Grid {
  const DomainSpec* dom = nullptr;
  bool finite = false;
  int dim = 0;
  int m = 0;  // cells per axis
  Rational step, origin;
  std::size_t finite_size = 0;

  bool inside(const std::vector<int>& k) const {
    if (dom->kind != DomainKind::EuclideanBall) return true;
    long long acc = 0;
    for (int v : k) {
      long long c = 2LL * v + 1 - m;
      acc += c * c;
    }
    return acc < static_cast<long long>(m) * m;
  }

  // Visits candidates in lexicographic order; stops when fn returns false.
  void for_each(const std::function<bool(const std::vector<int>&)>& fn) const {
    if (finite) {
      for (std::size_t i = 0; i < finite_size; ++i)
        if (!fn({static_cast<int>(i)})) return;
      return;
    }
    std::vector<int> k(dim, 0);
    while (true) {
      if (inside(k) && !fn(k)) return;
      int axis = dim - 1;
      while (axis >= 0 && ++k[axis] == m) k[axis--] = 0;
      if (axis < 0) return;
    }
  }

  std::size_t count() const {
    std::size_t n = 0;
    for_each([&](const std::vector<int>&) {
      ++n;
      return true;
    });
    return n;
  }
};

Grid make_grid(const DomainSpec& dom, const Rational& delta, const Rational& alpha,
               std::size_t max_candidates) {
  validate_domain(dom);
  Grid g;
  g.dom = &dom;
  if (dom.kind == DomainKind::FiniteMetricSet) {
    g.finite = true;
    g.finite_size = dom.metric.size();
    if (g.finite_size == 0) throw Error(ErrorCode::EmptyInput, "finite metric set is empty");
    return g;
  }
  if (dom.kind != DomainKind::UnitCube && dom.kind != DomainKind::EuclideanBall) {
    throw Error(ErrorCode::Precondition, "packing needs a bounded or finite domain, got " + dom.str());
  }
  g.dim = dom.dimension;
  const double r = std::pow(static_cast<double>(delta), 1.0 / static_cast<double>(alpha));
  const Rational width = dom.kind == DomainKind::UnitCube ? dom.extent : Rational(2 * dom.extent);
  const double cells = 4.0 * static_cast<double>(width) / r;
  g.m = std::max(1, static_cast<int>(std::ceil(cells - 1e-9)));
  const double total = std::pow(static_cast<double>(g.m), g.dim);
  if (total > static_cast<double>(max_candidates)) {
    throw Error(ErrorCode::GridTooLarge,
                "candidate grid of " + std::to_string(static_cast<long long>(total)) +
                    " points exceeds the limit " + std::to_string(max_candidates));
  }
  g.step = width / g.m;
  g.origin = dom.kind == DomainKind::UnitCube ? Rational(0) : Rational(-dom.extent);
  return g;
}

// Separation predicate "distance^alpha >= delta" with a floating fast path and
// an exact fallback near the threshold.
class Separation {
 public:
  Separation(const Grid& g, const Rational& delta, const Rational& alpha, bool via_root)
      : g_(g), a_(to_unsigned(numerator(alpha))), b_(to_unsigned(denominator(alpha))) {
    delta_pow_ = rpow(delta, b_);  // d^a >= delta^b  (finite)
    if (!g.finite) {
      // (h^2 S)^a >= delta^{2b}  <=>  S^a >= T
      const Rational h2 = g.step * g.step;
      T_ = rpow(delta, 2 * b_) / rpow(h2, a_);
      if (via_root) {
        Big r2 = boost::multiprecision::pow(Big(delta), Big(2) / Big(alpha));
        threshold_ = static_cast<long double>(r2 / Big(h2));
      } else {
        threshold_ = std::pow(static_cast<long double>(T_), 1.0L / a_);
      }
    } else if (via_root) {
      threshold_ = static_cast<long double>(
          boost::multiprecision::pow(Big(delta), Big(1) / Big(alpha)));
    } else {
      threshold_ = std::pow(static_cast<long double>(delta), 1.0L / static_cast<long double>(alpha));
    }
  }

  /// Squared index-distance scale below which points conflict (grids only).
  long double threshold() const { return threshold_; }

  bool far(const std::vector<int>& x, const std::vector<int>& y) const {
    if (g_.finite) {
      const Rational& dist = g_.dom->metric[x[0]][y[0]];
      const long double fd = static_cast<long double>(dist);
      if (fd > threshold_ * (1 + 1e-12L)) return true;
      if (fd < threshold_ * (1 - 1e-12L)) return false;
      return rpow(dist, a_) >= delta_pow_;
    }
    long long S = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const long long dk = x[j] - y[j];
      S += dk * dk;
    }
    const long double s = static_cast<long double>(S);
    if (s > threshold_ * (1 + 1e-12L)) return true;
    if (s < threshold_ * (1 - 1e-12L)) return false;
    BigInt lhs = boost::multiprecision::pow(BigInt(S), a_);
    return lhs * denominator(T_) >= numerator(T_);
  }

 private:
  const Grid& g_;
  unsigned a_, b_;
  Rational delta_pow_, T_;
  long double threshold_ = 0;
};

PackingResult run_greedy(const DomainSpec& domain, const Rational& delta, const Rational& alpha,
                         std::size_t max_candidates, bool via_root) {
  check_args(delta, alpha);
  Grid g = make_grid(domain, delta, alpha, max_candidates);
  Separation sep(g, delta, alpha, via_root);

  PackingResult out;
  out.delta = delta;
  out.alpha = alpha;
  out.step = g.step;
  out.origin = g.origin;

  // Buckets of width >= conflict radius in index units; conflicts only occur
  // between neighbouring buckets.
  const long long width =
      g.finite ? 1 : std::max<long long>(1, static_cast<long long>(std::ceil(std::sqrt(sep.threshold()))) + 1);
  auto key_of = [&](const std::vector<int>& k) {
    std::uint64_t key = 0;
    for (int v : k) key = key * 1000003ULL + static_cast<std::uint64_t>(v / width + 7);
    return key;
  };
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;

  std::size_t seen = 0;
  g.for_each([&](const std::vector<int>& k) {
    ++seen;
    bool ok = true;
    if (g.finite) {
      for (const auto& c : out.index) {
        if (!sep.far(k, c)) {
          ok = false;
          break;
        }
      }
    } else {
      std::vector<int> b(k.size());
      for (std::size_t j = 0; j < k.size(); ++j) b[j] = static_cast<int>(k[j] / width);
      std::vector<int> off(k.size(), -1);
      while (ok) {
        std::vector<int> nb(k.size());
        bool valid = true;
        for (std::size_t j = 0; j < k.size(); ++j) {
          nb[j] = b[j] + off[j];
          valid = valid && nb[j] >= 0;
        }
        if (valid) {
          std::uint64_t key = 0;
          for (int v : nb) key = key * 1000003ULL + static_cast<std::uint64_t>(v + 7);
          auto it = buckets.find(key);
          if (it != buckets.end()) {
            for (int id : it->second) {
              if (!sep.far(k, out.index[id])) {
                ok = false;
                break;
              }
            }
          }
        }
        std::size_t axis = 0;
        while (axis < off.size() && ++off[axis] == 2) off[axis++] = -1;
        if (axis == off.size()) break;
      }
    }
    if (ok) {
      if (!g.finite) buckets[key_of(k)].push_back(static_cast<int>(out.index.size()));
      out.index.push_back(k);
    }
    return true;
  });
  if (seen == 0) throw Error(ErrorCode::EmptyInput, "empty candidate set");
  out.candidates = seen;
  out.count = static_cast<int>(out.index.size());
  out.maximal = true;  // every rejected candidate conflicts with a centre
  for (const auto& k : out.index) {
    Point p;
    if (g.finite) {
      p.push_back(k[0]);
    } else {
      for (int v : k) p.push_back(static_cast<double>(g.origin + (Rational(v) + Rational(1, 2)) * g.step));
    }
    out.centers.push_back(std::move(p));
  }
  return out;
}

}  // namespace

PackingResult greedy_packing(const DomainSpec& domain, const Rational& delta, const Rational& alpha,
                             std::size_t max_candidates) {
  return run_greedy(domain, delta, alpha, max_candidates, false);
}

int brute_force_packing(const DomainSpec& domain, const Rational& delta, const Rational& alpha) {
  check_args(delta, alpha);
  Grid g = make_grid(domain, delta, alpha, 1u << 20);
  std::vector<std::vector<int>> cand;
  g.for_each([&](const std::vector<int>& k) {
    cand.push_back(k);
    return cand.size() <= 24;
  });
  if (cand.size() > 24) {
    throw Error(ErrorCode::Mode, "exact packing is limited to 24 candidates");
  }
  if (cand.empty()) throw Error(ErrorCode::EmptyInput, "empty candidate set");
  Separation sep(g, delta, alpha, false);
  const std::size_t n = cand.size();
  std::vector<std::uint32_t> compat(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && sep.far(cand[i], cand[j])) compat[i] |= 1u << j;

  int best = 0;
  std::function<void(std::uint32_t, int)> grow = [&](std::uint32_t allowed, int size) {
    if (allowed == 0) {
      best = std::max(best, size);
      return;
    }
    if (size + __builtin_popcount(allowed) <= best) return;
    const int v = __builtin_ctz(allowed);
    grow(allowed & compat[v], size + 1);
    grow(allowed & ~(1u << v), size);
  };
  grow(n == 32 ? ~0u : (1u << n) - 1, 0);
  return best;
}

bool verify_packing(const PackingResult& result, const DomainSpec& domain) {
  const Rational& a = result.alpha;
  const unsigned an = to_unsigned(numerator(a)), bd = to_unsigned(denominator(a));
  const auto& idx = result.index;
  if (domain.kind == DomainKind::FiniteMetricSet) {
    const Rational bound = rpow(result.delta, bd);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j)
        if (rpow(domain.metric[idx[i][0]][idx[j][0]], an) < bound) return false;
    return true;
  }
  Grid g;
  g.dom = &domain;
  g.step = result.step;
  Separation sep(g, result.delta, a, false);
  // Centres come out sorted by first index; sweep over the first coordinate.
  std::vector<std::size_t> order(idx.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return idx[x][0] < idx[y][0]; });
  const long double reach = sep.threshold() * (1 + 1e-9L) + 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const long long d0 = idx[order[j]][0] - idx[order[i]][0];
      if (static_cast<long double>(d0 * d0) > reach) break;
      if (!sep.far(idx[order[i]], idx[order[j]])) return false;
    }
  return true;
}

bool alpha_transform_check(const DomainSpec& domain, const Rational& delta, const Rational& alpha) {
  PackingResult power = run_greedy(domain, delta, alpha, 4'000'000, false);
  PackingResult root = run_greedy(domain, delta, alpha, 4'000'000, true);
  return power.count == root.count && power.index == root.index;
}

ExponentFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw Error(ErrorCode::DegenerateFit, "all abscissae coincide");
  ExponentFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

ExponentFit exponent_fit(const DomainSpec& domain, const std::vector<Rational>& deltas,
                         const Rational& alpha) {
  if (deltas.size() < 3) throw Error(ErrorCode::Precondition, "exponent fit needs at least 3 deltas");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] < deltas[i - 1])) {
      throw Error(ErrorCode::Precondition, "deltas must be strictly decreasing");
    }
  }
  std::vector<double> x, y;
  std::vector<int> counts;
  for (const auto& d : deltas) {
    const int c = greedy_packing(domain, d, alpha).count;
    counts.push_back(c);
    x.push_back(-std::log(static_cast<double>(d)));
    y.push_back(std::log(static_cast<double>(c)));
  }
  if (std::all_of(counts.begin(), counts.end(), [&](int c) { return c == counts.front(); })) {
    throw Error(ErrorCode::DegenerateFit, "identical packing counts for every delta");
  }
  ExponentFit f = fit_line(x, y);
  f.counts = std::move(counts);
  return f;
}

std::string centers_csv(const PackingResult& result) {
  std::ostringstream os;
  os.precision(17);
  const std::size_t dim = result.centers.empty() ? 0 : result.centers.front().size();
  os << "i";
  for (std::size_t j = 0; j < dim; ++j) os << ",x" << (j + 1);
  os << "\n";
  for (std::size_t i = 0; i < result.centers.size(); ++i) {
    os << i;
    for (double v : result.centers[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace sandwich
