#include <cmath>
#include <sstream>

#include "sandwich/bump_lab.hpp"
#include "sandwich/errors.hpp"

namespace sandwich::lab {

namespace {

const ExtRational& param(const ObstructionRecipe& r, const std::string& key) {
  auto it = r.params.find(key);
  if (it == r.params.end()) {
    throw Error(ErrorCode::Precondition, "recipe has no parameter '" + key + "'");
  }
  return it->second;
}

int param_int(const ObstructionRecipe& r, const std::string& key) {
  return static_cast<int>(param(r, key).to_double());
}

bool translates(const ObstructionRecipe& r) { return r.params.count("translate") != 0; }

int round_inverse(const Rational& delta) {
  return static_cast<int>(std::lround(1.0 / static_cast<double>(delta)));
}

BumpFamily build_family(const ObstructionRecipe& r, const Rational& delta) {
  switch (r.construction) {
    case Construction::LpUnitVectors: return unit_vectors(round_inverse(delta));
    case Construction::LpIndicatorPartition:
      return indicator_partition(param_int(r, "d"), round_inverse(delta));
    case Construction::HoelderTentBumps:
      return tent_family(r.source.domain, delta / 3, param(r, "alpha").value());
    case Construction::SmoothScaledBumps: {
      const int d = param_int(r, "d");
      if (translates(r)) {
        std::vector<Point> centers;
        const int n = round_inverse(delta);
        for (int i = 0; i < n; ++i) {
          Point c(d, 0.0);
          c[0] = 3.0 * i;
          centers.push_back(c);
        }
        BumpFamily f = smooth_family(d, 1.0, std::move(centers));
        f.domain = DomainSpec::space(d);
        return f;
      }
      return smooth_family(d, Rational(delta / 3));
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown construction");
}

}  // namespace

std::string ScanSeries::csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "delta,n,ratio,mode\n";
  for (const auto& p : points) os << p.delta << "," << p.n << "," << p.ratio << "," << to_string(mode) << "\n";
  return os.str();
}

std::string scan_rejects(const ObstructionRecipe& recipe) {
  if (recipe.construction == Construction::LpUnitVectors) return "";
  const int d = param_int(recipe, "d");
  if (d < 1) return "construction needs a positive dimension";
  if (d > 4) return "scans are limited to d <= 4";
  if (recipe.construction == Construction::HoelderTentBumps && !recipe.source.domain.euclidean()) {
    return "tent scans need a Euclidean domain";
  }
  if (recipe.construction == Construction::HoelderTentBumps && !recipe.source.domain.bounded()) {
    return "tent scans need a bounded domain";
  }
  return "";
}

std::pair<NormFunctional, NormFunctional> default_functionals(const ObstructionRecipe& r) {
  switch (r.construction) {
    case Construction::LpUnitVectors:
      return {NormFunctional::sequence(param(r, "p").to_double()),
              NormFunctional::sequence(param(r, "q").to_double())};
    case Construction::LpIndicatorPartition:
      return {NormFunctional::lp(param(r, "p").to_double()), NormFunctional::lp(param(r, "q").to_double())};
    case Construction::HoelderTentBumps: {
      const double b = param(r, "beta").to_double();
      return {NormFunctional::hoelder_norm(param(r, "alpha").to_double()),
              b == 0 ? NormFunctional::sup() : NormFunctional::hoelder_norm(b)};
    }
    case Construction::SmoothScaledBumps: {
      if (translates(r)) return {NormFunctional::sup(2), NormFunctional::sup(0)};
      const double s = param(r, "s").to_double(), t = param(r, "t").to_double();
      const ExtRational& p2 = param(r, "p2");
      NormFunctional E = NormFunctional::interpolated(s, param(r, "p1").to_double());
      NormFunctional F = NormFunctional::interpolated(t, p2.to_double());
      if (t == 0) F = p2.is_infinite() ? NormFunctional::sup() : NormFunctional::lp(p2.to_double());
      return {E, F};
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown construction");
}

ScanSeries scan(const ObstructionRecipe& recipe, const NormFunctional& E, const NormFunctional& F,
                const std::vector<Rational>& deltas, const QuadratureConfig& q) {
  q.validate();
  if (recipe.predicted_exponent <= ExtRational(0)) {
    throw Error(ErrorCode::Precondition, "recipe has no positive predicted exponent");
  }
  if (std::string why = scan_rejects(recipe); !why.empty()) throw Error(ErrorCode::Unsupported, why);
  if (deltas.size() < 2) throw Error(ErrorCode::Precondition, "a scan needs at least two deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] <= 0 || deltas[i] > Rational(1, 2)) {
      throw Error(ErrorCode::ParameterRange, "scan deltas must lie in (0, 1/2]");
    }
    if (i > 0 && deltas[i] >= deltas[i - 1]) {
      throw Error(ErrorCode::Precondition, "scan deltas must be strictly decreasing");
    }
  }
  ScanSeries out;
  out.mode = recipe.mode;
  out.predicted = recipe.predicted_exponent.to_double();
  out.functional_e = E.str();
  out.functional_f = F.str();
  std::vector<double> xs, ys;
  for (const Rational& delta : deltas) {
    const BumpFamily family = build_family(recipe, delta);
    if (family.count < 2) {
      throw Error(ErrorCode::DomainTooSmall, "packing at delta " + delta.str() + " has fewer than two points");
    }
    const RademacherMode mode = family.count <= 16 ? RademacherMode::Exhaustive : RademacherMode::MonteCarlo;
    ScanPoint pt;
    pt.delta = delta;
    pt.n = family.count;
    if (recipe.mode == ObstructionMode::Type2) {
      pt.f_value = rademacher_norm(family, F, mode, q).mean;
      pt.e_value = seq_l2_norm(family, E, q);
    } else {
      pt.f_value = seq_l2_norm(family, F, q);
      pt.e_value = rademacher_norm(family, E, mode, q).mean;
    }
    pt.ratio = pt.f_value / pt.e_value;
    if (!std::isfinite(pt.ratio) || pt.ratio <= 0) {
      throw Error(ErrorCode::Divergence, "non-finite quotient at delta " + delta.str());
    }
    xs.push_back(std::log(1 / static_cast<double>(delta)));
    ys.push_back(std::log(pt.ratio));
    out.points.push_back(pt);
  }
  const ExponentFit fit = fit_line(xs, ys);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.residual = fit.residual;
  return out;
}

ScanSeries scan(const ObstructionRecipe& recipe, const std::vector<Rational>& deltas,
                const QuadratureConfig& q) {
  auto [E, F] = default_functionals(recipe);
  return scan(recipe, E, F, deltas, q);
}

}  // namespace sandwich::lab
