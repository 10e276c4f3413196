#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sandwich/decider.hpp"
#include "sandwich/packing.hpp"

namespace sandwich::lab {

using Function = std::function<double(const Point&)>;

enum class Scheme { MidpointTensor, AdaptiveRefinement };

const char* to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

struct QuadratureConfig {
  int resolution = 32;  // cells per axis at the first level
  Scheme scheme = Scheme::AdaptiveRefinement;
  double tolerance = 1e-6;  // relative change between refinement levels
  int max_levels = 5;       // number of doublings after the first level
  int mc_samples = 2000;
  std::uint64_t seed = 1;

  /// Throws ParameterRange unless resolution >= 16, tolerance in (0, 1e-3].
  void validate() const;
};

/// Named profiles "fast", "default", "accurate".
QuadratureConfig quadrature_profile(std::string_view name);
/// Profile from SANDWICH_QUADRATURE, "default" when unset.
QuadratureConfig quadrature_from_env();

struct Box {
  Point lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

/// Cube (0,side)^d as a box; Precondition for other domains.
Box box_of(const DomainSpec& domain);

// ---------------------------------------------------------------- bump

/// Polynomial in x_1..x_d with exact coefficients.
using Poly = std::map<MultiIndex, Rational>;

/// f(x) = exp(1 - 1/(1-|x|^2)) on the open unit ball, 0 outside; f(0) = 1.
/// Derivatives: d_alpha f = P_alpha(x) / (1-|x|^2)^(2|alpha|) * f.
class SmoothBump {
 public:
  explicit SmoothBump(int dimension);

  int dimension() const { return d_; }
  double operator()(const Point& x) const;
  double derivative(const MultiIndex& alpha, const Point& x) const;
  /// P_alpha; the denominator exponent is 2|alpha|.
  const Poly& prefactor(const MultiIndex& alpha) const;
  /// exp(1): the factor relative to exp(-1/(1-|x|^2)).
  static double normalization();

 private:
  int d_;
  mutable std::map<MultiIndex, Poly> cache_;
};

double eval_bump(const Point& x);
double eval_bump_derivative(const MultiIndex& alpha, const Point& x);

/// Richardson-extrapolated central difference of d_alpha f (|alpha| <= 2).
double finite_difference(const MultiIndex& alpha, const Point& x, double h = 1e-3);

// ---------------------------------------------------------------- families

enum class Reference { Smooth, Tent, UnitVectors, Indicators };

const char* to_string(Reference r);

struct BumpFamily {
  Reference reference = Reference::Smooth;
  int dim = 1;
  double scale = 0.5;  // member radius (smooth), height (tent), cell side (indicators)
  double alpha = 1;    // metric power (tent)
  std::vector<Point> centers;
  std::vector<MultiIndex> center_index;  // packing grid index, when available
  double grid_step = 0;
  int count = 0;  // members (all references)
  DomainSpec domain;

  int size() const { return count; }
  /// Value of member i; indicators and unit vectors have no pointwise form.
  double member(int i, const Point& x) const;
  double member_derivative(int i, const MultiIndex& a, const Point& x) const;
  double sum(const std::vector<int>& signs, const Point& x) const;
  double sum_derivative(const std::vector<int>& signs, const MultiIndex& a, const Point& x) const;
  /// Support radius of a member in the Euclidean metric.
  double support_radius() const;
};

/// n smooth bumps of radius delta centred at the given points.
BumpFamily smooth_family(int d, double delta, std::vector<Point> centers);
/// Smooth bumps of radius delta at a greedy 3*delta packing of the ball of
/// radius 1/2.
BumpFamily smooth_family(int d, const Rational& delta);
/// Tents (delta - |x - t_i|^alpha)_+ at a greedy 3*delta packing of the
/// domain in the metric |.|^alpha.
BumpFamily tent_family(const DomainSpec& domain, const Rational& delta, const Rational& alpha);
BumpFamily tent_family(int d, double delta, double alpha, std::vector<Point> centers);
BumpFamily unit_vectors(int n);
/// Indicators of the m^d congruent cells of (0,1)^d.
BumpFamily indicator_partition(int d, int m);

/// Exact pairwise separation check: |t_i - t_j|^alpha >= 3 * scale (tents),
/// |c_i - c_j| >= 3 * scale (smooth).
bool well_separated(const BumpFamily& family);

// ---------------------------------------------------------------- norms

enum class NormKind {
  LpDerivative,    // ||d_alpha g||_p
  Slobodeckij,     // |d_alpha g|_{theta,p}
  SlobodeckijNorm, // (sum_{|a|<=k} ||d_a g||_p^p + sum_{|a|=k} |d_a g|^p_{theta,p})^{1/p}, s = k + theta
  Hoelder,         // max(sup |g|, sup |g(x)-g(y)| / d(x,y)^h)
  Sup,             // max_{|a| <= order} sup |d_a g|
  MixedSobolev,    // max_{a in A} ||d_a g||_p
  SequenceLp,      // l_p norm of the coefficient vector
  Interpolated,    // ||d^k g||_p^(1-theta) ||d^(k+1) g||_p^theta along the first axis
};

struct NormFunctional {
  NormKind kind = NormKind::LpDerivative;
  MultiIndex alpha;  // empty means the zero multi-index
  double p = 2;
  double theta = 0;
  double s = 0;
  double hoelder = 1;
  int order = 0;
  std::optional<CoherentSet> A;

  static NormFunctional lp(double p, MultiIndex alpha = {});
  static NormFunctional slobodeckij(double theta, double p, MultiIndex alpha = {});
  static NormFunctional slobodeckij_norm(double s, double p);
  static NormFunctional hoelder_norm(double h);
  static NormFunctional sup(int order = 0);
  static NormFunctional mixed(CoherentSet A, double p);
  static NormFunctional sequence(double p);
  static NormFunctional interpolated(double s, double p);

  std::string str() const;
};

/// ||d_alpha f||_p over the unit ball (p = inf gives the sup).
double reference_lp_norm(int d, const MultiIndex& alpha, double p, const QuadratureConfig& q);

/// ||d_alpha (sum_i signs_i f_i)||_p for each sign pattern, by tensor
/// quadrature of the whole sum over the family's box. Throws AccuracyError
/// when the tolerance is not reached.
std::vector<double> lp_norms(const BumpFamily& family, const MultiIndex& alpha, double p,
                             const std::vector<std::vector<int>>& patterns,
                             const QuadratureConfig& q);
double lp_norm(const BumpFamily& family, const MultiIndex& alpha, double p,
               const std::vector<int>& signs, const QuadratureConfig& q);

/// (int int |g(x)-g(y)|^p / |x-y|^(theta p + d))^(1/p) over box x box,
/// d in {1,2}. Diverging estimates throw Error(Divergence).
double slobodeckij_seminorm(const Function& g, double theta, double p, const Box& box,
                            const QuadratureConfig& q);
double slobodeckij_seminorm(const Function& g, double theta, double p, const DomainSpec& cube,
                            const QuadratureConfig& q);

/// Hoelder norm on a point sample: max(sup |g|, max |g(x)-g(y)|/|x-y|^h).
double hoelder_norm(const Function& g, double h, const std::vector<Point>& sample);
/// Same on a finite metric set given by its table; g indexed by point number.
double hoelder_norm(const std::vector<double>& values, double h,
                    const std::vector<std::vector<Rational>>& metric);

/// Hoelder norms of signed sums of a disjointly supported family on a
/// sample, for each pattern. An empty sample uses local grids around the
/// members (points per axis `local`).
std::vector<double> hoelder_norms(const BumpFamily& family, double h,
                                  const std::vector<Point>& sample,
                                  const std::vector<std::vector<int>>& patterns, int local = 5);

/// Norm of each signed sum under the functional.
std::vector<double> family_norms(const BumpFamily& family, const NormFunctional& F,
                                 const std::vector<std::vector<int>>& patterns,
                                 const QuadratureConfig& q);
double member_norm(const BumpFamily& family, int i, const NormFunctional& F,
                   const QuadratureConfig& q);

enum class RademacherMode { Exhaustive, MonteCarlo };

struct RademacherEstimate {
  double mean = 0;
  double stderr_ = 0;  // zero in exhaustive mode
  std::size_t samples = 0;
  bool exhaustive = true;
};

/// Average of norm(signs) over all 2^n sign vectors (n <= 20, else Mode
/// error) or over seeded Monte Carlo draws.
RademacherEstimate rademacher(int n, const std::function<std::vector<double>(
                                         const std::vector<std::vector<int>>&)>& norms,
                              RademacherMode mode, const QuadratureConfig& q);
RademacherEstimate rademacher_norm(const BumpFamily& family, const NormFunctional& F,
                                   RademacherMode mode, const QuadratureConfig& q);

/// (sum_i ||f_i||_F^2)^(1/2).
double seq_l2_norm(const BumpFamily& family, const NormFunctional& F, const QuadratureConfig& q);

/// All 2^n sign vectors in lexicographic order, +1 first. n <= 20.
std::vector<std::vector<int>> all_patterns(int n);

/// d V_d int_a^b f(r) r^(d-1) dr; b may be +inf. Diverging tails throw
/// Error(Divergence).
double radial_integral(const std::function<double(double)>& f, double a, double b, int d);
double unit_ball_volume(int d);

// ---------------------------------------------------------------- scan

struct ScanPoint {
  Rational delta;
  int n = 0;
  double ratio = 0;
  double e_value = 0;  // E-side quantity (Rademacher or sequence norm)
  double f_value = 0;  // F-side quantity
};

struct ScanSeries {
  std::vector<ScanPoint> points;
  ObstructionMode mode = ObstructionMode::Cotype2;
  double slope = 0;
  double intercept = 0;
  double residual = 0;
  double predicted = 0;
  std::string functional_e, functional_f;

  /// Columns delta,n,ratio,mode.
  std::string csv() const;
};

/// Empty when the scan can run the recipe, otherwise the reason.
std::string scan_rejects(const ObstructionRecipe& recipe);

/// Default functionals for the recipe's source and target.
std::pair<NormFunctional, NormFunctional> default_functionals(const ObstructionRecipe& recipe);

/// For each delta builds the packing and family, evaluates the type or
/// cotype quotient and fits log(ratio) against log(1/delta).
ScanSeries scan(const ObstructionRecipe& recipe, const NormFunctional& E, const NormFunctional& F,
                const std::vector<Rational>& deltas, const QuadratureConfig& q);
ScanSeries scan(const ObstructionRecipe& recipe, const std::vector<Rational>& deltas,
                const QuadratureConfig& q);

}  // namespace sandwich::lab
