#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sandwich/ext_rational.hpp"

namespace sandwich::irkbs {

/// Truncated power series Psi(x, y) = sum_i lambda_i <x, y>^i on inputs from
/// the open ball of radius rho (rho = inf means all of R^d).
struct SeriesSpec {
  std::vector<Rational> coefficients;
  int truncation = 0;  // 0 means coefficients.size()
  ExtRational rho = ExtRational::infinity();
  /// Built-in name ("cos", "exp", "geometric:r", "ones") when known; enables
  /// closed forms in the report.
  std::string name;

  void validate() const;
  /// The first `truncation` coefficients.
  std::vector<Rational> used() const;
};

/// "cos", "exp", "cosh", "ones", "geometric:1/2" or an explicit comma list
/// "1,-1/2,1/6". Named series are generated with `truncation` terms.
SeriesSpec parse_series(std::string_view text, int truncation = 24);

enum class RadiusMethod { GeometricFit, FactorialDetect, CauchyHadamard, AllZero };
const char* to_string(RadiusMethod m);

struct RadiusEstimate {
  bool infinite = false;
  double value = 0;               // meaningless when infinite
  std::optional<Rational> exact;  // set when the fitted radius is rational
  RadiusMethod method = RadiusMethod::CauchyHadamard;
  bool flagged = false;           // all-zero input or raw truncation estimate
  std::string caveat;

  std::string str() const;
};

/// Radius of convergence of sum c_i t^i estimated from the truncation.
/// Needs at least two coefficients (Precondition otherwise).
RadiusEstimate radius_lower_bound(const std::vector<Rational>& coeffs);

struct Split {
  std::vector<Rational> plus;
  std::vector<Rational> minus;
};

Split split_series(const SeriesSpec& spec);

enum class MeasureKind { AllFiniteSigned, UserRestricted };
const char* to_string(MeasureKind k);
MeasureKind parse_measure_kind(std::string_view text);

/// Measures are described only by what they imply: the radius of a ball
/// containing all supports (inf when unknown) and a total-variation scale.
struct MeasureClass {
  MeasureKind kind = MeasureKind::AllFiniteSigned;
  ExtRational support_radius = ExtRational::infinity();
  Rational tv_scale = 1;
};

/// Bounded normalizing function beta, described by sup |beta| and the radius
/// of a ball outside of which beta vanishes.
struct Normalizing {
  Rational sup_abs = 1;
  ExtRational support_radius = ExtRational::infinity();

  bool is_one() const { return sup_abs == 1 && support_radius.is_infinite(); }
};

/// beta M: supports shrink to the support of beta, total variation scales by
/// sup |beta|.
MeasureClass rewrite(const MeasureClass& m, const Normalizing& beta);

enum class Tristate { Yes, No, Undetermined };
const char* to_string(Tristate t);

enum class Applicability { YesBoundedKernels, YesIntegrable, Conditional, No };
const char* to_string(Applicability a);

struct DecompositionReport {
  std::vector<Rational> sigma_plus;
  std::vector<Rational> sigma_minus;
  RadiusEstimate radius_plus;
  RadiusEstimate radius_minus;
  RadiusEstimate radius;  // the smaller of the two
  Tristate psi_bounded = Tristate::Undetermined;
  Applicability applicability = Applicability::No;
  std::string required_integrability;
  /// Sup of k1(x,x) + k2(x,x) over the domain ball when finite.
  std::optional<double> diagonal_bound;
  std::string diagonal_expression;
  std::vector<std::string> chain;
  MeasureClass effective_measures;  // after the beta rewrite
  bool rewrite_agrees = true;
  std::vector<std::string> notes;
};

/// Throws OutOfDomain when rho^2 is not below the estimated radius.
DecompositionReport check_applicability(const SeriesSpec& spec, const MeasureClass& measures,
                                        const Normalizing& beta = {});

}  // namespace sandwich::irkbs
