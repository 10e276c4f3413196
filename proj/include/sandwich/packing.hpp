#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sandwich/space.hpp"

namespace sandwich {

using Point = std::vector<double>;

struct PackingResult {
  Rational delta;
  Rational alpha;  // metric power
  std::vector<Point> centers;
  /// Exact description of the centres. Euclidean domains: coordinate j of
  /// centre i is origin + (index[i][j] + 1/2) * step. Finite metric sets:
  /// index[i] = {point number}.
  std::vector<std::vector<int>> index;
  Rational step = 0;
  Rational origin = 0;
  std::size_t candidates = 0;
  int count = 0;
  bool maximal = false;
};

/// Greedy maximal delta-packing in the metric d^alpha over a cell-centred
/// candidate grid (spacing <= r/4 with r = delta^{1/alpha}) or over the points
/// of a finite metric set. Candidates are visited in lexicographic order.
/// Throws Precondition for unbounded domains, GridTooLarge above
/// `max_candidates`, EmptyInput when no candidate exists.
PackingResult greedy_packing(const DomainSpec& domain, const Rational& delta,
                             const Rational& alpha = 1,
                             std::size_t max_candidates = 4'000'000);

/// Same candidate set as greedy_packing; exhaustive maximum over subsets.
/// Throws Mode when there are more than 24 candidates.
int brute_force_packing(const DomainSpec& domain, const Rational& delta,
                        const Rational& alpha = 1);

/// Exact pairwise check of the d^alpha >= delta constraint.
bool verify_packing(const PackingResult& result, const DomainSpec& domain);

/// Greedy packing in d^alpha at delta versus greedy packing in d at
/// delta^{1/alpha}, on the same candidate grid. True when both runs select
/// the same centres.
bool alpha_transform_check(const DomainSpec& domain, const Rational& delta,
                           const Rational& alpha);

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the fit residuals
  std::vector<int> counts;
};

/// Least-squares slope of log count against log(1/delta). Needs at least three
/// strictly decreasing deltas; identical counts throw DegenerateFit.
ExponentFit exponent_fit(const DomainSpec& domain, const std::vector<Rational>& deltas,
                         const Rational& alpha = 1);

/// Slope of the least-squares line through (x_i, y_i).
ExponentFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

std::string centers_csv(const PackingResult& result);

}  // namespace sandwich
