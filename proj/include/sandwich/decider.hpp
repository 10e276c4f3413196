#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sandwich/embedding.hpp"

namespace sandwich {

enum class VerdictStatus { Feasible, Infeasible, Borderline, Undetermined };
enum class Construction { LpUnitVectors, LpIndicatorPartition, HoelderTentBumps, SmoothScaledBumps };
enum class ObstructionMode { Type2, Cotype2 };
enum class BoundedTarget { Sup, ContinuousBounded };

const char* to_string(VerdictStatus s);
const char* to_string(Construction c);
const char* to_string(ObstructionMode m);
Construction parse_construction(std::string_view text);
ObstructionMode parse_mode(std::string_view text);

/// Interval with exact endpoints; each end open or closed.
struct Interval {
  ExtRational lo, hi;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(const ExtRational& x) const;
  bool empty() const;
  ExtRational midpoint() const;
  std::string str() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct WitnessChain {
  std::vector<SpaceSpec> links;  // E, H, F
  int hilbert_index = 1;
  std::optional<Interval> u_interval;
};

/// Records that `lhs relation rhs` was required and does not hold.
struct Inequality {
  std::string lhs_expr;
  ExtRational lhs;
  std::string relation;  // the required relation, e.g. ">="
  std::string rhs_expr;
  ExtRational rhs;

  std::string str() const;
};

struct ObstructionRecipe {
  Inequality violated;
  Construction construction = Construction::SmoothScaledBumps;
  ExtRational predicted_exponent;
  ObstructionMode mode = ObstructionMode::Cotype2;
  SpaceSpec source;
  SpaceSpec target;
  /// Construction parameters: p, q (sequence and Lebesgue), alpha, beta, k
  /// (tents), s, t, p1, p2 (smooth bumps), d.
  std::map<std::string, ExtRational> params;
};

struct Verdict {
  VerdictStatus status = VerdictStatus::Undetermined;
  std::optional<WitnessChain> witness;
  std::optional<ObstructionRecipe> obstruction;
  std::string rule;
  std::string note;
};

/// Packing exponent certified for the domain: d for cubes and balls, 0 for
/// finite metric sets, nullopt otherwise.
std::optional<int> packing_exponent(const DomainSpec& domain);

/// Sup / C_b targets are forwarded to decide_bounded_target. Throws
/// Error(Precondition) when the embedding E -> F is known to fail.
Verdict decide(const SpaceSpec& E, const SpaceSpec& F);
Verdict decide_bounded_target(const SpaceSpec& E, BoundedTarget target);

/// Throws Error(Precondition) unless decide(E,F) is Feasible with a u-interval.
Interval admissible_u_interval(const SpaceSpec& E, const SpaceSpec& F);

}  // namespace sandwich
