#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sandwich/ext_rational.hpp"

namespace sandwich {

enum class DomainKind {
  UnitCube,         // (0, side)^d
  EuclideanBall,    // open ball of the given radius around 0
  EuclideanSpace,   // R^d, unbounded
  FiniteMetricSet,  // explicit distance table
  SequenceIndex,    // N, for sequence spaces
};

struct DomainSpec {
  DomainKind kind = DomainKind::UnitCube;
  int dimension = 1;  // 0 for finite metric sets and the sequence index
  Rational extent = 1;  // cube side or ball radius
  std::vector<std::vector<Rational>> metric;

  static DomainSpec cube(int d, Rational side = 1);
  static DomainSpec ball(int d, Rational radius = 1);
  static DomainSpec space(int d);
  static DomainSpec finite(std::vector<std::vector<Rational>> table);
  static DomainSpec sequence();

  bool bounded() const;
  bool euclidean() const;
  /// Connected in its metric (cube, ball, R^d).
  bool connected() const;
  std::string str() const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

using MultiIndex = std::vector<int>;

int order(const MultiIndex& alpha);

/// Finite downward-closed set of multi-indices in N_0^d.
class CoherentSet {
 public:
  CoherentSet() = default;

  /// Stores the set as given; use validate() or closure() to enforce coherence.
  CoherentSet(int dimension, std::set<MultiIndex> elements);

  /// Smallest coherent superset. Throws EmptyInput for an empty generator set.
  static CoherentSet closure(const std::set<MultiIndex>& generators, int dimension);
  /// {alpha : |alpha|_1 <= s}
  static CoherentSet total_order(int dimension, int s);
  /// {alpha : alpha_i <= s for all i}
  static CoherentSet box(int dimension, int s);

  int dimension() const { return dimension_; }
  const std::set<MultiIndex>& elements() const { return elements_; }
  bool is_coherent() const;
  bool contains(const MultiIndex& alpha) const { return elements_.count(alpha) != 0; }
  /// |A|_1 = max |alpha|_1.
  int order() const;
  std::string str() const;

  friend bool operator==(const CoherentSet&, const CoherentSet&) = default;

 private:
  int dimension_ = 0;
  std::set<MultiIndex> elements_;
};

CoherentSet coherent_closure(const std::set<MultiIndex>& generators, int dimension);

namespace family {
struct Holder { ExtRational alpha; friend bool operator==(const Holder&, const Holder&) = default; };
struct Sobolev { ExtRational s, p; friend bool operator==(const Sobolev&, const Sobolev&) = default; };
struct Slobodeckij { ExtRational s, p; friend bool operator==(const Slobodeckij&, const Slobodeckij&) = default; };
struct Besov { ExtRational s, p, q; friend bool operator==(const Besov&, const Besov&) = default; };
struct TriebelLizorkin { ExtRational s, p, q; friend bool operator==(const TriebelLizorkin&, const TriebelLizorkin&) = default; };
struct MixedSobolev { CoherentSet A; ExtRational p; friend bool operator==(const MixedSobolev&, const MixedSobolev&) = default; };
struct SequenceLp { ExtRational p; friend bool operator==(const SequenceLp&, const SequenceLp&) = default; };
struct LebesgueLp { ExtRational p; friend bool operator==(const LebesgueLp&, const LebesgueLp&) = default; };
struct SupSpace { friend bool operator==(const SupSpace&, const SupSpace&) = default; };
struct ContinuousBounded { friend bool operator==(const ContinuousBounded&, const ContinuousBounded&) = default; };
struct Smooth { friend bool operator==(const Smooth&, const Smooth&) = default; };
}  // namespace family

using Family = std::variant<family::Holder, family::Sobolev, family::Slobodeckij,
                            family::Besov, family::TriebelLizorkin,
                            family::MixedSobolev, family::SequenceLp,
                            family::LebesgueLp, family::SupSpace,
                            family::ContinuousBounded, family::Smooth>;

struct SpaceSpec {
  Family family;
  DomainSpec domain;

  template <class F>
  bool is() const { return std::holds_alternative<F>(family); }
  template <class F>
  const F& as() const { return std::get<F>(family); }

  int dim() const { return domain.dimension; }

  /// W^u_2, l_2 or L_2: the families a witness chain may use as its Hilbert link.
  bool is_hilbert_witness() const;

  /// Family text in CLI syntax, e.g. "besov:1/2:inf:inf".
  std::string family_str() const;
  /// Family text plus "@" domain.
  std::string str() const;

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

std::string family_name(const Family& f);

/// Returns the spec unchanged when every family and domain invariant holds;
/// throws ValidationError naming the first violated invariant otherwise.
const SpaceSpec& validate_space(const SpaceSpec& spec);
void validate_domain(const DomainSpec& domain);

/// Parses "holder:1/2", "besov:2:2:2", "lp:inf", "mixed-total:2:3/2", ...
Family parse_family(std::string_view text, int dimension_hint = 0);
/// Parses "cube:3", "cube:2:1/4", "ball:2", "rd:2", "seq", "metric:0,1;1,0".
DomainSpec parse_domain(std::string_view text);
/// Family text with the domain taken from `domain`.
SpaceSpec parse_space(std::string_view family_text, const DomainSpec& domain);

SpaceSpec make_space(Family f, DomainSpec d);

}  // namespace sandwich
