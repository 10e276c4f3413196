#include "sandwich/decider.hpp"

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

const ExtRational kZero(0);
const ExtRational kTwo(2);
const ExtRational kHalf(1, 2);

Verdict undetermined(std::string rule, std::string note) {
  Verdict v;
  v.rule = std::move(rule);
  v.note = std::move(note);
  return v;
}

Verdict borderline(std::string rule, std::string note) {
  Verdict v;
  v.status = VerdictStatus::Borderline;
  v.rule = std::move(rule);
  v.note = std::move(note);
  return v;
}

Verdict feasible(std::string rule, std::vector<SpaceSpec> links, std::optional<Interval> u) {
  Verdict v;
  v.status = VerdictStatus::Feasible;
  v.rule = std::move(rule);
  v.witness = WitnessChain{std::move(links), 1, std::move(u)};
  return v;
}

Verdict infeasible(std::string rule, ObstructionRecipe recipe) {
  Verdict v;
  v.status = VerdictStatus::Infeasible;
  v.rule = std::move(rule);
  v.obstruction = std::move(recipe);
  return v;
}

SpaceSpec sobolev2(const ExtRational& u, const DomainSpec& dom) {
  return make_space(family::Sobolev{u, kTwo}, dom);
}

struct Scale {
  bool triebel;
  ExtRational s, p, q;
};

std::optional<Scale> scale_of(const SpaceSpec& x) {
  if (auto* b = std::get_if<family::Besov>(&x.family)) return Scale{false, b->s, b->p, b->q};
  if (auto* f = std::get_if<family::TriebelLizorkin>(&x.family)) return Scale{true, f->s, f->p, f->q};
  return std::nullopt;
}

SpaceSpec rewrite_target(const SpaceSpec& F) {
  if (F.is<family::Holder>() && F.as<family::Holder>().alpha == ExtRational(1)) return F;
  return rewrite_identifications(F);
}

// Smooth-bump recipe for a smoothness gap that is below the deficiency.
ObstructionRecipe smooth_recipe(const SpaceSpec& E, const SpaceSpec& F, const ExtRational& s,
                                const ExtRational& t, const ExtRational& p1,
                                const ExtRational& p2, int d, const std::string& lhs_expr) {
  const ExtRational half_d(d, 2);
  const ExtRational type_part = pos_part(dim_over(d, p1) - half_d);
  const ExtRational cotype_part = pos_part(half_d - dim_over(d, p2));
  const ExtRational gap = s - t;
  ObstructionRecipe r;
  r.violated = {lhs_expr, gap, ">=", "(d/p1-d/2)_+ + (d/2-d/p2)_+", type_part + cotype_part};
  r.construction = Construction::SmoothScaledBumps;
  if (type_part > gap) {
    r.mode = ObstructionMode::Type2;
    r.predicted_exponent = type_part - gap;
  } else {
    r.mode = ObstructionMode::Cotype2;
    r.predicted_exponent = cotype_part - gap;
  }
  r.source = E;
  r.target = F;
  r.params = {{"s", s}, {"t", t}, {"p1", p1}, {"p2", p2}, {"d", ExtRational(d)}};
  return r;
}

ObstructionRecipe tent_recipe(const SpaceSpec& E, const SpaceSpec& F, const ExtRational& a,
                              const ExtRational& b, int k) {
  ObstructionRecipe r;
  r.violated = {"2(alpha-beta)", kTwo * (a - b), ">=", "k", ExtRational(k)};
  r.construction = Construction::HoelderTentBumps;
  r.mode = ObstructionMode::Cotype2;
  r.predicted_exponent = (ExtRational(k, 2) - (a - b)) / a;
  r.source = E;
  r.target = F;
  r.params = {{"alpha", a}, {"beta", b}, {"k", ExtRational(k)}, {"d", ExtRational(E.dim())}};
  return r;
}

Verdict d1_sequence(const SpaceSpec& E, const SpaceSpec& F, const ExtRational& p,
                    const ExtRational& q) {
  if (p > q) return undetermined("D1", "l_p -> l_q requires p <= q");
  if (p <= kTwo && kTwo <= q) {
    return feasible("D1", {E, make_space(family::SequenceLp{kTwo}, E.domain), F}, std::nullopt);
  }
  ObstructionRecipe r;
  r.construction = Construction::LpUnitVectors;
  r.source = E;
  r.target = F;
  r.params = {{"p", p}, {"q", q}};
  if (p > kTwo) {
    r.violated = {"p", p, "<=", "2", kTwo};
    r.mode = ObstructionMode::Cotype2;
    r.predicted_exponent = kHalf - p.reciprocal();
  } else {
    r.violated = {"q", q, ">=", "2", kTwo};
    r.mode = ObstructionMode::Type2;
    r.predicted_exponent = q.reciprocal() - kHalf;
  }
  return infeasible("D1", std::move(r));
}

Verdict d2_lebesgue(const SpaceSpec& E, const SpaceSpec& F) {
  const ExtRational p = E.as<family::LebesgueLp>().p;
  const ExtRational q = F.as<family::LebesgueLp>().p;
  if (!E.domain.bounded() || q > p) {
    return undetermined("D2", "L_p -> L_q requires q <= p on a bounded domain");
  }
  if (q <= kTwo && kTwo <= p) {
    return feasible("D2", {E, make_space(family::LebesgueLp{kTwo}, E.domain), F}, std::nullopt);
  }
  const int d = E.dim();
  ObstructionRecipe r;
  r.construction = Construction::LpIndicatorPartition;
  r.source = E;
  r.target = F;
  r.params = {{"p", p}, {"q", q}, {"d", ExtRational(d)}};
  if (p < kTwo) {
    r.violated = {"p", p, ">=", "2", kTwo};
    r.mode = ObstructionMode::Type2;
    r.predicted_exponent = ExtRational(d) * (p.reciprocal() - kHalf);
  } else {
    r.violated = {"q", q, "<=", "2", kTwo};
    r.mode = ObstructionMode::Cotype2;
    r.predicted_exponent = ExtRational(d) * (kHalf - q.reciprocal());
  }
  return infeasible("D2", std::move(r));
}

// Shared by D4 and D5: thresholds on (s,t,p1,p2), E/F are the original specs.
Verdict gap_rule(const std::string& rule, const SpaceSpec& E, const SpaceSpec& F,
                 const ExtRational& s, const ExtRational& t, const ExtRational& p1,
                 const ExtRational& p2, bool both_triebel, bool closed_interval,
                 bool need_positive_t) {
  const int d = E.dim();
  if (!E.domain.bounded() || !E.domain.euclidean()) {
    return undetermined(rule, "the factorization theorem needs a bounded Euclidean domain");
  }
  if (!(t < s)) return undetermined(rule, "the factorization theorem needs t < s");
  const ExtRational half_d(d, 2);
  const ExtRational gap = s - t;
  const ExtRational def = deficiency(p1, p2, d);
  const ExtRational need = dim_over(d, p1) - dim_over(d, p2);
  if (gap > def) {
    Interval u{t + pos_part(half_d - dim_over(d, p2)), s - pos_part(dim_over(d, p1) - half_d),
               false, false};
    if (closed_interval) {
      u.lo_closed = u.lo != s && u.lo != t;
      u.hi_closed = u.hi != s && u.hi != t;
    }
    SpaceSpec H = sobolev2(u.midpoint(), E.domain);
    return feasible(rule, {E, H, F}, u);
  }
  const bool hypothesis = both_triebel ? gap >= need : gap > need;
  if (!hypothesis) return undetermined(rule, "embedding hypothesis s-t vs d/p1-d/p2 not met");
  if (gap == def) return borderline(rule, "s-t equals the deficiency " + def.str());
  if (need_positive_t && t == kZero) {
    return undetermined(rule, "necessity is only established for t > 0");
  }
  return infeasible(rule, smooth_recipe(E, F, s, t, p1, p2, d, "s-t"));
}

Verdict d3_holder(const SpaceSpec& E, const SpaceSpec& F) {
  const ExtRational a = E.as<family::Holder>().alpha;
  const ExtRational b = F.as<family::Holder>().alpha;
  if (!E.domain.connected() || !E.domain.bounded()) {
    return undetermined("D3", "no certified packing exponent for this domain");
  }
  const int k = *packing_exponent(E.domain);
  const ExtRational lhs = kTwo * (a - b);
  if (lhs < ExtRational(k)) return infeasible("D3", tent_recipe(E, F, a, b, k));
  if (lhs == ExtRational(k)) return borderline("D3", "2(alpha-beta) equals the packing exponent");
  // a - b > k/2: Besov rewrite and the general gap rule.
  Verdict v = gap_rule("D3", E, F, a, b, ExtRational::infinity(), ExtRational::infinity(), false,
                       false, true);
  return v;
}

Verdict d6_mixed(const SpaceSpec& E, const SpaceSpec& F) {
  const auto& A = E.as<family::MixedSobolev>();
  const auto& B = F.as<family::MixedSobolev>();
  const int d = E.dim();
  if (!E.domain.bounded()) return undetermined("D6", "mixed smoothness rule needs a bounded domain");
  const ExtRational s(A.A.order());
  const ExtRational t(B.A.order());
  if (s - t < ExtRational(d) * (A.p.reciprocal() - B.p.reciprocal())) {
    return undetermined("D6", "hypothesis |A|-|B| >= d(1/p1-1/p2) not met");
  }
  if (s - t < deficiency(A.p, B.p, d)) {
    return infeasible("D6", smooth_recipe(E, F, s, t, A.p, B.p, d, "|A|-|B|"));
  }
  return undetermined("D6", "only necessity is known for mixed smoothness");
}

Verdict t_scale(const SpaceSpec& E, const SpaceSpec& F, const Scale& sc) {
  const int d = E.dim();
  const ExtRational half_d(d, 2);
  if (!(sc.s > dim_over(d, sc.p))) return undetermined("T2", "requires s > d/p");
  const ExtRational type_part = pos_part(dim_over(d, sc.p) - half_d);
  const ExtRational thr = type_part + half_d;
  if (sc.s > thr) {
    Interval u{half_d, sc.s - type_part, false, false};
    return feasible("T2", {E, sobolev2(u.midpoint(), E.domain), F}, u);
  }
  if (sc.s == thr) return borderline("T2", "s equals (d/p-d/2)_+ + d/2");
  ObstructionRecipe r = smooth_recipe(E, F, sc.s, kZero, sc.p, ExtRational::infinity(), d, "s");
  r.violated.rhs_expr = "(d/p-d/2)_+ + d/2";
  return infeasible("T2", std::move(r));
}

bool contains_smooth(const SpaceSpec& E) {
  if (E.is<family::Smooth>() || E.is<family::Holder>() || E.is<family::SupSpace>() ||
      E.is<family::ContinuousBounded>()) {
    return true;
  }
  if (E.is<family::Besov>()) return E.as<family::Besov>().p.is_infinite();
  return false;
}

}  // namespace

const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Feasible: return "feasible";
    case VerdictStatus::Infeasible: return "infeasible";
    case VerdictStatus::Borderline: return "borderline";
    case VerdictStatus::Undetermined: return "undetermined";
  }
  return "?";
}

const char* to_string(Construction c) {
  switch (c) {
    case Construction::LpUnitVectors: return "lp-unit-vectors";
    case Construction::LpIndicatorPartition: return "Lp-indicator-partition";
    case Construction::HoelderTentBumps: return "hoelder-tent-bumps";
    case Construction::SmoothScaledBumps: return "smooth-scaled-bumps";
  }
  return "?";
}

const char* to_string(ObstructionMode m) {
  return m == ObstructionMode::Type2 ? "type2" : "cotype2";
}

Construction parse_construction(std::string_view text) {
  for (auto c : {Construction::LpUnitVectors, Construction::LpIndicatorPartition,
                 Construction::HoelderTentBumps, Construction::SmoothScaledBumps}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorCode::Parse, "unknown construction '" + std::string(text) + "'");
}

ObstructionMode parse_mode(std::string_view text) {
  if (text == "type2") return ObstructionMode::Type2;
  if (text == "cotype2") return ObstructionMode::Cotype2;
  throw Error(ErrorCode::Parse, "unknown mode '" + std::string(text) + "'");
}

bool Interval::contains(const ExtRational& x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::empty() const {
  if (lo < hi) return false;
  return !(lo == hi && lo_closed && hi_closed);
}

ExtRational Interval::midpoint() const { return (lo + hi) * ExtRational(1, 2); }

std::string Interval::str() const {
  return std::string(lo_closed ? "[" : "(") + lo.str() + ", " + hi.str() + (hi_closed ? "]" : ")");
}

std::string Inequality::str() const {
  return lhs_expr + " " + relation + " " + rhs_expr + " violated: " + lhs.str() + " vs " + rhs.str();
}

std::optional<int> packing_exponent(const DomainSpec& domain) {
  switch (domain.kind) {
    case DomainKind::UnitCube:
    case DomainKind::EuclideanBall:
      return domain.dimension;
    case DomainKind::FiniteMetricSet:
      return 0;
    default:
      return std::nullopt;
  }
}

Verdict decide(const SpaceSpec& E, const SpaceSpec& F) {
  validate_space(E);
  validate_space(F);
  if (!(E.domain == F.domain)) {
    throw Error(ErrorCode::DomainMismatch,
                "domains differ: " + E.domain.str() + " vs " + F.domain.str());
  }
  if (F.is<family::SupSpace>() && E.domain.kind == DomainKind::SequenceIndex &&
      E.is<family::SequenceLp>()) {
    return d1_sequence(E, F, E.as<family::SequenceLp>().p, ExtRational::infinity());
  }
  if (F.is<family::SupSpace>()) return decide_bounded_target(E, BoundedTarget::Sup);
  if (F.is<family::ContinuousBounded>()) {
    return decide_bounded_target(E, BoundedTarget::ContinuousBounded);
  }

  const EmbedVerdict ev = embeds(E, F);
  if (ev.fails()) {
    throw Error(ErrorCode::Precondition, "embedding " + E.str() + " -> " + F.str() +
                                             " fails (" + ev.rule + ": " + ev.reason + ")");
  }

  if (E.is<family::SequenceLp>() && F.is<family::SequenceLp>()) {
    return d1_sequence(E, F, E.as<family::SequenceLp>().p, F.as<family::SequenceLp>().p);
  }
  if (E.is<family::LebesgueLp>() && F.is<family::LebesgueLp>()) return d2_lebesgue(E, F);
  if (E.is<family::Holder>() && F.is<family::Holder>()) return d3_holder(E, F);
  if (E.is<family::Slobodeckij>() && F.is<family::Slobodeckij>()) {
    const auto& a = E.as<family::Slobodeckij>();
    const auto& b = F.as<family::Slobodeckij>();
    return gap_rule("D4", E, F, a.s, b.s, a.p, b.p, true, false, false);
  }
  if (E.is<family::MixedSobolev>() && F.is<family::MixedSobolev>()) return d6_mixed(E, F);

  const SpaceSpec Er = rewrite_identifications(E);
  const SpaceSpec Fr = rewrite_target(F);
  auto a = scale_of(Er);
  auto b = scale_of(Fr);
  if (a && b) {
    if (Er == Fr && a->triebel && a->p == kTwo && a->q == kTwo) {
      Interval u{a->s, a->s, true, true};
      return feasible("D0", {E, sobolev2(a->s, E.domain), F}, u);
    }
    const bool both_triebel = a->triebel && b->triebel;
    return gap_rule("D5", E, F, a->s, b->s, a->p, b->p, both_triebel, both_triebel, true);
  }
  return undetermined("", "no decision rule for " + family_name(E.family) + " -> " +
                              family_name(F.family));
}

Verdict decide_bounded_target(const SpaceSpec& E, BoundedTarget target) {
  validate_space(E);
  const SpaceSpec F = make_space(
      target == BoundedTarget::Sup ? Family(family::SupSpace{}) : Family(family::ContinuousBounded{}),
      E.domain);
  if (E.domain.kind == DomainKind::SequenceIndex) {
    if (E.is<family::SequenceLp>() && target == BoundedTarget::Sup) {
      return d1_sequence(E, F, E.as<family::SequenceLp>().p, ExtRational::infinity());
    }
    return undetermined("", "no bounded-target rule on the sequence index");
  }
  if (E.domain.kind == DomainKind::EuclideanSpace) {
    if (contains_smooth(E)) {
      ObstructionRecipe r;
      r.violated = {"diam(X)", ExtRational::infinity(), "<", "inf", ExtRational::infinity()};
      r.construction = Construction::SmoothScaledBumps;
      r.mode = ObstructionMode::Cotype2;
      r.predicted_exponent = kHalf;  // n^{1/2} growth in the number of translates
      r.source = E;
      r.target = F;
      r.params = {{"d", ExtRational(E.dim())}, {"translate", ExtRational(1)}};
      return infeasible("T1", std::move(r));
    }
    return undetermined("T1", "source does not contain the smooth functions");
  }
  if (E.is<family::Holder>()) {
    if (!E.domain.euclidean()) {
      return undetermined("T3", "no sufficient condition on general metric spaces");
    }
    const ExtRational a = E.as<family::Holder>().alpha;
    const int k = *packing_exponent(E.domain);
    if (kTwo * a < ExtRational(k)) {
      ObstructionRecipe r = tent_recipe(E, F, a, kZero, k);
      r.violated.lhs_expr = "2 alpha";
      return infeasible("T3", std::move(r));
    }
    if (kTwo * a == ExtRational(k)) return borderline("T3", "2 alpha equals the packing exponent");
    Verdict v = t_scale(E, F, Scale{false, a, ExtRational::infinity(), ExtRational::infinity()});
    v.rule = "T3";
    return v;
  }
  if (E.is<family::MixedSobolev>()) {
    const auto& m = E.as<family::MixedSobolev>();
    const int d = E.dim();
    const ExtRational s(m.A.order());
    if (s < dim_over(d, m.p)) return undetermined("T4", "requires |A| >= d/p");
    const ExtRational thr = pos_part(dim_over(d, m.p) - ExtRational(d, 2)) + ExtRational(d, 2);
    if (s < thr) {
      ObstructionRecipe r = smooth_recipe(E, F, s, kZero, m.p, ExtRational::infinity(), d, "|A|");
      r.violated.rhs_expr = "(d/p-d/2)_+ + d/2";
      return infeasible("T4", std::move(r));
    }
    return undetermined("T4", "only necessity is known for mixed smoothness");
  }
  const SpaceSpec Er = rewrite_identifications(E);
  if (auto sc = scale_of(Er); sc && E.domain.bounded()) return t_scale(E, F, *sc);
  if (E == F) return undetermined("", "identity on a bounded target");
  return undetermined("", "no bounded-target rule for " + family_name(E.family));
}

Interval admissible_u_interval(const SpaceSpec& E, const SpaceSpec& F) {
  Verdict v = decide(E, F);
  if (v.status != VerdictStatus::Feasible || !v.witness || !v.witness->u_interval) {
    throw Error(ErrorCode::Precondition,
                "no admissible u-interval: verdict is " + std::string(to_string(v.status)) +
                    (v.witness ? " without a Sobolev witness" : ""));
  }
  return *v.witness->u_interval;
}

}  // namespace sandwich
