#include "sandwich/embedding.hpp"

#include <optional>

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

const ExtRational kOne(1);
const ExtRational kTwo(2);

EmbedVerdict holds(std::string rule, std::string note = {}) {
  return {EmbedStatus::Holds, std::move(rule), std::move(note), {}};
}
EmbedVerdict fails(std::string rule, std::string note) {
  return {EmbedStatus::Fails, std::move(rule), std::move(note), {}};
}
EmbedVerdict unknown(std::string reason) {
  return {EmbedStatus::Undetermined, {}, std::move(reason), {}};
}

// Besov or TL parameters after identification.
struct Scale {
  bool triebel;
  ExtRational s, p, q;
};

std::optional<Scale> scale_of(const SpaceSpec& x) {
  if (auto* b = std::get_if<family::Besov>(&x.family)) return Scale{false, b->s, b->p, b->q};
  if (auto* f = std::get_if<family::TriebelLizorkin>(&x.family)) return Scale{true, f->s, f->p, f->q};
  return std::nullopt;
}

EmbedVerdict sobolev_iff(const family::Sobolev& a, const family::Sobolev& b, int d) {
  const bool integer = a.s.is_integer() && b.s.is_integer();
  const char* tag = integer ? "R6" : "R1-iff";
  if (a.s < b.s) return fails(tag, "smoothness increases");
  const ExtRational gap = a.s - b.s;
  const ExtRational need = dim_over(d, a.p) - dim_over(d, b.p);
  if (gap >= need) return holds(tag);
  return fails(tag, "s-t = " + gap.str() + " < d/p1-d/p2 = " + need.str());
}

EmbedVerdict scale_pair(const Scale& a, const Scale& b, const DomainSpec& dom) {
  const int d = dom.dimension;
  if (!dom.bounded() && a.p > b.p) {
    return unknown("integration index decreases on an unbounded domain");
  }
  const ExtRational need = dim_over(d, a.p) - dim_over(d, b.p);
  if (a.s > b.s) {
    const ExtRational gap = a.s - b.s;
    if (a.triebel && b.triebel) {
      if (gap >= need) return holds("R1");
      return unknown("s-t < d/p1-d/p2 for a TL pair");
    }
    if (gap > need) return holds(a.triebel == b.triebel ? "R2" : "R5");
    return unknown("s-t <= d/p1-d/p2");
  }
  if (a.s == b.s) {
    if (a.triebel == b.triebel) {
      if (a.p >= b.p && a.q <= b.q) return holds(a.p == b.p ? "R4" : "R3");
      return unknown("equal smoothness without p1 >= p2 and q1 <= q2");
    }
    if (a.p >= b.p) {
      if (!a.triebel && a.q <= min(b.p, b.q)) return holds("R4");
      if (a.triebel && b.q >= max(a.p, a.q)) return holds("R4");
    }
    return unknown("equal smoothness Besov/TL crossing outside the fine-index rule");
  }
  return unknown("smoothness increases");
}

bool rd_domain(const DomainSpec& d) { return d.euclidean(); }

bool is_bounded_target(const SpaceSpec& F) {
  return F.is<family::SupSpace>() || F.is<family::ContinuousBounded>();
}

EmbedVerdict bounded_target(const SpaceSpec& E, const SpaceSpec& F) {
  const bool to_sup = F.is<family::SupSpace>();
  if (E.is<family::Smooth>()) return holds("R10");
  if (E.is<family::ContinuousBounded>()) {
    return to_sup ? holds("R10") : unknown("C_b to C_b handled by identity");
  }
  if (E.is<family::Holder>()) return holds("R10");
  if (E.is<family::SequenceLp>()) return to_sup ? holds("R8") : unknown("sequence space to C_b");
  if (auto sc = scale_of(E)) {
    if (sc->s > dim_over(E.dim(), sc->p)) return holds("R10");
    return unknown("s <= d/p");
  }
  return unknown("no rule for " + family_name(E.family) + " into a bounded target");
}

}  // namespace

const char* to_string(EmbedStatus s) {
  switch (s) {
    case EmbedStatus::Holds: return "holds";
    case EmbedStatus::Fails: return "fails";
    case EmbedStatus::Undetermined: return "undetermined";
  }
  return "?";
}

SpaceSpec rewrite_identifications(const SpaceSpec& spec) {
  SpaceSpec out = spec;
  if (auto* s = std::get_if<family::Sobolev>(&spec.family)) {
    if (s->p > kOne && s->p.is_finite()) out.family = family::TriebelLizorkin{s->s, s->p, kTwo};
  } else if (auto* w = std::get_if<family::Slobodeckij>(&spec.family)) {
    if (w->s.is_integer()) {
      if (w->p <= kOne) {
        throw Error(ErrorCode::NotIdentifiable,
                    "Slobodeckij space with integer smoothness and p = 1 has no TL form");
      }
      out.family = family::TriebelLizorkin{w->s, w->p, kTwo};
    } else {
      out.family = family::TriebelLizorkin{w->s, w->p, w->p};
    }
  } else if (auto* h = std::get_if<family::Holder>(&spec.family)) {
    if (rd_domain(spec.domain)) {
      out.family = family::Besov{h->alpha, ExtRational::infinity(), ExtRational::infinity()};
    }
  } else if (auto* b = std::get_if<family::Besov>(&spec.family)) {
    if (b->p == b->q && b->p.is_finite()) out.family = family::TriebelLizorkin{b->s, b->p, b->q};
  }
  return out;
}

EmbedVerdict embeds(const SpaceSpec& E, const SpaceSpec& F) {
  validate_space(E);
  validate_space(F);
  if (!(E.domain == F.domain)) {
    throw Error(ErrorCode::DomainMismatch,
                "domains differ: " + E.domain.str() + " vs " + F.domain.str());
  }
  const DomainSpec& dom = E.domain;
  if (E == F) return holds("ID");

  if (E.is<family::Sobolev>() && F.is<family::Sobolev>()) {
    const auto& a = E.as<family::Sobolev>();
    const auto& b = F.as<family::Sobolev>();
    const bool finite = a.p.is_finite() && b.p.is_finite();
    const bool integer = a.s.is_integer() && b.s.is_integer();
    const bool bessel = a.p > kOne && b.p > kOne;
    if (finite && (integer || bessel) && (dom.bounded() || a.p <= b.p)) {
      return sobolev_iff(a, b, dom.dimension);
    }
  }

  if (E.is<family::Holder>() && F.is<family::Holder>() && dom.bounded()) {
    if (E.as<family::Holder>().alpha >= F.as<family::Holder>().alpha) return holds("R7");
  }

  if (is_bounded_target(F)) return bounded_target(rewrite_identifications(E), F);

  const SpaceSpec Er = rewrite_identifications(E);
  // Lip is strictly smaller than B^1_{inf,inf}: only rewrite a target Holder(a) for a < 1.
  const bool keep_target = F.is<family::Holder>() && F.as<family::Holder>().alpha == kOne;
  const SpaceSpec Fr = keep_target ? F : rewrite_identifications(F);
  if (Er == Fr) return holds("R11");

  if (Er.is<family::SequenceLp>() && Fr.is<family::SequenceLp>()) {
    if (Er.as<family::SequenceLp>().p <= Fr.as<family::SequenceLp>().p) return holds("R8");
    return unknown("l_p to l_q with p > q");
  }
  if (Er.is<family::LebesgueLp>() && Fr.is<family::LebesgueLp>()) {
    if (dom.bounded() && Fr.as<family::LebesgueLp>().p <= Er.as<family::LebesgueLp>().p) {
      return holds("R9");
    }
    return unknown("L_p to L_q needs q <= p on a bounded domain");
  }
  auto a = scale_of(Er);
  auto b = scale_of(Fr);
  if (a && b) return scale_pair(*a, *b, dom);

  if (Er.is<family::MixedSobolev>() && Fr.is<family::MixedSobolev>()) {
    const auto& A = Er.as<family::MixedSobolev>();
    const auto& B = Fr.as<family::MixedSobolev>();
    bool subset = true;
    for (const auto& beta : B.A.elements()) subset = subset && A.A.contains(beta);
    if (subset && dom.bounded() && A.p >= B.p) return holds("R3");
    return unknown("mixed smoothness pair outside the inclusion rule");
  }
  return unknown("no rule for " + family_name(E.family) + " -> " + family_name(F.family));
}

EmbedVerdict compose(const std::vector<SpaceSpec>& links) {
  if (links.size() < 2) throw Error(ErrorCode::EmptyInput, "a chain needs at least two links");
  for (std::size_t i = 0; i + 1 < links.size(); ++i) {
    EmbedVerdict v = embeds(links[i], links[i + 1]);
    if (!v.holds()) {
      v.reason = "link " + std::to_string(i) + ": " + v.reason;
      return v;
    }
  }
  EmbedVerdict out = holds("chain");
  out.chain = links;
  return out;
}

}  // namespace sandwich
