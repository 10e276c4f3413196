#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sandwich/space.hpp"

namespace sandwich {

enum class EmbedStatus { Holds, Fails, Undetermined };

const char* to_string(EmbedStatus s);

struct EmbedVerdict {
  EmbedStatus status = EmbedStatus::Undetermined;
  std::string rule;    // tag from the rule registry; empty only for Undetermined
  std::string reason;  // free text for Undetermined, short note otherwise
  std::vector<SpaceSpec> chain;  // intermediate links for transitive Holds

  bool holds() const { return status == EmbedStatus::Holds; }
  bool fails() const { return status == EmbedStatus::Fails; }
};

/// One entry of the rule registry. `statement` is the formal condition the
/// rule checks, written in the engine's own notation.
struct RuleInfo {
  std::string_view tag;
  std::string_view name;
  std::string_view statement;
};

/// nullptr for unknown tags.
const RuleInfo* rule_info(std::string_view tag);
const std::vector<RuleInfo>& rule_registry();

/// Canonical Besov/Triebel-Lizorkin form. Idempotent.
///   Sobolev(s,p), 1<p<inf        -> TL(s,p,2)
///   Slobodeckij(s,p), s integer  -> TL(s,p,2)   (p>1, else NotIdentifiable)
///   Slobodeckij(s,p), otherwise  -> TL(s,p,p)
///   Holder(a) on R^d domains     -> Besov(a,inf,inf)
///   Besov(s,p,p), p<inf          -> TL(s,p,p)
/// Other specs are returned unchanged.
SpaceSpec rewrite_identifications(const SpaceSpec& spec);

/// Decides E -> F. Throws ValidationError on invalid specs and
/// Error(DomainMismatch) when the domains differ.
EmbedVerdict embeds(const SpaceSpec& E, const SpaceSpec& F);

/// Checks every consecutive pair of `links`. Holds with the chain attached
/// when all links hold; otherwise the first non-Holds verdict with its
/// position in `reason`.
EmbedVerdict compose(const std::vector<SpaceSpec>& links);

}  // namespace sandwich
