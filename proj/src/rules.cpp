#include <algorithm>

#include "sandwich/embedding.hpp"

namespace sandwich {

const std::vector<RuleInfo>& rule_registry() {
  // Statements use: s,t smoothness of source/target, p1,p2 integration
  // indices, q1,q2 fine indices, d dimension, k packing exponent,
  // def = (d/p1-d/2)_+ + (d/2-d/p2)_+.
  static const std::vector<RuleInfo> rules = {
      {"ID", "identity", "E = F"},
      {"R1", "TL to TL", "F^s_{p1,q1} -> F^t_{p2,q2} if s > t and s-t >= d/p1-d/p2"},
      {"R1-iff", "Bessel potential iff", "H^s_{p1} -> H^t_{p2} (1<p1,p2<inf, s>=t) iff s-t >= d/p1-d/p2; fails for s<t"},
      {"R2", "Besov to Besov", "B^s_{p1,q1} -> B^t_{p2,q2} if s > t and s-t > d/p1-d/p2"},
      {"R3", "integration lowering", "X^s_{p1,q} -> X^s_{p2,q} if p1 >= p2 on a bounded domain"},
      {"R4", "fine index", "X^s_{p,q1} -> X^s_{p,q2} if q1 <= q2; B^s_{p,min(p,q)} -> F^s_{p,q} -> B^s_{p,max(p,q)}"},
      {"R5", "Besov/TL crossing", "B <-> F with s > t and s-t > d/p1-d/p2"},
      {"R6", "integer Sobolev iff", "W^s_{p1} -> W^t_{p2} (s,t integer, p1,p2 < inf, s>=t) iff s-t >= d/p1-d/p2; fails for s<t"},
      {"R7", "Hoelder inclusion", "C^a -> C^b if 0 < b <= a <= 1 on a bounded metric space"},
      {"R8", "sequence inclusion", "l_p -> l_q if p <= q"},
      {"R9", "Lebesgue inclusion", "L_p -> L_q if q <= p on a bounded domain"},
      {"R10", "bounded target", "X^s_{p,q} -> C^0 if s > d/p; C^inf, C^a, C_b -> l_inf"},
      {"R11", "identification", "H^s_p = F^s_{p,2}; W^s_p = F^s_{p,2} (s integer), F^s_{p,p} (otherwise); C^a = B^a_{inf,inf}; B^s_{p,p} = F^s_{p,p}"},
      {"D0", "Hilbert identity", "E = F = W^s_2 up to identification"},
      {"D1", "sequence spaces", "l_p -> l_q factors through a Hilbert space iff p <= 2 <= q"},
      {"D2", "Lebesgue spaces", "L_p -> L_q (bounded domain, q <= p) factors iff q <= 2 <= p"},
      {"D3", "Hoelder pair", "C^a -> C^b on a connected space with packing exponent k: infeasible if 2(a-b) < k; on Euclidean domains feasible if a-b > k/2"},
      {"D4", "Slobodeckij pair", "W^s_{p1} -> W^t_{p2}, t<s: feasible if s-t > def with u in (t+(d/2-d/p2)_+, s-(d/p1-d/2)_+); infeasible if s-t < def"},
      {"D5", "Besov/TL pair", "X^s_{p1,q1} -> Y^t_{p2,q2}, t<s: feasible if s-t > def; infeasible if t > 0 and s-t < def"},
      {"D6", "mixed smoothness", "W^A_{p1} -> W^B_{p2} with |A|-|B| >= d(1/p1-1/p2): infeasible if |A|-|B| < def"},
      {"T1", "unbounded domain", "no RKHS with bounded kernel contains C^inf on an unbounded open domain"},
      {"T2", "Besov/TL to C^0", "s > d/p: feasible if s > (d/p-d/2)_+ + d/2 with u in (d/2, s-(d/p-d/2)_+); infeasible if s < (d/p-d/2)_+ + d/2"},
      {"T3", "Hoelder to l_inf", "C^a on a space with packing exponent k: infeasible if 2a < k; on Euclidean domains feasible if a > k/2"},
      {"T4", "mixed to l_inf", "W^A_p with s=|A| >= d/p: infeasible if s < (d/p-d/2)_+ + d/2"},
      {"K1", "positive decomposition", "Psi = k1 - k2 bounded, H1, H2 in L1(mu) for all mu in M: E_{M,Psi,1} -> H1 + H2"},
      {"K2", "normalizing rewrite", "f_{mu,Psi,beta} = f_{beta mu,Psi,1} with equal norms in E_{M,Psi,beta} and E_{beta M,Psi,1}"},
      {"P1", "greedy packing", "a maximal delta-packing in d^alpha of (0,s)^k has size of order delta^(-k/alpha)"},
  };
  return rules;
}

const RuleInfo* rule_info(std::string_view tag) {
  const auto& rules = rule_registry();
  auto it = std::find_if(rules.begin(), rules.end(),
                         [&](const RuleInfo& r) { return r.tag == tag; });
  return it == rules.end() ? nullptr : &*it;
}

}  // namespace sandwich
