#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sandwich/embedding.hpp"
#include "sandwich/errors.hpp"

using namespace sandwich;

namespace {
const ExtRational INF = ExtRational::infinity();
ExtRational Q(long long a, long long b = 1) { return ExtRational(a, b); }

SpaceSpec S(const char* fam, const char* dom) { return parse_space(fam, parse_domain(dom)); }

SpaceSpec tl(ExtRational s, ExtRational p, ExtRational q, int d) {
  return make_space(family::TriebelLizorkin{s, p, q}, DomainSpec::cube(d));
}
}  // namespace

TEST_CASE("rule examples") {
  auto v = embeds(S("triebel:2:2:2", "cube:3"), S("triebel:1:2:2", "cube:3"));
  CHECK(v.status == EmbedStatus::Holds);
  CHECK(v.rule == "R1");

  v = embeds(S("sobolev:1:2", "cube:1"), S("sobolev:2:2", "cube:1"));
  CHECK(v.status == EmbedStatus::Fails);
  CHECK(v.rule == "R6");

  // 1 - 1/2 > 2(0 - 1/4)
  v = embeds(S("besov:1:inf:inf", "cube:2"), S("besov:1/2:4:4", "cube:2"));
  CHECK(v.status == EmbedStatus::Holds);
  CHECK(v.rule == "R5");
}

TEST_CASE("rewrite identifications") {
  auto dom = DomainSpec::cube(2);
  CHECK(rewrite_identifications(make_space(family::Slobodeckij{Q(3, 2), 3}, dom)).family ==
        Family(family::TriebelLizorkin{Q(3, 2), 3, 3}));
  CHECK(rewrite_identifications(make_space(family::Sobolev{2, 2}, dom)).family ==
        Family(family::TriebelLizorkin{2, 2, 2}));
  CHECK(rewrite_identifications(make_space(family::Holder{Q(1, 2)}, dom)).family ==
        Family(family::Besov{Q(1, 2), INF, INF}));
  CHECK(rewrite_identifications(make_space(family::Slobodeckij{2, 3}, dom)).family ==
        Family(family::TriebelLizorkin{2, 3, 2}));
  CHECK(rewrite_identifications(make_space(family::Besov{1, 3, 3}, dom)).family ==
        Family(family::TriebelLizorkin{1, 3, 3}));
  // Not identifiable: integer s with p = 1 (bypasses validation on purpose).
  try {
    rewrite_identifications(make_space(family::Slobodeckij{1, 1}, dom));
    FAIL("expected not-identifiable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIdentifiable);
  }
  // Holder on a finite metric space has no Besov form.
  auto fin = make_space(family::Holder{Q(1, 2)}, DomainSpec::finite({{0, 1}, {1, 0}}));
  CHECK(rewrite_identifications(fin) == fin);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(embeds(S("sobolev:1:2", "cube:1"), S("sobolev:1:2", "cube:2")), Error);
  try {
    embeds(S("sobolev:1:2", "cube:1"), S("sobolev:1:2", "cube:2"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainMismatch);
  }
  CHECK_THROWS_AS(embeds(make_space(family::Holder{2}, DomainSpec::cube(1)),
                         S("sup", "cube:1")),
                  ValidationError);
}

TEST_CASE("other family rules") {
  CHECK(embeds(S("lp:1", "seq"), S("lp:3", "seq")).rule == "R8");
  CHECK(embeds(S("lp:3", "seq"), S("lp:1", "seq")).status == EmbedStatus::Undetermined);
  CHECK(embeds(S("lebesgue:3", "cube:2"), S("lebesgue:2", "cube:2")).rule == "R9");
  CHECK(embeds(S("lebesgue:2", "rd:2"), S("lebesgue:1", "rd:2")).status ==
        EmbedStatus::Undetermined);
  CHECK(embeds(S("holder:1", "cube:2"), S("holder:1/2", "cube:2")).rule == "R7");
  CHECK(embeds(S("holder:1", "metric:0,1;1,0"), S("holder:1/2", "metric:0,1;1,0")).rule == "R7");
  CHECK(embeds(S("besov:2:2:2", "cube:2"), S("sup", "cube:2")).rule == "R10");
  CHECK(embeds(S("besov:1:2:2", "cube:2"), S("sup", "cube:2")).status == EmbedStatus::Undetermined);
  CHECK(embeds(S("sobolev:2:2", "cube:2"), S("besov:2:2:2", "cube:2")).rule == "R11");
  CHECK(embeds(S("besov:1:2:1", "cube:2"), S("besov:1:2:3", "cube:2")).rule == "R4");
  CHECK(embeds(S("besov:1:3:2", "cube:2"), S("besov:1:2:3", "cube:2")).rule == "R3");
  CHECK(embeds(S("triebel:1:2:1", "cube:2"), S("besov:1:2:2", "cube:2")).rule == "R4");
  CHECK(embeds(S("besov:1:inf:inf", "cube:1"), S("holder:1", "cube:1")).status ==
        EmbedStatus::Undetermined);
  // Lip embeds into the Zygmund class.
  CHECK(embeds(S("holder:1", "cube:1"), S("besov:1:inf:inf", "cube:1")).rule == "R11");
}

TEST_CASE("integer Sobolev iff") {
  // W^2_1 -> W^1_2 on d=2: 1 >= 2 - 1: holds; W^1_1 -> W^0_2 on d=2: 1 >= 1: holds (borderline equality)
  CHECK(embeds(S("sobolev:2:1", "cube:2"), S("sobolev:1:2", "cube:2")).holds());
  CHECK(embeds(S("sobolev:1:1", "cube:2"), S("sobolev:0:2", "cube:2")).holds());
  // W^1_1 -> W^0_3 on d=2: 1 < 2 - 2/3
  auto v = embeds(S("sobolev:1:1", "cube:2"), S("sobolev:0:3", "cube:2"));
  CHECK(v.fails());
  CHECK(v.rule == "R6");
  // p = inf excluded from the iff
  CHECK(embeds(S("sobolev:1:2", "cube:2"), S("sobolev:0:inf", "cube:2")).status ==
        EmbedStatus::Undetermined);
}

TEST_CASE("property: reflexivity") {
  std::vector<SpaceSpec> specs = {
      S("holder:1/3", "cube:2"), S("sobolev:3/2:3", "cube:1"), S("slobodeckij:1/2:1", "cube:2"),
      S("besov:1:inf:2", "ball:3"), S("triebel:0:1:inf", "cube:1"), S("lp:inf", "seq"),
      S("lebesgue:1", "cube:4"),  S("sup", "cube:2"), S("cb", "rd:1"), S("smooth", "rd:2"),
      S("mixed-box:1:2", "cube:2")};
  for (const auto& s : specs) CHECK(embeds(s, s).holds());
}

TEST_CASE("property: idempotent rewrite") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> num(0, 12), pn(2, 12), pd(1, 4), dim(1, 4), fam(0, 4);
  for (int i = 0; i < 400; ++i) {
    ExtRational s(num(rng), pd(rng));
    ExtRational p = ExtRational(pn(rng), 2);
    ExtRational q = ExtRational(pn(rng), 2);
    int d = dim(rng);
    Family f;
    switch (fam(rng)) {
      case 0: f = family::Sobolev{s, p}; break;
      case 1: f = family::Slobodeckij{s, p}; break;
      case 2: f = family::Holder{ExtRational(1 + num(rng) % 4, 4)}; break;
      case 3: f = family::Besov{s, p, q}; break;
      default: f = family::TriebelLizorkin{s, p, q}; break;
    }
    auto spec = make_space(f, DomainSpec::cube(d));
    try {
      validate_space(spec);
    } catch (const ValidationError&) {
      continue;
    }
    auto once = rewrite_identifications(spec);
    CHECK(rewrite_identifications(once) == once);
  }
}

TEST_CASE("property: transitivity of holds and monotone smoothness") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> sn(0, 16), pn(2, 10), fine(2, 8);
  int chained = 0;
  for (int i = 0; i < 3000; ++i) {
    const int d = 1 + i % 3;
    auto rnd = [&] {
      ExtRational s(sn(rng), 4);
      ExtRational p(pn(rng), 2);
      ExtRational q(fine(rng), 2);
      if (rng() % 2) return make_space(family::TriebelLizorkin{s, p, q}, DomainSpec::cube(d));
      return make_space(family::Besov{s, p, q}, DomainSpec::cube(d));
    };
    auto E = rnd(), G = rnd(), F = rnd();
    if (embeds(E, G).holds() && embeds(G, F).holds()) {
      ++chained;
      CHECK_FALSE(embeds(E, F).fails());
      CHECK(compose({E, G, F}).holds());
    }
  }
  CHECK(chained > 50);

  for (int i = 0; i < 500; ++i) {
    const int d = 1 + i % 3;
    ExtRational s(sn(rng), 4), t(sn(rng), 4), p1(pn(rng), 2), p2(pn(rng), 2), q(fine(rng), 2);
    auto F = tl(t, p2, q, d);
    if (embeds(tl(s, p1, q, d), F).holds()) {
      CHECK(embeds(tl(s + Q(1, 3), p1, q, d), F).holds());
      CHECK(embeds(tl(s + 2, p1, q, d), F).holds());
    }
  }
}

TEST_CASE("compose reports the failing link") {
  auto v = compose({S("lp:1", "seq"), S("lp:2", "seq"), S("lp:1", "seq")});
  CHECK(v.status == EmbedStatus::Undetermined);
  CHECK(v.reason.rfind("link 1", 0) == 0);
  CHECK_THROWS_AS(compose({S("lp:1", "seq")}), Error);
}

TEST_CASE("rule registry") {
  for (const char* tag : {"ID", "R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9", "R10",
                          "R11", "D1", "D2", "D3", "D4", "D5", "D6", "T1", "T2", "T3", "T4"}) {
    const RuleInfo* r = rule_info(tag);
    REQUIRE(r != nullptr);
    CHECK_FALSE(r->statement.empty());
  }
  CHECK(rule_info("nope") == nullptr);
}
