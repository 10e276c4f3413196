#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sandwich/errors.hpp"
#include "sandwich/space.hpp"

using namespace sandwich;

namespace {
ExtRational R(const char* s) { return ExtRational::parse(s); }
const ExtRational INF = ExtRational::infinity();
}  // namespace

TEST_CASE("parse and print") {
  CHECK(R("3/6") == ExtRational(1, 2));
  CHECK(R("2.2") == ExtRational(11, 5));
  CHECK(R("-0.25") == ExtRational(-1, 4));
  CHECK(R("inf").is_infinite());
  CHECK(R("∞").is_infinite());
  CHECK(R("7").str() == "7");
  CHECK(R("14/4").str() == "7/2");
  CHECK_THROWS_AS(R("1/0"), Error);
  CHECK_THROWS_AS(R("abc"), Error);
  CHECK_THROWS_AS(R(""), Error);
  CHECK_THROWS_AS(R("1.2.3"), Error);
}

TEST_CASE("infinity arithmetic") {
  CHECK(INF.reciprocal() == ExtRational(0));
  CHECK(INF > ExtRational(1000000));
  CHECK(INF == INF);
  CHECK(INF + ExtRational(3) == INF);
  CHECK(INF - ExtRational(3) == INF);
  CHECK(INF * ExtRational(2) == INF);
  CHECK_THROWS(ExtRational(3) - INF);
  CHECK_THROWS(INF * ExtRational(0));
  CHECK_THROWS(ExtRational(0).reciprocal());
  CHECK(dim_over(3, INF) == ExtRational(0));
}

TEST_CASE("pos_part") {
  CHECK(pos_part(3) == ExtRational(3));
  CHECK(pos_part(-2) == ExtRational(0));
  CHECK(pos_part(0) == ExtRational(0));
}

TEST_CASE("deficiency examples") {
  CHECK(deficiency(1, INF, 3) == ExtRational(3));
  CHECK(deficiency(2, 2, 5) == ExtRational(0));
  CHECK(deficiency(4, 4, 2) == ExtRational(1, 2));
  CHECK_THROWS_AS(deficiency(ExtRational(1, 2), 2, 1), Error);
  try {
    deficiency(ExtRational(1, 2), 2, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParameterRange);
  }
}

TEST_CASE("property: pos_part(x) + pos_part(-x) = |x|") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-500, 500), den(1, 60);
  for (int i = 0; i < 500; ++i) {
    ExtRational x(num(rng), den(rng));
    CHECK(pos_part(x) + pos_part(-x) == abs(x));
  }
}

TEST_CASE("property: deficiency structure") {
  std::vector<ExtRational> ps = {1, ExtRational(5, 4), ExtRational(3, 2), 2, ExtRational(5, 2), 3, 7, INF};
  for (int d = 1; d <= 5; ++d) {
    CHECK(deficiency(2, 2, d) == ExtRational(0));
    for (const auto& p1 : ps)
      for (const auto& p2 : ps) {
        auto a = pos_part(dim_over(d, p1) - ExtRational(d, 2));
        auto b = pos_part(ExtRational(d, 2) - dim_over(d, p2));
        auto def = deficiency(p1, p2, d);
        CHECK(def >= ExtRational(0));
        if (a > ExtRational(0) && b > ExtRational(0)) {
          CHECK(def == ExtRational(d) * (p1.reciprocal() - p2.reciprocal()));
        }
        if (p1 <= ExtRational(2) && ExtRational(2) <= p2 && def == ExtRational(0)) {
          CHECK(p1 == ExtRational(2));
          CHECK(p2 == ExtRational(2));
        }
      }
  }
}

TEST_CASE("coherent closure") {
  auto c1 = coherent_closure({{2, 0}}, 2);
  CHECK(c1.elements() == std::set<MultiIndex>{{0, 0}, {1, 0}, {2, 0}});
  auto c2 = coherent_closure({{1, 1}}, 2);
  CHECK(c2.elements() == std::set<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  auto c3 = coherent_closure({{0, 0}}, 2);
  CHECK(c3.elements() == std::set<MultiIndex>{{0, 0}});
  CHECK_THROWS_AS(coherent_closure({}, 2), Error);
  CHECK(c2.order() == 2);
  CHECK(CoherentSet::total_order(3, 2).order() == 2);
  CHECK(CoherentSet::box(2, 2).order() == 4);
  CHECK(CoherentSet::total_order(2, 2).elements().size() == 6);
}

TEST_CASE("property: closure idempotent and monotone") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> e(0, 3), cnt(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<MultiIndex> s, t;
    int n = cnt(rng);
    for (int i = 0; i < n; ++i) s.insert({e(rng), e(rng), e(rng)});
    t = s;
    t.insert({e(rng), e(rng), e(rng)});
    auto cs = coherent_closure(s, 3);
    CHECK(cs.is_coherent());
    CHECK(coherent_closure(cs.elements(), 3) == cs);
    auto ct = coherent_closure(t, 3);
    for (const auto& a : cs.elements()) CHECK(ct.contains(a));
  }
}

TEST_CASE("validate_space") {
  auto cube2 = DomainSpec::cube(2);
  CHECK_NOTHROW(validate_space(make_space(family::Holder{ExtRational(1, 2)}, cube2)));

  auto expect_invariant = [](const SpaceSpec& s, const std::string& inv) {
    try {
      validate_space(s);
      FAIL("expected a validation error for " << s.str());
    } catch (const ValidationError& e) {
      CHECK(e.invariant() == inv);
    }
  };
  expect_invariant(make_space(family::Holder{2}, cube2), "holder.alpha-range");
  expect_invariant(make_space(family::TriebelLizorkin{1, INF, 2}, cube2), "triebel.p-range");
  expect_invariant(make_space(family::Slobodeckij{1, 1}, cube2),
                   "slobodeckij.integer-s-needs-p-gt-1");
  expect_invariant(make_space(family::Slobodeckij{ExtRational(1, 2), INF}, cube2),
                   "slobodeckij.p-range");
  expect_invariant(make_space(family::Besov{1, ExtRational(1, 2), 2}, cube2), "besov.p-range");
  expect_invariant(make_space(family::SequenceLp{2}, cube2), "lp.domain");
  expect_invariant(
      make_space(family::MixedSobolev{CoherentSet(2, {{1, 1}}), 2}, cube2), "mixed.coherence");
  expect_invariant(make_space(family::Sobolev{-1, 2}, cube2), "sobolev.s-range");

  auto bad_metric = DomainSpec::finite({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  expect_invariant(make_space(family::Holder{1}, bad_metric), "domain.metric-triangle");
  auto asym = DomainSpec::finite({{0, 1}, {2, 0}});
  expect_invariant(make_space(family::Holder{1}, asym), "domain.metric-symmetry");
}

TEST_CASE("parse spaces and domains") {
  auto d = parse_domain("cube:3");
  CHECK(d.kind == DomainKind::UnitCube);
  CHECK(d.dimension == 3);
  CHECK(d.bounded());
  CHECK(parse_domain("cube:2:1/4").extent == Rational(1, 4));
  CHECK_FALSE(parse_domain("rd:2").bounded());
  CHECK_FALSE(parse_domain("seq").bounded());
  auto m = parse_domain("metric:0,1;1,0");
  CHECK(m.kind == DomainKind::FiniteMetricSet);
  CHECK(m.metric.size() == 2);

  auto s = parse_space("besov:1/2:inf:inf", parse_domain("cube:2"));
  CHECK(s.is<family::Besov>());
  CHECK(s.as<family::Besov>().p.is_infinite());
  CHECK(s.family_str() == "besov:1/2:inf:inf");
  CHECK(parse_family(s.family_str()) == s.family);

  auto mt = parse_space("mixed-total:2:3/2", parse_domain("cube:2"));
  CHECK(mt.as<family::MixedSobolev>().A.order() == 2);
  CHECK(parse_family("mixed:2:0,0;1,0", 2) ==
        Family(family::MixedSobolev{CoherentSet(2, {{0, 0}, {1, 0}}), 2}));

  CHECK_THROWS_AS(parse_family("besov:1:2"), Error);
  CHECK_THROWS_AS(parse_family("nonsense:1"), Error);
  CHECK_THROWS_AS(parse_domain("torus:2"), Error);
}
