#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sandwich/report.hpp"

using namespace sandwich;
using namespace sandwich::report;
using nlohmann::json;

namespace {
ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

const std::vector<std::string> kGrid = {"1", "3/2", "2", "3", "inf"};
}  // namespace

TEST_CASE("decide reports") {
  Report r = cmd_decide({"lp:1", "lp:inf", ""});
  CHECK(r.schema == "sandwich-report/1");
  CHECK(r.exit_code == 0);
  CHECK(r.query["domain"] == "seq");
  CHECK(r.result["status"] == "feasible");
  CHECK(r.result["witness"]["links"] == json::array({"lp:1@seq", "lp:2@seq", "lp:inf@seq"}));

  r = cmd_decide({"holder:1", "sup", "cube:3"});
  CHECK(r.exit_code == 10);
  CHECK(r.result["obstruction"]["construction"].is_string());

  r = cmd_decide({"besov:2:2:2", "besov:2:2:2", "cube:2"});
  CHECK(r.exit_code == 0);

  r = cmd_decide({"holder:1", "sup", "cube:1"});
  CHECK(r.result["witness"]["u_interval"]["text"] == "(1/2, 1)");

  CHECK(code_of([] { cmd_decide({"besov:2:2", "sup", "cube:1"}); }) == ErrorCode::Parse);
  CHECK(code_of([] { cmd_decide({"holder:2", "sup", "cube:1"}); }) == ErrorCode::Validation);
}

TEST_CASE("round trip and determinism") {
  RunContext ctx;
  ctx.seed = 42;
  ctx.quadrature_profile = "fast";
  const std::vector<Report> reports = {
      cmd_decide({"slobodeckij:3/2:2", "slobodeckij:1/2:2", "cube:2"}, ctx),
      cmd_scan({"lp:3", "lp:4", "", {"1/4", "1/16", "1/64"}, "", "", "", {}}, ctx),
      cmd_packing({"cube:1", {"1/4", "1/8", "1/16"}, "1"}, ctx),
      cmd_irkbs({"cos", 24, "1", "all", "inf", "1", "inf"}, ctx),
      cmd_table({"lp:{p}", "lp:{q}", "", {{"p", kGrid}, {"q", kGrid}}}, ctx),
  };
  for (const Report& r : reports) {
    const Report back = Report::parse(r.dump());
    CHECK(back == r);
    CHECK(back.dump() == r.dump());
    CHECK(back.seed == 42);
    CHECK(back.quadrature.tolerance == r.quadrature.tolerance);
  }
  CHECK(cmd_scan({"lp:3", "lp:4", "", {"1/4", "1/16", "1/64"}, "", "", "", {}}, ctx).dump() == reports[1].dump());
  CHECK(code_of([] { Report::parse("{}"); }) == ErrorCode::Parse);
  CHECK(code_of([] { Report::parse("not json"); }) == ErrorCode::Parse);
}

TEST_CASE("citations carry registry statements") {
  const Report r = cmd_table({"lp:{p}", "lp:{q}", "", {{"p", kGrid}, {"q", kGrid}}});
  REQUIRE_FALSE(r.citations.empty());
  for (const Citation& c : r.citations) {
    const RuleInfo* info = rule_info(c.tag);
    REQUIRE(info != nullptr);
    CHECK(c.statement == info->statement);
  }
  const Report k = cmd_irkbs({"cos", 24, "inf", "all", "inf", "1/2", "inf"});
  REQUIRE(k.citations.size() == 2);
  CHECK(k.citations[0].tag == "K1");
  CHECK(k.citations[1].tag == "K2");
}

TEST_CASE("lp table: feasible exactly on p <= 2 <= q") {
  const Report r = cmd_table({"lp:{p}", "lp:{q}", "", {{"p", kGrid}, {"q", kGrid}}});
  for (const json& c : r.result["cells"]) {
    const ExtRational p = ExtRational::parse(c["vars"]["p"].get<std::string>());
    const ExtRational q = ExtRational::parse(c["vars"]["q"].get<std::string>());
    if (p > q) continue;
    const bool feasible = p <= ExtRational(2) && ExtRational(2) <= q;
    CHECK(c["verdict"]["status"] == (feasible ? "feasible" : "infeasible"));
  }
}

TEST_CASE("exit codes match cell verdicts") {
  std::vector<std::string> st;
  for (int i = 1; i <= 12; ++i) st.push_back(ExtRational(i, 4).str());
  const Report r = cmd_table({"slobodeckij:{s}:2", "slobodeckij:{t}:2", "cube:2", {{"s", st}, {"t", st}}});
  int feasible = 0;
  for (const json& c : r.result["cells"]) {
    if (c.contains("error")) {
      CHECK(c["exit_code"] == exit_code(ErrorCode::Precondition));
      continue;
    }
    const std::string status = c["verdict"]["status"];
    CHECK(status != "borderline");
    const ExtRational s = ExtRational::parse(c["vars"]["s"].get<std::string>());
    const ExtRational t = ExtRational::parse(c["vars"]["t"].get<std::string>());
    if (s > t) {
      CHECK(status == "feasible");
      ++feasible;
    }
    for (auto [name, code] : {std::pair{"feasible", 0}, {"infeasible", 10}, {"borderline", 11}, {"undetermined", 12}})
      if (status == name) CHECK(c["exit_code"] == code);
  }
  CHECK(feasible == 66);
}

TEST_CASE("mixed grid never feasible") {
  const Report r = cmd_table({"mixed-box:{a}:{p}", "mixed-box:{b}:{p}", "cube:2",
                              {{"a", {"1", "2", "3"}}, {"b", {"0", "1", "2"}}, {"p", {"2", "4"}}}});
  CHECK(r.result["counts"].value("feasible", 0) == 0);
}

TEST_CASE("grid limit") {
  std::vector<std::string> many;
  for (int i = 1; i <= 101; ++i) many.push_back(std::to_string(i));
  CHECK(code_of([&] { cmd_table({"lp:{p}", "lp:{q}", "", {{"p", many}, {"q", many}}}); }) ==
        ErrorCode::GridTooLarge);
  CHECK(code_of([] { cmd_table({"lp:{p}", "lp:{q}", "", {{"p", {"1"}}}}); }) == ErrorCode::Validation);
}

TEST_CASE("scan preconditions and csv") {
  CHECK(code_of([] { cmd_scan({"lp:1", "lp:inf", "", {"1/4", "1/8"}, "", "", "", {}}); }) ==
        ErrorCode::Precondition);
  const Report r = cmd_scan({"lp:3", "lp:4", "", {"1/4", "1/16", "1/64"}, "", "", "", {}});
  CHECK(r.result["slope"].get<double>() == doctest::Approx(1.0 / 6).epsilon(1e-9));
  const std::string csv = scan_csv(r);
  CHECK(csv.rfind("delta,n,ratio,mode\n1/4,4,", 0) == 0);
  // explicit recipe flags give the same series as the verdict
  const Report f = cmd_scan({"lp:3", "lp:4", "", {"1/4", "1/16", "1/64"}, "lp-unit-vectors", "cotype2", "1/6",
                             {{"p", "3"}, {"q", "4"}}});
  CHECK(f.result["points"] == r.result["points"]);
  CHECK(f.result["recipe_source"] == "flags");
}

TEST_CASE("quadrature profile from the environment") {
  setenv("SANDWICH_QUADRATURE", "accurate", 1);
  CHECK(RunContext::from_env().quadrature().tolerance == 1e-8);
  unsetenv("SANDWICH_QUADRATURE");
  CHECK(RunContext::from_env().quadrature_profile == "default");
}
