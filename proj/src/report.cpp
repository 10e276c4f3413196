#include "sandwich/report.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include "sandwich/irkbs.hpp"
#include "sandwich/packing.hpp"

namespace sandwich::report {

using nlohmann::json;

const char* tool_version() { return "0.3.0"; }

namespace {

json quadrature_json(const std::string& profile, const lab::QuadratureConfig& q) {
  return {{"profile", profile},     {"scheme", lab::to_string(q.scheme)}, {"resolution", q.resolution},
          {"tolerance", q.tolerance}, {"max_levels", q.max_levels},          {"mc_samples", q.mc_samples}};
}

std::string rstr(const Rational& x) { return ExtRational(x).str(); }

json rlist(const std::vector<Rational>& v) {
  json a = json::array();
  for (const Rational& x : v) a.push_back(rstr(x));
  return a;
}

Rational parse_rational(const std::string& text, const std::string& field) {
  const ExtRational v = ExtRational::parse(text);
  if (v.is_infinite()) throw ValidationError(field, "must be finite, got '" + text + "'");
  return v.value();
}

void cite(std::vector<Citation>& out, std::set<std::string>& seen, const std::string& tag) {
  if (tag.empty() || !seen.insert(tag).second) return;
  const RuleInfo* info = rule_info(tag);
  if (!info) return;
  out.push_back({std::string(info->tag), std::string(info->name), std::string(info->statement)});
}

Report start(const char* command, const RunContext& ctx) {
  Report r;
  r.command = command;
  r.seed = ctx.seed;
  r.quadrature_profile = ctx.quadrature_profile;
  r.quadrature = ctx.quadrature();
  return r;
}

// Witness links are re-checked so their embedding rules can be cited.
void cite_verdict(Report& r, std::set<std::string>& seen, const Verdict& v) {
  cite(r.citations, seen, v.rule);
  if (!v.witness) return;
  const auto& links = v.witness->links;
  for (std::size_t i = 0; i + 1 < links.size(); ++i) cite(r.citations, seen, embeds(links[i], links[i + 1]).rule);
}

// Sequence families default to the sequence index, everything else to (0,1).
DomainSpec domain_for(const std::string& domain, const std::string& from) {
  if (!domain.empty()) return parse_domain(domain);
  const std::string name = from.substr(0, from.find(':'));
  if (name == "lp" || name == "seq" || name == "l") return DomainSpec::sequence();
  return DomainSpec::cube(1);
}

std::vector<Rational> parse_deltas(const std::vector<std::string>& deltas) {
  std::vector<Rational> out;
  for (const auto& d : deltas) out.push_back(parse_rational(d, "deltas"));
  return out;
}

}  // namespace

json Report::to_json() const {
  json cites = json::array();
  for (const auto& c : citations) cites.push_back({{"tag", c.tag}, {"name", c.name}, {"statement", c.statement}});
  return {{"schema", schema},
          {"version", version},
          {"command", command},
          {"query", query},
          {"seed", seed},
          {"quadrature", quadrature_json(quadrature_profile, quadrature)},
          {"result", result},
          {"citations", cites},
          {"exit_code", exit_code}};
}

Report Report::from_json(const json& j) {
  Report r;
  try {
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kSchema) throw Error(ErrorCode::Parse, "unknown report schema '" + r.schema + "'");
    r.version = j.at("version").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.query = j.at("query");
    r.seed = j.at("seed").get<std::uint64_t>();
    const json& q = j.at("quadrature");
    r.quadrature_profile = q.at("profile").get<std::string>();
    r.quadrature.scheme = lab::parse_scheme(q.at("scheme").get<std::string>());
    r.quadrature.resolution = q.at("resolution").get<int>();
    r.quadrature.tolerance = q.at("tolerance").get<double>();
    r.quadrature.max_levels = q.at("max_levels").get<int>();
    r.quadrature.mc_samples = q.at("mc_samples").get<int>();
    r.quadrature.seed = r.seed;
    r.result = j.at("result");
    for (const json& c : j.at("citations")) {
      r.citations.push_back({c.at("tag").get<std::string>(), c.at("name").get<std::string>(),
                             c.at("statement").get<std::string>()});
    }
    r.exit_code = j.at("exit_code").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

Report Report::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("report is not JSON: ") + e.what());
  }
  return from_json(j);
}

bool operator==(const Report& a, const Report& b) { return a.to_json() == b.to_json(); }

RunContext RunContext::from_env() {
  RunContext c;
  if (const char* v = std::getenv("SANDWICH_QUADRATURE"); v && *v) c.quadrature_profile = v;
  return c;
}

lab::QuadratureConfig RunContext::quadrature() const {
  lab::QuadratureConfig q = lab::quadrature_profile(quadrature_profile);
  q.seed = seed;
  return q;
}

int exit_code(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Feasible: return 0;
    case VerdictStatus::Infeasible: return 10;
    case VerdictStatus::Borderline: return 11;
    case VerdictStatus::Undetermined: return 12;
  }
  return 12;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return 64;
    case ErrorCode::Accuracy:
    case ErrorCode::Divergence:
    case ErrorCode::DegenerateFit: return 70;
    default: return 65;
  }
}

json to_json(const ObstructionRecipe& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v.str();
  return {{"violated",
           {{"lhs_expr", r.violated.lhs_expr},
            {"lhs", r.violated.lhs.str()},
            {"relation", r.violated.relation},
            {"rhs_expr", r.violated.rhs_expr},
            {"rhs", r.violated.rhs.str()}}},
          {"construction", to_string(r.construction)},
          {"predicted_exponent", r.predicted_exponent.str()},
          {"mode", to_string(r.mode)},
          {"source", r.source.str()},
          {"target", r.target.str()},
          {"params", params}};
}

json to_json(const Verdict& v) {
  json j = {{"status", to_string(v.status)}, {"rule", v.rule}, {"note", v.note}};
  if (v.witness) {
    json links = json::array();
    for (const auto& s : v.witness->links) links.push_back(s.str());
    json w = {{"links", links}, {"hilbert_index", v.witness->hilbert_index}};
    if (const auto& u = v.witness->u_interval) {
      w["u_interval"] = {{"lo", u->lo.str()},
                         {"hi", u->hi.str()},
                         {"lo_closed", u->lo_closed},
                         {"hi_closed", u->hi_closed},
                         {"text", u->str()}};
    }
    j["witness"] = w;
  }
  if (v.obstruction) j["obstruction"] = to_json(*v.obstruction);
  return j;
}

Report cmd_decide(const DecideArgs& a, const RunContext& ctx) {
  Report r = start("decide", ctx);
  r.query = {{"from", a.from}, {"to", a.to}, {"domain", a.domain}};
  const DomainSpec dom = domain_for(a.domain, a.from);
  r.query["domain"] = dom.str();
  const Verdict v = decide(parse_space(a.from, dom), parse_space(a.to, dom));
  r.result = to_json(v);
  std::set<std::string> seen;
  cite_verdict(r, seen, v);
  r.exit_code = exit_code(v.status);
  return r;
}

Report cmd_scan(const ScanArgs& a, const RunContext& ctx) {
  Report r = start("scan", ctx);
  json params = json::object();
  for (const auto& [k, v] : a.params) params[k] = v;
  r.query = {{"from", a.from},         {"to", a.to},     {"domain", a.domain},       {"deltas", a.deltas},
             {"construction", a.construction}, {"mode", a.mode}, {"predicted", a.predicted}, {"params", params}};
  const DomainSpec dom = domain_for(a.domain, a.from);
  r.query["domain"] = dom.str();
  const SpaceSpec E = parse_space(a.from, dom), F = parse_space(a.to, dom);
  ObstructionRecipe recipe;
  std::set<std::string> seen;
  if (!a.construction.empty()) {
    recipe.construction = parse_construction(a.construction);
    if (!a.mode.empty()) recipe.mode = parse_mode(a.mode);
    if (a.predicted.empty()) throw ValidationError("scan.predicted", "explicit recipes need a predicted exponent");
    recipe.predicted_exponent = ExtRational::parse(a.predicted);
    recipe.source = validate_space(E);
    recipe.target = validate_space(F);
    for (const auto& [k, v] : a.params) recipe.params[k] = ExtRational::parse(v);
    r.result["recipe_source"] = "flags";
  } else {
    const Verdict v = decide(E, F);
    if (v.status != VerdictStatus::Infeasible || !v.obstruction) {
      throw Error(ErrorCode::Precondition, std::string("scan needs an Infeasible verdict, got ") +
                                               to_string(v.status) + " (" + v.rule + ")");
    }
    recipe = *v.obstruction;
    cite_verdict(r, seen, v);
    r.result["recipe_source"] = "verdict";
  }
  const lab::ScanSeries s = lab::scan(recipe, parse_deltas(a.deltas), r.quadrature);
  json pts = json::array();
  for (const auto& p : s.points) {
    pts.push_back({{"delta", rstr(p.delta)}, {"n", p.n}, {"ratio", p.ratio}, {"e_value", p.e_value},
                   {"f_value", p.f_value}});
  }
  r.result["recipe"] = to_json(recipe);
  r.result["points"] = pts;
  r.result["mode"] = to_string(s.mode);
  r.result["slope"] = s.slope;
  r.result["intercept"] = s.intercept;
  r.result["residual"] = s.residual;
  r.result["predicted_exponent"] = s.predicted;
  r.result["functional_e"] = s.functional_e;
  r.result["functional_f"] = s.functional_f;
  return r;
}

std::string scan_csv(const Report& r) {
  if (r.command != "scan") throw Error(ErrorCode::Precondition, "CSV is only defined for scan reports");
  std::ostringstream os;
  os.precision(12);
  os << "delta,n,ratio,mode\n";
  const std::string mode = r.result.at("mode").get<std::string>();
  for (const json& p : r.result.at("points")) {
    os << p.at("delta").get<std::string>() << "," << p.at("n").get<int>() << "," << p.at("ratio").get<double>()
       << "," << mode << "\n";
  }
  return os.str();
}

namespace {

std::string substitute(std::string text, const std::map<std::string, std::string>& vars) {
  for (const auto& [k, v] : vars) {
    const std::string key = "{" + k + "}";
    for (std::size_t pos; (pos = text.find(key)) != std::string::npos;) text.replace(pos, key.size(), v);
  }
  if (text.find('{') != std::string::npos) {
    throw ValidationError("table.template", "unbound placeholder in '" + text + "'");
  }
  return text;
}

}  // namespace

Report cmd_table(const TableArgs& a, const RunContext& ctx) {
  Report r = start("table", ctx);
  json vars = json::array();
  for (const auto& [k, vs] : a.variables) vars.push_back({{"name", k}, {"values", vs}});
  r.query = {{"from", a.from_template}, {"to", a.to_template}, {"domain", a.domain}, {"variables", vars}};
  if (a.variables.empty()) throw ValidationError("table.variables", "a grid needs at least one variable");
  const std::size_t cap = std::min<std::size_t>(a.max_cells, 10000);
  std::size_t cells = 1;
  for (const auto& [k, vs] : a.variables) {
    if (vs.empty()) throw ValidationError("table.variables", "variable '" + k + "' has no values");
    if (cells > cap / vs.size() + 1) cells = cap + 1;
    else cells *= vs.size();
  }
  if (cells > cap) {
    throw Error(ErrorCode::GridTooLarge, "grid has more than " + std::to_string(cap) + " cells");
  }
  {
    std::map<std::string, std::string> first;
    for (const auto& [k, vs] : a.variables) first[k] = vs.front();
    substitute(a.from_template, first);
    substitute(a.to_template, first);
    substitute(a.domain, first);
  }
  std::set<std::string> seen;
  std::map<std::string, int> counts;
  json rows = json::array();
  std::vector<std::size_t> at(a.variables.size(), 0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::map<std::string, std::string> bind;
    for (std::size_t i = 0; i < at.size(); ++i) bind[a.variables[i].first] = a.variables[i].second[at[i]];
    json cell = {{"vars", bind}};
    try {
      const std::string from = substitute(a.from_template, bind), to = substitute(a.to_template, bind);
      const DomainSpec dom = domain_for(substitute(a.domain, bind), from);
      cell["from"] = from;
      cell["to"] = to;
      const Verdict v = decide(parse_space(from, dom), parse_space(to, dom));
      cell["verdict"] = to_json(v);
      cell["exit_code"] = exit_code(v.status);
      ++counts[to_string(v.status)];
      cite_verdict(r, seen, v);
    } catch (const Error& e) {
      cell["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
      cell["exit_code"] = exit_code(e.code());
      ++counts["error"];
    }
    rows.push_back(cell);
    for (std::size_t i = at.size(); i-- > 0;) {
      if (++at[i] < a.variables[i].second.size()) break;
      at[i] = 0;
    }
  }
  r.result = {{"cells", rows}, {"counts", counts}};
  return r;
}

Report cmd_packing(const PackingArgs& a, const RunContext& ctx) {
  Report r = start("packing", ctx);
  r.query = {{"domain", a.domain}, {"deltas", a.deltas}, {"alpha", a.alpha}};
  const DomainSpec dom = parse_domain(a.domain);
  const Rational alpha = parse_rational(a.alpha, "alpha");
  const std::vector<Rational> deltas = parse_deltas(a.deltas);
  if (deltas.empty()) throw ValidationError("packing.deltas", "at least one delta is needed");
  json pts = json::array();
  for (const Rational& d : deltas) {
    const PackingResult p = greedy_packing(dom, d, alpha);
    pts.push_back({{"delta", rstr(d)}, {"count", p.count}, {"maximal", p.maximal}, {"valid", verify_packing(p, dom)},
                   {"candidates", p.candidates}});
  }
  r.result["points"] = pts;
  if (deltas.size() >= 3) {
    const ExponentFit fit = exponent_fit(dom, deltas, alpha);
    r.result["slope"] = fit.slope;
    r.result["intercept"] = fit.intercept;
    r.result["residual"] = fit.residual;
  }
  if (auto k = packing_exponent(dom)) r.result["expected_exponent"] = (ExtRational(*k) / ExtRational(alpha)).str();
  std::set<std::string> seen;
  cite(r.citations, seen, "P1");
  return r;
}

Report cmd_irkbs(const IrkbsArgs& a, const RunContext& ctx) {
  Report r = start("irkbs", ctx);
  r.query = {{"series", a.series},
             {"truncation", a.truncation},
             {"domain_radius", a.domain_radius},
             {"measure_class", a.measure_class},
             {"support_radius", a.support_radius},
             {"beta_sup", a.beta_sup},
             {"beta_support", a.beta_support}};
  irkbs::SeriesSpec spec = irkbs::parse_series(a.series, a.truncation);
  spec.rho = ExtRational::parse(a.domain_radius);
  irkbs::MeasureClass m;
  m.kind = irkbs::parse_measure_kind(a.measure_class);
  m.support_radius = ExtRational::parse(a.support_radius);
  irkbs::Normalizing beta;
  beta.sup_abs = parse_rational(a.beta_sup, "beta_sup");
  beta.support_radius = ExtRational::parse(a.beta_support);
  const irkbs::DecompositionReport d = irkbs::check_applicability(spec, m, beta);
  auto radius = [](const irkbs::RadiusEstimate& e) {
    return json{{"value", e.str()}, {"method", irkbs::to_string(e.method)}, {"flagged", e.flagged},
                {"caveat", e.caveat}};
  };
  r.result = {{"sigma_plus", rlist(d.sigma_plus)},
              {"sigma_minus", rlist(d.sigma_minus)},
              {"radius_plus", radius(d.radius_plus)},
              {"radius_minus", radius(d.radius_minus)},
              {"radius", radius(d.radius)},
              {"psi_bounded", irkbs::to_string(d.psi_bounded)},
              {"applicability", irkbs::to_string(d.applicability)},
              {"required_integrability", d.required_integrability},
              {"diagonal_expression", d.diagonal_expression},
              {"chain", d.chain},
              {"effective_measures",
               {{"kind", irkbs::to_string(d.effective_measures.kind)},
                {"support_radius", d.effective_measures.support_radius.str()},
                {"tv_scale", rstr(d.effective_measures.tv_scale)}}},
              {"rewrite_agrees", d.rewrite_agrees},
              {"notes", d.notes}};
  if (d.diagonal_bound) r.result["diagonal_bound"] = *d.diagonal_bound;
  std::set<std::string> seen;
  cite(r.citations, seen, "K1");
  if (!beta.is_one()) cite(r.citations, seen, "K2");
  return r;
}

}  // namespace sandwich::report
