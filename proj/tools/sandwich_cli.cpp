// Command-line front end. Talks to the library through sandwich.h only.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sandwich.h"

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

bool write_file(const std::string& path, const char* text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide whether embeddings between function spaces factor through a Hilbert space."};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  std::string quadrature, output;
  app.add_option("--seed", seed, "Random seed for Monte Carlo estimates")->default_val(1);
  app.add_option("--quadrature", quadrature, "Quadrature profile: fast, default, accurate");
  app.add_option("-o,--output", output, "Write the report here instead of stdout");
  app.add_flag_function("--version", [](std::int64_t) {
    std::cout << sw_version() << "\n";
    std::exit(0);
  }, "Print the version");

  std::string from, to, domain;
  auto* decide = app.add_subcommand("decide", "Decide one pair E -> F");
  decide->add_option("--from", from, "Source space, e.g. besov:2:2:2")->required();
  decide->add_option("--to", to, "Target space, e.g. sup")->required();
  decide->add_option("--domain", domain, "Domain, e.g. cube:3; seq for sequence spaces, cube:1 otherwise");

  std::vector<std::string> deltas, ns, params;
  std::string csv, construction, mode, predicted;
  auto* scan = app.add_subcommand("scan", "Measure the obstruction quotient along a delta sequence");
  scan->add_option("--from", from)->required();
  scan->add_option("--to", to)->required();
  scan->add_option("--domain", domain);
  auto* scan_d = scan->add_option("--deltas", deltas, "Separations, e.g. 1/4,1/8,1/16")->delimiter(',');
  scan->add_option("--n", ns, "Family sizes; delta = 1/n")->delimiter(',')->excludes(scan_d);
  scan->add_option("--csv", csv, "Write the series as CSV");
  scan->add_option("--construction", construction, "Explicit recipe construction");
  scan->add_option("--mode", mode, "Explicit recipe mode: type2 or cotype2");
  scan->add_option("--predicted", predicted, "Explicit recipe exponent");
  scan->add_option("--param", params, "Explicit recipe parameter k=v")->delimiter(';');

  std::string from_t, to_t;
  std::vector<std::string> vars;
  auto* table = app.add_subcommand("table", "Decide every cell of a parameter grid");
  table->add_option("--from", from_t, "Source template, e.g. lp:{p}")->required();
  table->add_option("--to", to_t, "Target template, e.g. lp:{q}")->required();
  table->add_option("--domain", domain, "Domain template");
  table->add_option("--var", vars, "Grid variable name=v1,v2,...")->required();

  std::string alpha = "1";
  auto* packing = app.add_subcommand("packing", "Greedy packings and the fitted exponent");
  packing->add_option("--domain", domain)->required();
  packing->add_option("--deltas", deltas)->delimiter(',')->required();
  packing->add_option("--alpha", alpha, "Metric power")->default_val("1");

  std::string series, radius = "inf", measures = "all", support = "inf", beta_sup = "1", beta_support = "inf";
  int truncation = 24;
  auto* irkbs = app.add_subcommand("irkbs", "Check the positive-decomposition embedding for a power series");
  irkbs->add_option("--series", series, "cos, cosh, exp, ones, geometric:r or a list 1,-1/2,...")->required();
  irkbs->add_option("--truncation", truncation)->default_val(24);
  irkbs->add_option("--domain-radius", radius, "Radius of the input ball, inf for R^d")->default_val("inf");
  irkbs->add_option("--measure-class", measures, "all or restricted")->default_val("all");
  irkbs->add_option("--support-radius", support, "Support radius of restricted measures")->default_val("inf");
  irkbs->add_option("--beta-sup", beta_sup, "sup |beta|")->default_val("1");
  irkbs->add_option("--beta-support", beta_support, "Support radius of beta")->default_val("inf");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return e.get_exit_code() == 0 ? rc : 64;
  }

  sw_context* ctx = sw_context_new();
  if (!ctx) return 70;
  sw_context_set_seed(ctx, seed);
  sw_status st = SW_OK;
  if (!quadrature.empty()) st = sw_context_set_quadrature(ctx, quadrature.c_str());

  sw_report* rep = nullptr;
  if (st == SW_OK) {
    if (*decide) {
      st = sw_decide(ctx, from.c_str(), to.c_str(), domain.c_str(), &rep);
    } else if (*scan) {
      for (const auto& n : ns) deltas.push_back("1/" + n);
      const std::string list = join(deltas, ",");
      const std::string plist = join(params, ";");
      sw_recipe_flags flags{opt(construction), opt(mode), opt(predicted), opt(plist)};
      st = sw_scan(ctx, from.c_str(), to.c_str(), domain.c_str(), list.c_str(),
                   construction.empty() ? nullptr : &flags, &rep);
    } else if (*table) {
      const std::string v = join(vars, ";");
      st = sw_table(ctx, from_t.c_str(), to_t.c_str(), domain.c_str(), v.c_str(), &rep);
    } else if (*packing) {
      st = sw_packing(ctx, domain.c_str(), join(deltas, ",").c_str(), alpha.c_str(), &rep);
    } else if (*irkbs) {
      sw_irkbs_args a{series.c_str(), truncation, radius.c_str(), measures.c_str(),
                      support.c_str(), beta_sup.c_str(), beta_support.c_str()};
      st = sw_irkbs(ctx, &a, &rep);
    }
  }
  if (st != SW_OK) {
    std::cerr << "error (" << sw_status_name(st) << "): " << sw_last_error(ctx) << "\n";
    sw_context_free(ctx);
    return sw_status_exit_code(st);
  }

  int rc = sw_report_exit_code(rep);
  if (output.empty()) {
    std::fputs(sw_report_json(rep), stdout);
  } else if (!write_file(output, sw_report_json(rep))) {
    std::cerr << "error: cannot write " << output << "\n";
    rc = 73;
  }
  if (!csv.empty() && sw_report_csv(rep) && !write_file(csv, sw_report_csv(rep))) {
    std::cerr << "error: cannot write " << csv << "\n";
    rc = 73;
  }
  sw_report_free(rep);
  sw_context_free(ctx);
  return rc;
}
