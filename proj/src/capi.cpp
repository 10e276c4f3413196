#include "sandwich.h"

#include <new>
#include <sstream>
#include <string>

#include "sandwich/report.hpp"

using namespace sandwich;

struct sw_context {
  report::RunContext run = report::RunContext::from_env();
  std::string error;
};

struct sw_report {
  report::Report value;
  std::string json;
  std::string csv;
  bool has_csv = false;
};

namespace {

std::vector<std::string> split(const char* text, char sep) {
  std::vector<std::string> out;
  if (!text) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string str_or(const char* s, const char* fallback) { return s ? s : fallback; }

template <class F>
sw_status guarded(sw_context* ctx, sw_report** out, F&& make) {
  if (!ctx || !out) return SW_ERR_NULL_ARGUMENT;
  *out = nullptr;
  ctx->error.clear();
  try {
    auto* r = new sw_report{make(), {}, {}, false};
    r->json = r->value.dump();
    if (r->value.command == "scan") {
      r->csv = report::scan_csv(r->value);
      r->has_csv = true;
    }
    *out = r;
    return SW_OK;
  } catch (const Error& e) {
    ctx->error = e.what();
    return static_cast<sw_status>(e.code());
  } catch (const std::bad_alloc&) {
    ctx->error = "out of memory";
  } catch (const std::exception& e) {
    ctx->error = e.what();
  }
  return SW_ERR_INTERNAL;
}

}  // namespace

extern "C" {

const char* sw_version(void) { return report::tool_version(); }

const char* sw_status_name(sw_status s) {
  if (s == SW_OK) return "ok";
  if (s == SW_ERR_NULL_ARGUMENT) return "null-argument";
  if (s == SW_ERR_INTERNAL) return "internal";
  if (s >= SW_ERR_PARSE && s <= SW_ERR_UNSUPPORTED) return to_string(static_cast<ErrorCode>(s));
  return "unknown";
}

int sw_status_exit_code(sw_status s) {
  if (s == SW_OK) return 0;
  if (s >= SW_ERR_PARSE && s <= SW_ERR_UNSUPPORTED) return report::exit_code(static_cast<ErrorCode>(s));
  if (s == SW_ERR_NULL_ARGUMENT) return 64;
  return 70;
}

sw_context* sw_context_new(void) { return new (std::nothrow) sw_context; }

void sw_context_free(sw_context* ctx) { delete ctx; }

sw_status sw_context_set_seed(sw_context* ctx, uint64_t seed) {
  if (!ctx) return SW_ERR_NULL_ARGUMENT;
  ctx->run.seed = seed;
  return SW_OK;
}

sw_status sw_context_set_quadrature(sw_context* ctx, const char* profile) {
  if (!ctx || !profile) return SW_ERR_NULL_ARGUMENT;
  try {
    lab::quadrature_profile(profile);
  } catch (const Error& e) {
    ctx->error = e.what();
    return static_cast<sw_status>(e.code());
  }
  ctx->run.quadrature_profile = profile;
  return SW_OK;
}

const char* sw_last_error(const sw_context* ctx) { return ctx ? ctx->error.c_str() : ""; }

sw_status sw_decide(sw_context* ctx, const char* from, const char* to, const char* domain, sw_report** out) {
  if (!from || !to) return SW_ERR_NULL_ARGUMENT;
  return guarded(ctx, out, [&] {
    return report::cmd_decide({from, to, str_or(domain, "")}, ctx->run);
  });
}

sw_status sw_scan(sw_context* ctx, const char* from, const char* to, const char* domain, const char* deltas,
                  const sw_recipe_flags* recipe, sw_report** out) {
  if (!from || !to || !deltas) return SW_ERR_NULL_ARGUMENT;
  return guarded(ctx, out, [&] {
    report::ScanArgs a;
    a.from = from;
    a.to = to;
    a.domain = str_or(domain, "");
    a.deltas = split(deltas, ',');
    if (recipe) {
      a.construction = str_or(recipe->construction, "");
      a.mode = str_or(recipe->mode, "");
      a.predicted = str_or(recipe->predicted, "");
      for (const std::string& kv : split(recipe->params, ';')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Parse, "recipe parameter '" + kv + "' is not k=v");
        a.params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    }
    return report::cmd_scan(a, ctx->run);
  });
}

sw_status sw_table(sw_context* ctx, const char* from_template, const char* to_template, const char* domain,
                   const char* variables, sw_report** out) {
  if (!from_template || !to_template || !variables) return SW_ERR_NULL_ARGUMENT;
  return guarded(ctx, out, [&] {
    report::TableArgs a;
    a.from_template = from_template;
    a.to_template = to_template;
    a.domain = str_or(domain, "");
    for (const std::string& v : split(variables, ';')) {
      const auto eq = v.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::Parse, "grid variable '" + v + "' is not name=values");
      a.variables.emplace_back(v.substr(0, eq), split(v.c_str() + eq + 1, ','));
    }
    return report::cmd_table(a, ctx->run);
  });
}

sw_status sw_packing(sw_context* ctx, const char* domain, const char* deltas, const char* alpha, sw_report** out) {
  if (!domain || !deltas) return SW_ERR_NULL_ARGUMENT;
  return guarded(ctx, out, [&] {
    return report::cmd_packing({domain, split(deltas, ','), str_or(alpha, "1")}, ctx->run);
  });
}

sw_status sw_irkbs(sw_context* ctx, const sw_irkbs_args* args, sw_report** out) {
  if (!args || !args->series) return SW_ERR_NULL_ARGUMENT;
  return guarded(ctx, out, [&] {
    report::IrkbsArgs a;
    a.series = args->series;
    if (args->truncation != 0) a.truncation = args->truncation;
    a.domain_radius = str_or(args->domain_radius, "inf");
    a.measure_class = str_or(args->measure_class, "all");
    a.support_radius = str_or(args->support_radius, "inf");
    a.beta_sup = str_or(args->beta_sup, "1");
    a.beta_support = str_or(args->beta_support, "inf");
    return report::cmd_irkbs(a, ctx->run);
  });
}

sw_status sw_report_parse(sw_context* ctx, const char* json, sw_report** out) {
  if (!json) return SW_ERR_NULL_ARGUMENT;
  return guarded(ctx, out, [&] { return report::Report::parse(json); });
}

const char* sw_report_json(const sw_report* r) { return r ? r->json.c_str() : nullptr; }

const char* sw_report_csv(const sw_report* r) { return r && r->has_csv ? r->csv.c_str() : nullptr; }

const char* sw_report_command(const sw_report* r) { return r ? r->value.command.c_str() : nullptr; }

int sw_report_exit_code(const sw_report* r) { return r ? r->value.exit_code : 70; }

void sw_report_free(sw_report* r) { delete r; }

}  // extern "C"
