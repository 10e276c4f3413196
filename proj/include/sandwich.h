#ifndef SANDWICH_H
#define SANDWICH_H

#include <stdint.h>

#if defined(__GNUC__)
#define SW_API __attribute__((visibility("default")))
#else
#define SW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1..15 mirror the core error categories. */
typedef enum sw_status {
  SW_OK = 0,
  SW_ERR_PARSE = 1,
  SW_ERR_VALIDATION = 2,
  SW_ERR_PARAMETER_RANGE = 3,
  SW_ERR_DOMAIN_MISMATCH = 4,
  SW_ERR_PRECONDITION = 5,
  SW_ERR_NOT_IDENTIFIABLE = 6,
  SW_ERR_ACCURACY = 7,
  SW_ERR_DIVERGENCE = 8,
  SW_ERR_MODE = 9,
  SW_ERR_DOMAIN_TOO_SMALL = 10,
  SW_ERR_DEGENERATE_FIT = 11,
  SW_ERR_OUT_OF_DOMAIN = 12,
  SW_ERR_GRID_TOO_LARGE = 13,
  SW_ERR_EMPTY_INPUT = 14,
  SW_ERR_UNSUPPORTED = 15,
  SW_ERR_NULL_ARGUMENT = 90,
  SW_ERR_INTERNAL = 99
} sw_status;

typedef struct sw_context sw_context;
typedef struct sw_report sw_report;

SW_API const char* sw_version(void);
SW_API const char* sw_status_name(sw_status s);
/* Process exit code for a failed call: 64 parse, 65 validation, 70 numerical. */
SW_API int sw_status_exit_code(sw_status s);

/* Seed 1 and the quadrature profile from SANDWICH_QUADRATURE ("default" when unset). */
SW_API sw_context* sw_context_new(void);
SW_API void sw_context_free(sw_context* ctx);
SW_API sw_status sw_context_set_seed(sw_context* ctx, uint64_t seed);
/* "fast", "default" or "accurate". */
SW_API sw_status sw_context_set_quadrature(sw_context* ctx, const char* profile);
/* Message of the last failed call on this context, "" otherwise. */
SW_API const char* sw_last_error(const sw_context* ctx);

/* Spaces use family:param:param syntax ("besov:2:2:2", "lp:inf"),
 * domains "cube:3", "cube:2:1/4", "ball:2", "rd:2", "seq". Lists are comma
 * separated rationals ("1/4,1/8"). A NULL or empty domain means "seq" for
 * sequence families and "cube:1" otherwise. */
SW_API sw_status sw_decide(sw_context* ctx, const char* from, const char* to, const char* domain,
                           sw_report** out);

/* Optional explicit recipe. NULL fields are ignored; params is "k=v;k=v". */
typedef struct sw_recipe_flags {
  const char* construction;
  const char* mode;
  const char* predicted;
  const char* params;
} sw_recipe_flags;

SW_API sw_status sw_scan(sw_context* ctx, const char* from, const char* to, const char* domain,
                         const char* deltas, const sw_recipe_flags* recipe, sw_report** out);

/* Templates contain {name} placeholders; variables is "p=1,3/2,2;q=2,inf". */
SW_API sw_status sw_table(sw_context* ctx, const char* from_template, const char* to_template,
                          const char* domain, const char* variables, sw_report** out);

SW_API sw_status sw_packing(sw_context* ctx, const char* domain, const char* deltas, const char* alpha,
                            sw_report** out);

/* NULL string fields take the defaults: truncation 24 (when 0), domain radius
 * inf, measure class "all", support radius inf, beta 1 on all of X. */
typedef struct sw_irkbs_args {
  const char* series;
  int truncation;
  const char* domain_radius;
  const char* measure_class;
  const char* support_radius;
  const char* beta_sup;
  const char* beta_support;
} sw_irkbs_args;

SW_API sw_status sw_irkbs(sw_context* ctx, const sw_irkbs_args* args, sw_report** out);

/* Parses a serialized report. */
SW_API sw_status sw_report_parse(sw_context* ctx, const char* json, sw_report** out);

/* Strings stay valid until sw_report_free. */
SW_API const char* sw_report_json(const sw_report* r);
/* delta,n,ratio,mode rows for scan reports, NULL otherwise. */
SW_API const char* sw_report_csv(const sw_report* r);
SW_API const char* sw_report_command(const sw_report* r);
SW_API int sw_report_exit_code(const sw_report* r);
SW_API void sw_report_free(sw_report* r);

#ifdef __cplusplus
}
#endif

#endif
