/* SPDX-License-Identifier: Apache-2.0 */
#ifndef POLYFLOW_H
#define POLYFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(POLYFLOW_BUILDING)
#define PF_API __attribute__((visibility("default")))
#else
#define PF_API
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_PARSE = 1,      /* malformed net, CSV or certificate text */
  PF_ERR_DOMAIN = 2,     /* invalid surface, singular start, failed check */
  PF_ERR_ARGUMENT = 3,   /* bad argument: unknown slope, edge out of range */
  PF_ERR_HYPOTHESIS = 4, /* a cascade left its guaranteed envelope */
  PF_ERR_LIMIT = 5,      /* a search cap was exceeded */
  PF_ERR_INTERNAL = 6
} pf_status;

/* Validated surface plus the named slopes of the document it came from. */
typedef struct pf_surface pf_surface;

PF_API const char* pf_version(void);

/* Message for the last failing call on this thread; "" after success. */
PF_API const char* pf_last_error(void);

/* Frees strings returned through char** out parameters. */
PF_API void pf_string_free(char* s);

/* Net text to a surface. On PF_ERR_PARSE the error holds one
   "line:column: message" per line; on PF_ERR_DOMAIN the surface violations. */
PF_API pf_status pf_surface_parse(const char* text, size_t len, pf_surface** out);
/* Regular-octagon surface over Q(sqrt2, cbrt3) with slope alpha = cbrt(3)/2. */
PF_API pf_status pf_surface_octagon(pf_surface** out);
PF_API void pf_surface_free(pf_surface* s);

PF_API size_t pf_surface_edge_count(const pf_surface* s);
PF_API long pf_surface_genus(const pf_surface* s);

/* Canonical net text; with_summary adds face count, genus and total
   vertical length comments. */
PF_API pf_status pf_surface_serialize(const pf_surface* s, int with_summary, char** out);

/* Validation report for net text, produced even for invalid surfaces.
   *valid is 1 when the surface is sound. Parse errors give PF_ERR_PARSE. */
PF_API pf_status pf_validate(const char* text, size_t len, int as_json, char** out, int* valid);

/* Four-copy unfolding of a table net (unglued sides are walls). */
PF_API pf_status pf_unfold(const char* text, size_t len, char** out);

/* Slopes are a document slope name or an expression over the tower.
   Edges are 1-based. Exact values use canonical expression text. */

/* Crossings CSV. max_time (arc length, rational text) may be NULL. */
PF_API pf_status pf_trace_csv(const pf_surface* s, const char* slope, size_t edge, const char* y,
                              long max_crossings, const char* max_time, int reverse, char** out);

/* Oracle and cascade visiting times for the open interval (lo, hi) on edge,
   as JSON including the cascade certificate. */
PF_API pf_status pf_visit_json(const pf_surface* s, const char* slope, size_t edge, const char* lo,
                               const char* hi, char** out);
/* Certificate JSON alone. */
PF_API pf_status pf_certificate_json(const pf_surface* s, const char* slope, size_t edge, const char* lo,
                                     const char* hi, char** out);

/* Re-executes a certificate; *tau_out gets the replayed displacement. A
   mismatch gives PF_ERR_DOMAIN. */
PF_API pf_status pf_replay(const pf_surface* s, const char* certificate_json, char** tau_out);

/* Gap profile CSV on edge for comma-separated rational horizons. The segment
   is centred at (start_edge, start_y); start_y NULL means the middle. */
PF_API pf_status pf_gaps_csv(const pf_surface* s, const char* slope, size_t edge, size_t start_edge,
                             const char* start_y, const char* horizons, char** out);

/* Least horizons with maximum gap <= 1/n for comma-separated targets. */
PF_API pf_status pf_passage_csv(const pf_surface* s, const char* slope, size_t edge, size_t start_edge,
                                const char* start_y, const char* targets, long max_events, char** out);

/* Fit report from a gap-profile or passage CSV. tower is "r^2=2, ..." text
   for exact comparisons, or NULL to compare through the decimal column. */
PF_API pf_status pf_fit(const char* csv, size_t len, const char* targets, const char* tower, int as_json,
                        char** out);

/* preset: "golden", "sqrt2m1" or "octagon". *passed is 1 when the bound
   holds over the whole range. */
PF_API pf_status pf_diophantine(const char* preset, long n_max, int as_json, char** out, int* passed);

#ifdef __cplusplus
}
#endif

#endif
