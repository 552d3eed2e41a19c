#ifndef KTS_KTS_H
#define KTS_KTS_H

/* C interface to the 3-pyramidal Kirkman triple system engine.
 *
 * Every function returns a kts_status. On failure kts_last_error() describes
 * the cause; the message is per thread and valid until the next call.
 * Strings returned through char** are owned by the caller and released with
 * kts_string_free; handles are released with kts_system_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KTS_API __declspec(dllexport)
#else
#define KTS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kts_status {
  KTS_OK = 0,
  KTS_INVALID = 1,       /* bad argument or unmet precondition */
  KTS_VERIFY_FAILED = 2, /* a verification or self-check failed */
  KTS_MALFORMED = 3,     /* input text could not be parsed */
  KTS_NOT_COVERED = 4,   /* admissible order outside the implemented routes, or not 3-pyramidal */
  KTS_INTERNAL = 5,      /* a construction contradicted its own invariants */
  KTS_UNKNOWN_ID = 6     /* no catalog entry with that id */
} kts_status;

typedef struct kts_system kts_system;

KTS_API const char* kts_last_error(void);
KTS_API const char* kts_status_name(kts_status status);
KTS_API void kts_string_free(char* s);

/* JSON object {order, case, n, [e, m,] covered, route, explanation}. */
KTS_API kts_status kts_classify(int64_t order, char** json_out);
/* JSON array of kts_classify objects for every order 9 <= v <= max_order with
 * v = 3 (mod 6); non-pyramidal orders are kept only when include_all != 0. */
KTS_API kts_status kts_coverage(int64_t max_order, int include_all, char** json_out);

/* Runs the order's route and assembles the verified system. */
KTS_API kts_status kts_construct(int64_t order, kts_system** out);
KTS_API kts_status kts_system_from_json(const char* text, kts_system** out);
KTS_API void kts_system_free(kts_system* s);

KTS_API kts_status kts_system_order(const kts_system* s, int64_t* order_out);
/* {order, group, points, blocks, resolution, trace?, automorphisms?}. The
 * trace exists for constructed systems or files that carried one; the
 * automorphism witness for constructed systems or files that carried one. */
KTS_API kts_status kts_system_to_json(const kts_system* s, int with_trace, int with_automorphisms, char** json_out);

/* level: "sts", "kts", "pyramidal" or "full". The report is a JSON array of
 * checks; at level "full" carried automorphism generators are checked too.
 * Returns KTS_VERIFY_FAILED, with the report set, when a check fails. */
KTS_API kts_status kts_verify(const kts_system* s, const char* level, char** report_out);

/* Lower bound |G| m and its order as computed by the generated group. */
KTS_API kts_status kts_automorphisms(const kts_system* s, int64_t* bound_out, int64_t* group_order_out);

/* JSON array of {id, description, verified}. */
KTS_API kts_status kts_catalog_list(char** json_out);
KTS_API kts_status kts_catalog_show(const char* id, char** json_out);

/* Acceptance criteria `ids[0..count)` (all eight when count is 0). One line
 * per criterion; KTS_VERIFY_FAILED when any fails. */
KTS_API kts_status kts_selftest(const int* ids, size_t count, uint64_t seed, char** text_out);

#ifdef __cplusplus
}
#endif

#endif
