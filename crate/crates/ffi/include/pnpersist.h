#ifndef PNPERSIST_H
#define PNPERSIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PnProperty {
  /**
   * Enabled stays enabled.
   */
  PN_PROPERTY_EE = 0,
  /**
   * Live stays live.
   */
  PN_PROPERTY_LL = 1,
  /**
   * Enabled stays live.
   */
  PN_PROPERTY_EL = 2,
  /**
   * Enabled fires again within `k` further steps.
   */
  PN_PROPERTY_ELK = 3,
} PnProperty;

typedef enum PnStatus {
  PN_STATUS_OK = 0,
  PN_STATUS_NULL_POINTER = 1,
  PN_STATUS_INVALID_UTF8 = 2,
  PN_STATUS_PARSE = 3,
  PN_STATUS_UNKNOWN_NAME = 4,
  PN_STATUS_UNSUPPORTED = 5,
  PN_STATUS_INVALID_ARGUMENT = 6,
  PN_STATUS_INTERNAL = 7,
} PnStatus;

typedef enum PnVerdict {
  PN_VERDICT_HOLDS = 0,
  PN_VERDICT_VIOLATED = 1,
  PN_VERDICT_UNKNOWN = 2,
} PnVerdict;

/**
 * Opaque handle to a parsed net.
 */
typedef struct PnNet PnNet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *pn_last_error(void);

/**
 * Library version as a static string.
 */
const char *pn_version(void);

/**
 * Parses a net from its text form into a new handle owned by the caller.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PnStatus pn_net_parse(const char *text, struct PnNet **out);

/**
 * Releases a handle from [`pn_net_parse`]. Null is ignored.
 *
 * # Safety
 * `net` must come from [`pn_net_parse`] and not be used afterwards.
 */
void pn_net_free(struct PnNet *net);

/**
 * Number of places, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t pn_net_place_count(const struct PnNet *net);

/**
 * Number of transitions, or 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t pn_net_transition_count(const struct PnNet *net);

/**
 * The net in its text form.
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum PnStatus pn_net_to_text(const struct PnNet *net, char **out);

/**
 * Whether every place of the net is bounded.
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum PnStatus pn_net_is_bounded(const struct PnNet *net, bool *out);

/**
 * Coverability graph of the net in DOT format.
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum PnStatus pn_net_coverability_dot(const struct PnNet *net, char **out);

/**
 * Decides a persistence property of the whole net. `k` is read only for
 * [`PnProperty::ELK`]; `budget` caps the markings stored by the reachability
 * oracle.
 *
 * # Safety
 * `net` must be a live handle and `out` a valid pointer.
 */
enum PnStatus pn_net_check(const struct PnNet *net,
                           enum PnProperty property,
                           uint32_t k,
                           size_t budget,
                           enum PnVerdict *out);

/**
 * Least `k` for which the net is e/l-k-persistent. `k_out` is written only
 * when the verdict is [`PnVerdict::Holds`]; `Violated` means some transition
 * can kill another.
 *
 * # Safety
 * `net` must be a live handle, `out` and `k_out` valid pointers.
 */
enum PnStatus pn_net_classify(const struct PnNet *net,
                              size_t budget,
                              enum PnVerdict *out,
                              uint32_t *k_out);

/**
 * Minimal reachable markings enabling both named transitions, as a JSON array
 * of arrays of token counts. `out` is set to null when the budget runs out
 * before the set is known.
 *
 * # Safety
 * `net` must be a live handle, `a` and `b` NUL-terminated strings and `out`
 * a valid pointer.
 */
enum PnStatus pn_net_min_re_json(const struct PnNet *net,
                                 const char *a,
                                 const char *b,
                                 size_t budget,
                                 char **out);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pn_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PNPERSIST_H */
