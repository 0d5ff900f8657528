#ifndef ZETALIE_H
#define ZETALIE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZlAlgebra {
  ZL_ALGEBRA_DEPTH = 0,
  ZL_ALGEBRA_BLOCK = 1,
  ZL_ALGEBRA_EVEN = 2,
} ZlAlgebra;

typedef enum ZlStatus {
  ZL_STATUS_OK = 0,
  ZL_STATUS_NULL_ARGUMENT = 1,
  ZL_STATUS_INVALID_UTF8 = 2,
  ZL_STATUS_PARSE = 3,
  ZL_STATUS_PRECONDITION = 4,
  ZL_STATUS_RESOURCE_LIMIT = 5,
  ZL_STATUS_MATH = 6,
  ZL_STATUS_IO = 7,
  ZL_STATUS_PANIC = 8,
} ZlStatus;

// Opaque relation certificate handle.
typedef struct ZlCertificate ZlCertificate;

// Opaque polynomial handle.
typedef struct ZlPoly ZlPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or null. Valid until the next failing
// call on the same thread; do not free.
const char *zl_last_error(void);

// Library version; static, do not free.
const char *zl_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` is null or was returned by this library and not yet freed.
void zl_string_free(char *s);

// Evaluates a Lie polynomial such as `"[3,9] - 3*[5,7]"` in an algebra.
//
// # Safety
// `expr` is a NUL-terminated string; `out` is writable.
enum ZlStatus zl_bracket_eval(const char *expr, enum ZlAlgebra algebra, struct ZlPoly **out);

// # Safety
// `p` is null or a live handle.
void zl_poly_free(struct ZlPoly *p);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `p` is null or a live handle.
size_t zl_poly_nvars(const struct ZlPoly *p);

// # Safety
// `p` is null or a live handle.
bool zl_poly_is_zero(const struct ZlPoly *p);

// JSON form `{"nvars", "terms": [{"exp", "num", "den"}]}`.
//
// # Safety
// `p` is a live handle; `out` is writable.
enum ZlStatus zl_poly_to_json(const struct ZlPoly *p, char **out);

// Coefficient of the monomial with exponents `exps[0..len]`, as `"n"` or `"n/d"`.
//
// # Safety
// `p` is a live handle; `exps` points to `len` values; `out` is writable.
enum ZlStatus zl_poly_coeff(const struct ZlPoly *p, const uint32_t *exps, size_t len, char **out);

// Verifies a relation file given as JSON text.
//
// # Safety
// `json` is a NUL-terminated string; `out` is writable.
enum ZlStatus zl_verify_relation_json(const char *json, struct ZlCertificate **out);

// # Safety
// `c` is null or a live handle.
bool zl_certificate_is_verified(const struct ZlCertificate *c);

// Number of bracket words checked.
//
// # Safety
// `c` is null or a live handle.
size_t zl_certificate_word_count(const struct ZlCertificate *c);

// # Safety
// `c` is a live handle; `out` is writable.
enum ZlStatus zl_certificate_to_json(const struct ZlCertificate *c, char **out);

// # Safety
// `c` is null or a live handle.
void zl_certificate_free(struct ZlCertificate *c);

// Dictionary entry of a totally odd index such as `"z:{3,5}"`, written as
// `"scale * target"`.
//
// # Safety
// `zeta` is a NUL-terminated string; `out` is writable.
enum ZlStatus zl_dictionary(const char *zeta, char **out);

// Coefficient of `s^weight t^degree` in `1/(1 − O(s)t + S(s)t²)`.
//
// # Safety
// `out` is writable.
enum ZlStatus zl_uneven_bk_coefficient(uint32_t weight, uint32_t degree, int64_t *out);

// Rank of the Lyndon-spanned `(weight, degree)` component.
//
// # Safety
// `out` is writable.
enum ZlStatus zl_component_rank(enum ZlAlgebra algebra,
                                uint32_t weight,
                                uint32_t degree,
                                size_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ZETALIE_H */
