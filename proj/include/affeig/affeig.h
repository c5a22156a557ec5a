#ifndef AFFEIG_AFFEIG_H
#define AFFEIG_AFFEIG_H

#include <stddef.h>

#if defined(AFFEIG_BUILDING)
#define AFFEIG_API __attribute__((visibility("default")))
#else
#define AFFEIG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum affeig_status {
  AFFEIG_OK = 0,
  AFFEIG_ERR_INVALID_ARGUMENT = 1,
  AFFEIG_ERR_PARSE = 2,
  AFFEIG_ERR_IO = 3,
  AFFEIG_ERR_DEGENERATE = 4,
  AFFEIG_ERR_INFEASIBLE = 5,
  AFFEIG_ERR_INTERNAL = 6
} affeig_status;

typedef struct affeig_shape affeig_shape;
typedef struct affeig_function affeig_function;
typedef struct affeig_result affeig_result;

/* Message of the last failed call on this thread; empty after a success. */
AFFEIG_API const char* affeig_last_error(void);
AFFEIG_API const char* affeig_version(void);

/* Strings returned through char** are owned by the caller. */
AFFEIG_API void affeig_string_free(char* s);

AFFEIG_API affeig_status affeig_set_threads(int n);
AFFEIG_API int affeig_get_threads(void);

/* Shapes from JSON text, or from a file path or "builtin:NAME". */
AFFEIG_API affeig_status affeig_shape_from_json(const char* json, affeig_shape** out);
AFFEIG_API affeig_status affeig_shape_load(const char* path, affeig_shape** out);
AFFEIG_API affeig_status affeig_shape_to_json(const affeig_shape* shape, char** out);
AFFEIG_API affeig_status affeig_shape_area(const affeig_shape* shape, double* out);
AFFEIG_API affeig_status affeig_shape_transform(const affeig_shape* shape, const double matrix[4],
                                                const double translate[2], affeig_shape** out);
AFFEIG_API void affeig_shape_free(affeig_shape* shape);

/* Grid functions on a shape. Builtin names: bubble, cone, sine, linear, random:SEED. */
AFFEIG_API affeig_status affeig_function_builtin(const affeig_shape* shape, const char* name, double h,
                                                 affeig_function** out);
AFFEIG_API affeig_status affeig_function_load(const affeig_shape* shape, const char* path, affeig_function** out);
AFFEIG_API affeig_status affeig_function_to_json(const affeig_function* f, char** out);
AFFEIG_API void affeig_function_free(affeig_function* f);

/* max_width <= 0 omits the domain-dependent constant. */
AFFEIG_API affeig_status affeig_constants_json(int n, double p, double max_width, char** out);

/* op: polar, volume, santalo, centroid, projection. */
AFFEIG_API affeig_status affeig_body_json(const affeig_shape* shape, const char* op, double p, int directions,
                                          char** out);

AFFEIG_API affeig_status affeig_energy_json(const affeig_function* f, double p, int directions, char** out);

/* op: affine, classical, wulff (wulff needs body). */
AFFEIG_API affeig_status affeig_apply_json(const affeig_function* f, double p, const char* op,
                                           const affeig_shape* body, int directions, char** out);

typedef struct affeig_solve_options {
  double p;
  double h;
  int directions;
  int max_iterations;
  double tol_rel;
  const char* mode; /* affine | classical */
  const char* init; /* bump | classical-eigen | file */
  unsigned long long seed;
  int warm_start;
  int multistart;
  const affeig_function* init_function; /* used when init is "file" */
} affeig_solve_options;

AFFEIG_API void affeig_solve_options_default(affeig_solve_options* opts);
AFFEIG_API affeig_status affeig_eigensolve(const affeig_shape* shape, const affeig_solve_options* opts,
                                           affeig_result** out);
AFFEIG_API double affeig_result_lambda(const affeig_result* r);
AFFEIG_API int affeig_result_converged(const affeig_result* r);
/* certify adds the weak-form certificate (affine mode only). */
AFFEIG_API affeig_status affeig_result_json(const affeig_result* r, int include_minimizer, int certify, char** out);
AFFEIG_API void affeig_result_free(affeig_result* r);

/* family: disk, ellipse, rounded-square, affine-template, all. */
AFFEIG_API affeig_status affeig_cheeger_json(const affeig_shape* shape, const char* family, int budget, char** out);

typedef struct affeig_verify_options {
  double p;
  double h;
  int directions;
  unsigned long long seed;
  double tol_rel;
} affeig_verify_options;

AFFEIG_API void affeig_verify_options_default(affeig_verify_options* opts);
/* csv may be NULL. all_pass receives 1 when every report passes. */
AFFEIG_API affeig_status affeig_verify(const char* suite, const affeig_verify_options* opts, char** json, char** csv,
                                       int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
