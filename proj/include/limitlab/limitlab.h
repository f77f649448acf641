#ifndef LIMITLAB_H
#define LIMITLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define LIMITLAB_API __attribute__((visibility("default")))
#else
#define LIMITLAB_API
#endif

typedef enum limitlab_status {
  LIMITLAB_OK = 0,
  LIMITLAB_INVALID_ARGUMENT = 1,
  LIMITLAB_NOT_SYMMETRIC_TRACELESS = 2,
  LIMITLAB_NON_UNIT_DIRECTOR = 3,
  LIMITLAB_DEGENERATE_BULK = 4,
  LIMITLAB_NOT_IN_RANGE = 5,
  LIMITLAB_GRID_MISMATCH = 6,
  LIMITLAB_BAD_EPSILON = 7,
  LIMITLAB_DEGENERATE_GAMMA = 8,
  LIMITLAB_NON_UNIT_FIELD = 9,
  LIMITLAB_NOT_CRITICAL = 10,
  LIMITLAB_CFL_VIOLATION = 11,
  LIMITLAB_STIFFNESS_VIOLATION = 12,
  LIMITLAB_STATE_BLOWUP = 13,
  LIMITLAB_INSUFFICIENT_POINTS = 14,
  LIMITLAB_NON_POSITIVE_ERROR = 15,
  LIMITLAB_CERTIFICATE_REFUSED = 16,
  LIMITLAB_INVALID_CONFIG = 17,
  LIMITLAB_IO = 18,
  LIMITLAB_INTERNAL = 99
} limitlab_status;

typedef struct limitlab_qs limitlab_qs;
typedef struct limitlab_el limitlab_el;

typedef struct limitlab_leslie {
  double alpha1, alpha2, alpha3, alpha4, alpha5, alpha6;
  double gamma1, gamma2;
  double inertia;
  double k1, k2, k3, k4;
} limitlab_leslie;

typedef struct limitlab_energy {
  double kinetic;
  double inertial;
  double free_energy;
  double total;
} limitlab_energy;

/* Message of the last failing call on this thread ("" if none). */
LIMITLAB_API const char* limitlab_last_error(void);
LIMITLAB_API const char* limitlab_status_name(limitlab_status s);
LIMITLAB_API void limitlab_string_free(char* s);

/* Configuration documents are JSON text; NULL or "" means all defaults. Returned
   JSON strings are owned by the caller and released with limitlab_string_free. */
LIMITLAB_API limitlab_status limitlab_resolve_config(const char* config_json, const char* preset, char** out_json);
LIMITLAB_API limitlab_status limitlab_map_leslie(const char* config_json, limitlab_leslie* out);
LIMITLAB_API limitlab_status limitlab_certificates(const char* config_json, char** out_json);

LIMITLAB_API limitlab_status limitlab_qs_create(const char* config_json, limitlab_qs** out);
LIMITLAB_API limitlab_status limitlab_qs_step(limitlab_qs* h, int steps);
LIMITLAB_API limitlab_status limitlab_qs_energy(limitlab_qs* h, limitlab_energy* out);
LIMITLAB_API limitlab_status limitlab_qs_time(const limitlab_qs* h, double* out);
LIMITLAB_API limitlab_status limitlab_qs_save_snapshot(const limitlab_qs* h, const char* path);
LIMITLAB_API void limitlab_qs_destroy(limitlab_qs* h);

LIMITLAB_API limitlab_status limitlab_el_create(const char* config_json, limitlab_el** out);
LIMITLAB_API limitlab_status limitlab_el_step(limitlab_el* h, int steps);
LIMITLAB_API limitlab_status limitlab_el_energy(limitlab_el* h, limitlab_energy* out);
LIMITLAB_API limitlab_status limitlab_el_time(const limitlab_el* h, double* out);
LIMITLAB_API limitlab_status limitlab_el_save_snapshot(const limitlab_el* h, const char* path);
LIMITLAB_API void limitlab_el_destroy(limitlab_el* h);

/* Whole experiments; each writes its files under out_dir and returns the summary. */
LIMITLAB_API limitlab_status limitlab_simulate_qs(const char* config_json, const char* out_dir, int force,
                                                  char** out_json);
LIMITLAB_API limitlab_status limitlab_simulate_el(const char* config_json, const char* out_dir, int force,
                                                  char** out_json);
LIMITLAB_API limitlab_status limitlab_sweep(const char* config_json, const char* out_dir, int threads, int force,
                                            char** out_json);
/* *passed is set to 1 when every snapshot satisfies the energy-law checks. */
LIMITLAB_API limitlab_status limitlab_validate_energy(const char* config_json, const char* snapshot_dir,
                                                      int* passed, char** out_json);
LIMITLAB_API limitlab_status limitlab_identity_suite(unsigned long long seed, int* passed, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
