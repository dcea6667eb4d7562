#pragma once

/* C interface to the g2lab core. All lengths are SI meters unless a name
 * says otherwise. Handles are opaque and owned by the caller; release each
 * with its matching *_free function (NULL is accepted). Every function that
 * can fail returns a g2l_status and leaves a message in g2l_last_error(). */

#include <stddef.h>
#include <stdint.h>

#if defined(G2L_BUILDING)
#define G2L_API __attribute__((visibility("default")))
#else
#define G2L_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum g2l_status {
  G2L_OK = 0,
  G2L_INVALID_ARGUMENT = 1,
  G2L_SAMPLING_VIOLATION = 2,
  G2L_MEMORY_BUDGET = 3,
  G2L_EMPTY_RESULT = 4,
  G2L_ZERO_INTENSITY = 5,
  G2L_NO_SPACING = 6,
  G2L_UNSUPPORTED = 7,
  G2L_IO = 8,
  G2L_PARSE = 9,
  G2L_INTERNAL = 99
} g2l_status;

typedef enum g2l_source_kind { G2L_THERMAL = 0, G2L_ENTANGLED = 1, G2L_COHERENT = 2 } g2l_source_kind;
typedef enum g2l_normalization { G2L_RAW = 0, G2L_BACKGROUND_SUBTRACTED = 1, G2L_UNIT_PEAK = 2 } g2l_normalization;
typedef enum g2l_provenance { G2L_ANALYTIC = 0, G2L_MONTE_CARLO = 1 } g2l_provenance;

typedef struct g2l_setup g2l_setup;
typedef struct g2l_surface g2l_surface;
typedef struct g2l_section g2l_section;
typedef struct g2l_frames g2l_frames;
typedef struct g2l_report g2l_report;

/* Message for the most recent failure on this thread ("" if none). */
G2L_API const char* g2l_last_error(void);
G2L_API const char* g2l_status_name(g2l_status status);

/* ---- setup ------------------------------------------------------------ */

/* "paper" selects the built-in preset; anything else is an INI file path. */
G2L_API g2l_status g2l_setup_load(const char* name_or_path, g2l_setup** out);
G2L_API void g2l_setup_free(g2l_setup* setup);
/* Replaces the grids; 0 keeps the current value. Re-validates sampling. */
G2L_API g2l_status g2l_setup_set_grids(g2l_setup* setup, double source_half_extent, size_t source_samples,
                                       double pixel_pitch, size_t detector_pixels);

typedef struct g2l_setup_info {
  double wavelength;
  double distance;
  double slit_width;       /* 0 for custom apertures */
  double slit_separation;  /* 0 for custom apertures */
  double source_half_extent;
  size_t source_samples;
  double pixel_pitch;
  size_t detector_pixels;
  int custom_aperture;
} g2l_setup_info;

G2L_API g2l_status g2l_setup_info_get(const g2l_setup* setup, g2l_setup_info* out);
G2L_API g2l_status g2l_setup_hash(const g2l_setup* setup, uint64_t* out);
/* Copies a one-line description into buf (truncated, always terminated).
 * *needed receives the full length including the terminator. */
G2L_API g2l_status g2l_setup_describe(const g2l_setup* setup, char* buf, size_t size, size_t* needed);

/* ---- surfaces --------------------------------------------------------- */

typedef struct g2l_surface_info {
  double x1_min, x1_max;
  size_t x1_n;
  double x2_min, x2_max;
  size_t x2_n;
  g2l_source_kind source;
  g2l_normalization normalization;
  g2l_provenance provenance;
  double scale;
} g2l_surface_info;

/* memory_budget_bytes = 0 selects the default budget. */
G2L_API g2l_status g2l_analytic_surface(const g2l_setup* setup, g2l_source_kind source,
                                        g2l_normalization normalization, int entangled_envelope,
                                        size_t memory_budget_bytes, g2l_surface** out);

typedef struct g2l_mc_options {
  size_t n_realizations;
  uint64_t seed;
  unsigned workers; /* 0 = hardware concurrency */
} g2l_mc_options;

/* Raw g2 = <I1 I2>/(<I1><I2>). mean_intensity may be NULL, otherwise it
 * receives detector_pixels values. */
G2L_API g2l_status g2l_monte_carlo(const g2l_setup* setup, const g2l_mc_options* options, g2l_surface** out,
                                   double* mean_intensity);

G2L_API void g2l_surface_free(g2l_surface* surface);
G2L_API g2l_status g2l_surface_info_get(const g2l_surface* surface, g2l_surface_info* out);
/* Row-major values (row follows x1); valid until the surface is modified or freed. */
G2L_API g2l_status g2l_surface_data(const g2l_surface* surface, const double** values, size_t* count);
G2L_API g2l_status g2l_surface_subtract_background(g2l_surface* surface, double level);
G2L_API g2l_status g2l_surface_unit_peak(g2l_surface* surface);
G2L_API g2l_status g2l_surface_load(const char* path, g2l_surface** out);
G2L_API g2l_status g2l_surface_save(const g2l_surface* surface, const char* path);
G2L_API g2l_status g2l_surface_save_csv(const g2l_surface* surface, const char* path);

/* ---- scan lines ------------------------------------------------------- */

typedef struct g2l_line {
  double alpha;
  double beta;
  double x_min;
  double x_max;
  size_t n_points;
  int vertical; /* x1 held at beta, x2 = x */
} g2l_line;

/* Lettered presets 'a'..'d' for thermal and entangled sources. */
G2L_API g2l_status g2l_line_preset(char letter, g2l_source_kind source, double x_min, double x_max,
                                   size_t n_points, g2l_line* out);
/* Largest range along x2 = alpha x + beta that stays on the surface. */
G2L_API g2l_status g2l_line_fit_range(const g2l_surface* surface, double alpha, double beta, double* x_min,
                                      double* x_max);

G2L_API g2l_status g2l_section_extract(const g2l_surface* surface, const g2l_line* line, g2l_section** out);
G2L_API void g2l_section_free(g2l_section* section);
G2L_API g2l_status g2l_section_data(const g2l_section* section, const double** parameter, const double** values,
                                    size_t* count, size_t* excluded);
G2L_API g2l_status g2l_section_line(const g2l_section* section, g2l_line* out);
G2L_API g2l_status g2l_section_source(const g2l_section* section, g2l_source_kind* out);
/* CSV with header comments carrying line and surface metadata. */
G2L_API g2l_status g2l_section_save_csv(const g2l_section* section, const char* path);
G2L_API g2l_status g2l_section_load_csv(const char* path, g2l_section** out);

/* *flat is set to 1 for degenerate lines (spacing/factor left at 0). */
G2L_API g2l_status g2l_predict_spacing(const g2l_setup* setup, const g2l_line* line, g2l_source_kind source,
                                       int* flat, double* spacing, double* factor);
G2L_API g2l_status g2l_classical_baseline(const g2l_setup* setup, double* out);

/* ---- analysis --------------------------------------------------------- */

typedef struct g2l_peak_options {
  double min_prominence;   /* 0 selects the default */
  int use_window;
  double window_center;
  double window_width;
  int use_background;
  double background;
  double classical_baseline; /* 0 = no resolution factor */
} g2l_peak_options;

typedef struct g2l_fringe_report {
  double mean_spacing;
  double spacing_std;
  double peak_spacing;
  double visibility;
  double resolution_factor; /* NaN when unavailable */
  double background_level;
  size_t n_peaks;
  size_t n_troughs;
} g2l_fringe_report;

/* Central window of five predicted periods around the zeroth-order fringe. */
G2L_API g2l_status g2l_peak_options_central(const g2l_setup* setup, const g2l_line* line, g2l_source_kind source,
                                            g2l_peak_options* out);

/* On G2L_NO_SPACING the report and positions still describe what was found.
 * peaks / troughs may be NULL; otherwise they receive up to `capacity` values. */
G2L_API g2l_status g2l_detect_peaks(const g2l_section* section, const g2l_peak_options* options,
                                    g2l_fringe_report* report, double* peaks, double* troughs, size_t capacity);
G2L_API g2l_status g2l_measure_visibility(const g2l_section* section, double window, double* out);

/* ---- frames ----------------------------------------------------------- */

/* poisson_mean <= 0 gives noiseless frames. */
G2L_API g2l_status g2l_frames_synthesize(const g2l_setup* setup, const g2l_mc_options* options,
                                         double poisson_mean, g2l_frames** stack1, g2l_frames** stack2);
G2L_API void g2l_frames_free(g2l_frames* frames);
G2L_API g2l_status g2l_frames_shape(const g2l_frames* frames, size_t* n_frames, size_t* n_pixels,
                                    double* pixel_pitch);
G2L_API g2l_status g2l_frames_data(const g2l_frames* frames, const double** values, size_t* count);
G2L_API g2l_status g2l_frames_save(const g2l_frames* frames, const char* path);
G2L_API g2l_status g2l_frames_load(const char* path, g2l_frames** out);
G2L_API g2l_status g2l_frames_save_csv(const g2l_frames* frames, const char* path);
G2L_API g2l_status g2l_frames_correlate(const g2l_frames* stack1, const g2l_frames* stack2, unsigned workers,
                                        g2l_surface** out);

/* ---- reproduction report ---------------------------------------------- */

typedef struct g2l_reproduce_options {
  uint64_t seed;
  unsigned workers;
  size_t mc_realizations; /* 0 skips the Monte-Carlo row */
  size_t scan_points;     /* 0 selects the default */
} g2l_reproduce_options;

/* options may be NULL for defaults. */
G2L_API g2l_status g2l_reproduce_paper(const g2l_reproduce_options* options, g2l_report** out);
G2L_API void g2l_report_free(g2l_report* report);
/* Borrowed strings, valid until the report is freed. */
G2L_API const char* g2l_report_table(const g2l_report* report);
G2L_API const char* g2l_report_records(const g2l_report* report);
G2L_API int g2l_report_passed(const g2l_report* report);

#ifdef __cplusplus
}
#endif
