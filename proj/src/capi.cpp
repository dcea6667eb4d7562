#include "g2lab/g2lab.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "g2lab/analysis.hpp"
#include "g2lab/analytic.hpp"
#include "g2lab/config_file.hpp"
#include "g2lab/frames.hpp"
#include "g2lab/montecarlo.hpp"
#include "g2lab/report.hpp"
#include "g2lab/scanline.hpp"

struct g2l_setup {
  g2lab::Setup value;
};
struct g2l_surface {
  g2lab::CorrelationSurface value;
};
struct g2l_section {
  g2lab::CrossSection value;
};
struct g2l_frames {
  g2lab::FrameStack value;
};
struct g2l_report {
  g2lab::RunReport value;
  std::string table;
  std::string records;
};

namespace {

using namespace g2lab;

thread_local std::string last_error;

g2l_status fail(g2l_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
g2l_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return G2L_OK;
  } catch (const Error& e) {
    return fail(static_cast<g2l_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(G2L_MEMORY_BUDGET, "out of memory");
  } catch (const std::exception& e) {
    return fail(G2L_INTERNAL, e.what());
  } catch (...) {
    return fail(G2L_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

SourceKind to_kind(g2l_source_kind k) {
  switch (k) {
    case G2L_THERMAL: return SourceKind::thermal;
    case G2L_ENTANGLED: return SourceKind::entangled;
    case G2L_COHERENT: return SourceKind::coherent_reference;
  }
  throw Error(ErrorCode::invalid_argument, "unknown source kind");
}

g2l_source_kind from_kind(SourceKind k) {
  switch (k) {
    case SourceKind::thermal: return G2L_THERMAL;
    case SourceKind::entangled: return G2L_ENTANGLED;
    case SourceKind::coherent_reference: break;
  }
  return G2L_COHERENT;
}

Normalization to_norm(g2l_normalization n) {
  switch (n) {
    case G2L_RAW: return Normalization::raw;
    case G2L_BACKGROUND_SUBTRACTED: return Normalization::background_subtracted;
    case G2L_UNIT_PEAK: return Normalization::unit_peak;
  }
  throw Error(ErrorCode::invalid_argument, "unknown normalization");
}

ScanLine to_line(const g2l_line& l) {
  ScanLine line{l.alpha, l.beta, ScanRange{l.x_min, l.x_max}, l.n_points, "", l.vertical != 0};
  line.validate();
  return line;
}

g2l_line from_line(const ScanLine& l) {
  return g2l_line{l.alpha, l.beta, l.range.x_min, l.range.x_max, l.n_points, l.vertical ? 1 : 0};
}

EnsembleConfig to_ensemble(const g2l_mc_options* o) {
  require(o != nullptr, "null Monte-Carlo options");
  require(o->n_realizations > 0, "n_realizations must be positive");
  EnsembleConfig e;
  e.n_realizations = o->n_realizations;
  e.rng_seed = o->seed;
  e.workers = o->workers;
  return e;
}

std::ofstream open_out(const char* path) {
  require(path != nullptr, "null path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, std::string("cannot open ") + path + " for writing");
  return out;
}

std::ifstream open_in(const char* path) {
  require(path != nullptr, "null path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, std::string("cannot open ") + path);
  return in;
}

void fill_report(const FringeReport& r, g2l_fringe_report* out, double* peaks, double* troughs,
                 std::size_t capacity) {
  if (out) {
    out->mean_spacing = r.mean_spacing;
    out->spacing_std = r.spacing_std;
    out->peak_spacing = r.peak_spacing;
    out->visibility = r.visibility;
    out->resolution_factor = r.resolution_factor.value_or(std::numeric_limits<double>::quiet_NaN());
    out->background_level = r.background_level;
    out->n_peaks = r.n_peaks;
    out->n_troughs = r.trough_positions.size();
  }
  if (peaks)
    std::copy_n(r.peak_positions.begin(), std::min(capacity, r.peak_positions.size()), peaks);
  if (troughs)
    std::copy_n(r.trough_positions.begin(), std::min(capacity, r.trough_positions.size()), troughs);
}

}  // namespace

extern "C" {

const char* g2l_last_error(void) { return last_error.c_str(); }

const char* g2l_status_name(g2l_status status) {
  switch (status) {
    case G2L_OK: return "ok";
    case G2L_INVALID_ARGUMENT: return "invalid_argument";
    case G2L_SAMPLING_VIOLATION: return "sampling_violation";
    case G2L_MEMORY_BUDGET: return "memory_budget";
    case G2L_EMPTY_RESULT: return "empty_result";
    case G2L_ZERO_INTENSITY: return "zero_intensity";
    case G2L_NO_SPACING: return "no_spacing";
    case G2L_UNSUPPORTED: return "unsupported";
    case G2L_IO: return "io";
    case G2L_PARSE: return "parse";
    case G2L_INTERNAL: return "internal";
  }
  return "unknown";
}

g2l_status g2l_setup_load(const char* name_or_path, g2l_setup** out) {
  return guarded([&] {
    require(name_or_path && out, "null argument");
    *out = new g2l_setup{load_setup(name_or_path)};
  });
}

void g2l_setup_free(g2l_setup* setup) { delete setup; }

g2l_status g2l_setup_set_grids(g2l_setup* setup, double source_half_extent, size_t source_samples,
                               double pixel_pitch, size_t detector_pixels) {
  return guarded([&] {
    require(setup != nullptr, "null setup");
    const OpticalConfig& o = setup->value.optics;
    SourceGrid src = o.source();
    DetectorGrid det = o.detector();
    if (source_half_extent != 0.0) src.half_extent = source_half_extent;
    if (source_samples != 0) src.n_samples = source_samples;
    if (pixel_pitch != 0.0) det.pixel_pitch = pixel_pitch;
    if (detector_pixels != 0) det.n_pixels = detector_pixels;
    setup->value.optics = OpticalConfig(o.wavelength(), o.distance(), src, det);
  });
}

g2l_status g2l_setup_info_get(const g2l_setup* setup, g2l_setup_info* out) {
  return guarded([&] {
    require(setup && out, "null argument");
    const auto& o = setup->value.optics;
    const auto& a = setup->value.aperture;
    const bool custom = a.kind() == ApertureSpec::Kind::custom;
    *out = g2l_setup_info{o.wavelength(),
                          o.distance(),
                          custom ? 0.0 : a.slit_width(),
                          custom ? 0.0 : a.slit_separation(),
                          o.source().half_extent,
                          o.source().n_samples,
                          o.detector().pixel_pitch,
                          o.detector().n_pixels,
                          custom ? 1 : 0};
  });
}

g2l_status g2l_setup_hash(const g2l_setup* setup, uint64_t* out) {
  return guarded([&] {
    require(setup && out, "null argument");
    *out = config_hash(setup->value.optics, setup->value.aperture);
  });
}

g2l_status g2l_setup_describe(const g2l_setup* setup, char* buf, size_t size, size_t* needed) {
  return guarded([&] {
    require(setup != nullptr, "null setup");
    const std::string text = describe(setup->value.optics, setup->value.aperture);
    if (needed) *needed = text.size() + 1;
    if (buf && size > 0) {
      const std::size_t n = std::min(size - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

g2l_status g2l_analytic_surface(const g2l_setup* setup, g2l_source_kind source, g2l_normalization normalization,
                                int entangled_envelope, size_t memory_budget_bytes, g2l_surface** out) {
  return guarded([&] {
    require(setup && out, "null argument");
    SurfaceOptions opts;
    opts.normalization = to_norm(normalization);
    opts.entangled_envelope = entangled_envelope != 0;
    if (memory_budget_bytes != 0) opts.memory_budget_bytes = memory_budget_bytes;
    *out = new g2l_surface{evaluate_surface(setup->value.optics, setup->value.aperture, to_kind(source), opts)};
  });
}

g2l_status g2l_monte_carlo(const g2l_setup* setup, const g2l_mc_options* options, g2l_surface** out,
                           double* mean_intensity) {
  return guarded([&] {
    require(setup && out, "null argument");
    G2Estimate est = estimate_g2(setup->value.aperture, setup->value.optics, to_ensemble(options));
    if (mean_intensity) std::copy(est.mean_intensity_1.begin(), est.mean_intensity_1.end(), mean_intensity);
    *out = new g2l_surface{std::move(est.correlation)};
  });
}

void g2l_surface_free(g2l_surface* surface) { delete surface; }

g2l_status g2l_surface_info_get(const g2l_surface* surface, g2l_surface_info* out) {
  return guarded([&] {
    require(surface && out, "null argument");
    const auto& s = surface->value;
    *out = g2l_surface_info{s.axis_x1().min,
                            s.axis_x1().max,
                            s.axis_x1().n,
                            s.axis_x2().min,
                            s.axis_x2().max,
                            s.axis_x2().n,
                            from_kind(s.source_kind()),
                            static_cast<g2l_normalization>(s.normalization()),
                            static_cast<g2l_provenance>(s.provenance()),
                            s.scale()};
  });
}

g2l_status g2l_surface_data(const g2l_surface* surface, const double** values, size_t* count) {
  return guarded([&] {
    require(surface && values && count, "null argument");
    *values = surface->value.values().data();
    *count = surface->value.values().size();
  });
}

g2l_status g2l_surface_subtract_background(g2l_surface* surface, double level) {
  return guarded([&] {
    require(surface != nullptr, "null surface");
    surface->value = subtract_background(surface->value, level);
  });
}

g2l_status g2l_surface_unit_peak(g2l_surface* surface) {
  return guarded([&] {
    require(surface != nullptr, "null surface");
    surface->value = normalize_to_unit_peak(surface->value);
  });
}

g2l_status g2l_surface_load(const char* path, g2l_surface** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_in(path);
    *out = new g2l_surface{read_matrix(in)};
  });
}

g2l_status g2l_surface_save(const g2l_surface* surface, const char* path) {
  return guarded([&] {
    require(surface != nullptr, "null surface");
    auto out = open_out(path);
    write_matrix(out, surface->value);
  });
}

g2l_status g2l_surface_save_csv(const g2l_surface* surface, const char* path) {
  return guarded([&] {
    require(surface != nullptr, "null surface");
    auto out = open_out(path);
    write_csv(out, surface->value);
  });
}

g2l_status g2l_line_preset(char letter, g2l_source_kind source, double x_min, double x_max, size_t n_points,
                           g2l_line* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const ScanLine line = ScanLine::preset(letter, to_kind(source), ScanRange{x_min, x_max}, n_points);
    line.validate();
    *out = from_line(line);
  });
}

g2l_status g2l_line_fit_range(const g2l_surface* surface, double alpha, double beta, double* x_min,
                              double* x_max) {
  return guarded([&] {
    require(surface && x_min && x_max, "null argument");
    const auto range = fit_range(surface->value, alpha, beta);
    if (!range) throw Error(ErrorCode::empty_result, "line does not cross the surface");
    *x_min = range->x_min;
    *x_max = range->x_max;
  });
}

g2l_status g2l_section_extract(const g2l_surface* surface, const g2l_line* line, g2l_section** out) {
  return guarded([&] {
    require(surface && line && out, "null argument");
    *out = new g2l_section{extract_cross_section(surface->value, to_line(*line))};
  });
}

void g2l_section_free(g2l_section* section) { delete section; }

g2l_status g2l_section_data(const g2l_section* section, const double** parameter, const double** values,
                            size_t* count, size_t* excluded) {
  return guarded([&] {
    require(section != nullptr, "null section");
    if (parameter) *parameter = section->value.parameter.data();
    if (values) *values = section->value.values.data();
    if (count) *count = section->value.values.size();
    if (excluded) *excluded = section->value.excluded;
  });
}

g2l_status g2l_section_line(const g2l_section* section, g2l_line* out) {
  return guarded([&] {
    require(section && out, "null argument");
    *out = from_line(section->value.line);
  });
}

g2l_status g2l_section_source(const g2l_section* section, g2l_source_kind* out) {
  return guarded([&] {
    require(section && out, "null argument");
    *out = from_kind(section->value.source_kind);
  });
}

g2l_status g2l_section_save_csv(const g2l_section* section, const char* path) {
  return guarded([&] {
    require(section != nullptr, "null section");
    auto out = open_out(path);
    write_section_csv(out, section->value);
  });
}

g2l_status g2l_section_load_csv(const char* path, g2l_section** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_in(path);
    *out = new g2l_section{read_section_csv(in)};
  });
}

g2l_status g2l_predict_spacing(const g2l_setup* setup, const g2l_line* line, g2l_source_kind source, int* flat,
                               double* spacing, double* factor) {
  return guarded([&] {
    require(setup && line && flat, "null argument");
    const auto p = predict_fringe_spacing(to_line(*line), setup->value.optics, setup->value.aperture,
                                          to_kind(source));
    const auto* s = std::get_if<Spacing>(&p);
    *flat = s ? 0 : 1;
    if (spacing) *spacing = s ? s->length : 0.0;
    if (factor) *factor = s ? s->resolution_factor : 0.0;
  });
}

g2l_status g2l_classical_baseline(const g2l_setup* setup, double* out) {
  return guarded([&] {
    require(setup && out, "null argument");
    *out = classical_baseline(setup->value.optics, setup->value.aperture);
  });
}

g2l_status g2l_peak_options_central(const g2l_setup* setup, const g2l_line* line, g2l_source_kind source,
                                    g2l_peak_options* out) {
  return guarded([&] {
    require(setup && line && out, "null argument");
    const ScanLine l = to_line(*line);
    const SourceKind kind = to_kind(source);
    const double baseline = classical_baseline(setup->value.optics, setup->value.aperture);
    const auto prediction = predict_fringe_spacing(l, setup->value.optics, setup->value.aperture, kind);
    const PeakOptions p = central_window_options(l, prediction, kind, baseline);
    *out = g2l_peak_options{p.min_prominence,
                            p.window_center && p.window_width ? 1 : 0,
                            p.window_center.value_or(0.0),
                            p.window_width.value_or(0.0),
                            0,
                            0.0,
                            p.classical_baseline.value_or(0.0)};
  });
}

g2l_status g2l_detect_peaks(const g2l_section* section, const g2l_peak_options* options,
                            g2l_fringe_report* report, double* peaks, double* troughs, size_t capacity) {
  return guarded([&] {
    require(section != nullptr, "null section");
    PeakOptions p;
    if (options) {
      if (options->min_prominence != 0.0) p.min_prominence = options->min_prominence;
      if (options->use_window) {
        p.window_center = options->window_center;
        p.window_width = options->window_width;
      }
      if (options->use_background) p.background = options->background;
      if (options->classical_baseline > 0.0) p.classical_baseline = options->classical_baseline;
    }
    try {
      fill_report(detect_peaks(section->value, p), report, peaks, troughs, capacity);
    } catch (const NoSpacingError& e) {
      fill_report(e.report(), report, peaks, troughs, capacity);
      throw;
    }
  });
}

g2l_status g2l_measure_visibility(const g2l_section* section, double window, double* out) {
  return guarded([&] {
    require(section && out, "null argument");
    *out = measure_visibility(section->value, window);
  });
}

g2l_status g2l_frames_synthesize(const g2l_setup* setup, const g2l_mc_options* options, double poisson_mean,
                                 g2l_frames** stack1, g2l_frames** stack2) {
  return guarded([&] {
    require(setup && stack1 && stack2, "null argument");
    NoiseModel noise;
    if (poisson_mean > 0.0) noise.poisson_mean = poisson_mean;
    auto [a, b] = synthesize_frames(setup->value.aperture, setup->value.optics, to_ensemble(options), noise);
    auto* first = new g2l_frames{std::move(a)};
    try {
      *stack2 = new g2l_frames{std::move(b)};
    } catch (...) {
      delete first;
      throw;
    }
    *stack1 = first;
  });
}

void g2l_frames_free(g2l_frames* frames) { delete frames; }

g2l_status g2l_frames_shape(const g2l_frames* frames, size_t* n_frames, size_t* n_pixels, double* pixel_pitch) {
  return guarded([&] {
    require(frames != nullptr, "null frames");
    if (n_frames) *n_frames = frames->value.n_frames;
    if (n_pixels) *n_pixels = frames->value.n_pixels;
    if (pixel_pitch) *pixel_pitch = frames->value.pixel_pitch;
  });
}

g2l_status g2l_frames_data(const g2l_frames* frames, const double** values, size_t* count) {
  return guarded([&] {
    require(frames && values && count, "null argument");
    *values = frames->value.data.data();
    *count = frames->value.data.size();
  });
}

g2l_status g2l_frames_save(const g2l_frames* frames, const char* path) {
  return guarded([&] {
    require(frames != nullptr, "null frames");
    auto out = open_out(path);
    write_frames(out, frames->value);
  });
}

g2l_status g2l_frames_load(const char* path, g2l_frames** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_in(path);
    *out = new g2l_frames{read_frames(in)};
  });
}

g2l_status g2l_frames_save_csv(const g2l_frames* frames, const char* path) {
  return guarded([&] {
    require(frames != nullptr, "null frames");
    auto out = open_out(path);
    write_frames_csv(out, frames->value);
  });
}

g2l_status g2l_frames_correlate(const g2l_frames* stack1, const g2l_frames* stack2, unsigned workers,
                                g2l_surface** out) {
  return guarded([&] {
    require(stack1 && stack2 && out, "null argument");
    *out = new g2l_surface{correlate_frames(stack1->value, stack2->value, workers)};
  });
}

g2l_status g2l_reproduce_paper(const g2l_reproduce_options* options, g2l_report** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    ReproduceOptions opts;
    if (options) {
      opts.seed = options->seed;
      opts.workers = options->workers;
      opts.include_monte_carlo = options->mc_realizations > 0;
      if (options->mc_realizations > 0) opts.mc_realizations = options->mc_realizations;
      if (options->scan_points > 0) opts.scan_points = options->scan_points;
    }
    RunReport r = reproduce_paper(opts);
    auto* report = new g2l_report{std::move(r), {}, {}};
    report->table = format_table(report->value);
    report->records = format_records(report->value);
    *out = report;
  });
}

void g2l_report_free(g2l_report* report) { delete report; }

const char* g2l_report_table(const g2l_report* report) { return report ? report->table.c_str() : ""; }

const char* g2l_report_records(const g2l_report* report) { return report ? report->records.c_str() : ""; }

int g2l_report_passed(const g2l_report* report) { return report && report->value.passed() ? 1 : 0; }

}  // extern "C"
