// g2lab command-line front end. Talks to the library only through g2lab.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "g2lab/g2lab.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ApiError : std::runtime_error {
  g2l_status status;
  ApiError(g2l_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(g2l_status s) {
  if (s != G2L_OK) throw ApiError(s, std::string(g2l_status_name(s)) + ": " + g2l_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using SetupPtr = std::unique_ptr<g2l_setup, Deleter<g2l_setup, g2l_setup_free>>;
using SurfacePtr = std::unique_ptr<g2l_surface, Deleter<g2l_surface, g2l_surface_free>>;
using SectionPtr = std::unique_ptr<g2l_section, Deleter<g2l_section, g2l_section_free>>;
using FramesPtr = std::unique_ptr<g2l_frames, Deleter<g2l_frames, g2l_frames_free>>;
using ReportPtr = std::unique_ptr<g2l_report, Deleter<g2l_report, g2l_report_free>>;

/// Lengths for people: mm, 3 significant figures.
std::string mm(double meters) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g mm", meters * 1e3);
  return buf;
}

std::string hex(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

g2l_source_kind parse_source(const std::string& s) {
  if (s == "thermal") return G2L_THERMAL;
  if (s == "entangled") return G2L_ENTANGLED;
  if (s == "coherent" || s == "coherent_reference") return G2L_COHERENT;
  throw CLI::ValidationError("--source", "expected thermal, entangled or coherent");
}

const char* source_name(g2l_source_kind k) {
  switch (k) {
    case G2L_THERMAL: return "thermal";
    case G2L_ENTANGLED: return "entangled";
    case G2L_COHERENT: break;
  }
  return "coherent_reference";
}

g2l_normalization parse_norm(const std::string& s) {
  if (s == "raw") return G2L_RAW;
  if (s == "background_subtracted") return G2L_BACKGROUND_SUBTRACTED;
  if (s == "unit_peak") return G2L_UNIT_PEAK;
  throw CLI::ValidationError("--normalization", "expected raw, background_subtracted or unit_peak");
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Globals {
  std::string config = "paper";
  std::uint64_t seed = 20140101;
  std::string out = ".";
  unsigned workers = 0;

  fs::path path(const std::string& name) const {
    fs::create_directories(out);
    return fs::path(out) / name;
  }

  SetupPtr setup() const {
    g2l_setup* s = nullptr;
    check(g2l_setup_load(config.c_str(), &s));
    return SetupPtr(s);
  }
};

// Grid overrides in mm / counts; zero keeps the configured value.
struct GridFlags {
  double source_half_extent_mm = 0.0;
  std::size_t source_samples = 0;
  double pixel_pitch_mm = 0.0;
  std::size_t detector_pixels = 0;

  void add(CLI::App* app) {
    app->add_option("--source-half-extent", source_half_extent_mm, "Source grid half extent [mm]");
    app->add_option("--source-samples", source_samples, "Source grid sample count");
    app->add_option("--pixel-pitch", pixel_pitch_mm, "Detector pixel pitch [mm]");
    app->add_option("--detector-pixels", detector_pixels, "Detector pixel count");
  }

  void apply(g2l_setup* s) const {
    if (source_half_extent_mm || source_samples || pixel_pitch_mm || detector_pixels)
      check(g2l_setup_set_grids(s, source_half_extent_mm * 1e-3, source_samples, pixel_pitch_mm * 1e-3,
                                detector_pixels));
  }
};

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

json surface_json(const g2l_surface* s) {
  g2l_surface_info info{};
  check(g2l_surface_info_get(s, &info));
  return {{"x1", {info.x1_min, info.x1_max, info.x1_n}},
          {"x2", {info.x2_min, info.x2_max, info.x2_n}},
          {"source", source_name(info.source)},
          {"scale", info.scale}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2lab: second-order correlation imaging simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Setup file, or 'paper' for the built-in preset")->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads (0 = all cores)")->capture_default_str();

  // analytic
  auto* analytic = app.add_subcommand("analytic", "Closed-form correlation surface");
  std::string a_source = "thermal", a_norm = "unit_peak", a_name;
  bool a_envelope = false, a_csv = false;
  GridFlags a_grids;
  analytic->add_option("--source", a_source, "thermal | entangled | coherent")->capture_default_str();
  analytic->add_option("--normalization", a_norm, "raw | background_subtracted | unit_peak")->capture_default_str();
  analytic->add_flag("--envelope", a_envelope, "Include the single-slit envelope (entangled)");
  analytic->add_flag("--csv", a_csv, "Also write x1,x2,value CSV");
  analytic->add_option("--name", a_name, "Output base name (default analytic_<source>)");
  a_grids.add(analytic);

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Ensemble estimate of g2 from speckle realizations");
  std::size_t mc_n = 20000;
  std::string mc_name = "montecarlo";
  GridFlags mc_grids;
  mc->add_option("-n,--realizations", mc_n, "Number of speckle realizations")->capture_default_str();
  mc->add_option("--name", mc_name, "Output base name")->capture_default_str();
  mc_grids.add(mc);

  // scan
  auto* scan = app.add_subcommand("scan", "Cross-section of a surface along x2 = alpha x1 + beta");
  std::string s_surface, s_preset, s_name, s_source;
  double s_alpha = 0.0, s_beta_mm = 0.0, s_xmin_mm = NAN, s_xmax_mm = NAN, s_vertical_mm = NAN;
  std::size_t s_points = 4001;
  bool s_json = false, s_analytic = false;
  GridFlags s_grids;
  auto* o_surface = scan->add_option("surface", s_surface, "Surface matrix file");
  auto* o_analytic = scan->add_flag("--analytic", s_analytic, "Evaluate the closed-form surface instead of reading one");
  scan->add_option("--source", s_source, "thermal | entangled (with --analytic; default thermal)");
  s_grids.add(scan);
  o_surface->excludes(o_analytic);
  auto* o_preset = scan->add_option("--preset", s_preset, "Lettered line a-d");
  auto* o_alpha = scan->add_option("--alpha", s_alpha, "Slope of x2 against x1");
  scan->add_option("--beta", s_beta_mm, "Offset of x2 [mm]");
  scan->add_option("--vertical", s_vertical_mm, "Hold x1 at this value [mm] and scan x2");
  scan->add_option("--x-min", s_xmin_mm, "Scan start [mm] (default: fit to surface)");
  scan->add_option("--x-max", s_xmax_mm, "Scan end [mm] (default: fit to surface)");
  scan->add_option("--points", s_points, "Samples along the line")->capture_default_str();
  scan->add_option("--name", s_name, "Output base name");
  scan->add_flag("--json", s_json, "Print the JSON record on stdout");
  o_preset->excludes(o_alpha);

  // peaks
  auto* peaks = app.add_subcommand("peaks", "Fringe spacing and visibility of a cross-section");
  std::string p_section;
  double p_prominence = 0.0, p_center_mm = NAN, p_width_mm = NAN, p_background = NAN;
  bool p_no_window = false, p_json = false;
  peaks->add_option("section", p_section, "Cross-section CSV written by scan")->required();
  peaks->add_option("--min-prominence", p_prominence, "Fraction of the window range (default 0.2)");
  peaks->add_option("--window-center", p_center_mm, "Analysis window center [mm]");
  peaks->add_option("--window-width", p_width_mm, "Analysis window width [mm]");
  peaks->add_flag("--no-window", p_no_window, "Analyze the whole section");
  peaks->add_option("--background", p_background, "Baseline removed before peak search");
  peaks->add_flag("--json", p_json, "Print the JSON record on stdout");

  // frames
  auto* frames = app.add_subcommand("frames", "Synthetic CCD frame pipeline");
  frames->require_subcommand(1);
  auto* synth = frames->add_subcommand("synth", "Generate two frame stacks");
  std::size_t f_n = 20000;
  double f_poisson = 0.0;
  bool f_csv = false;
  std::string f_name = "frames";
  GridFlags f_grids;
  synth->add_option("-n,--realizations", f_n, "Frames per stack")->capture_default_str();
  synth->add_option("--poisson", f_poisson, "Mean photon count per pixel (0 = noiseless)");
  synth->add_flag("--csv", f_csv, "Also write CSV exports");
  synth->add_option("--name", f_name, "Output base name")->capture_default_str();
  f_grids.add(synth);
  auto* correlate = frames->add_subcommand("correlate", "g2 surface from two stored stacks");
  std::string c_first, c_second, c_name = "frames_g2";
  correlate->add_option("stack1", c_first, "First frame stack")->required();
  correlate->add_option("stack2", c_second, "Second frame stack")->required();
  correlate->add_option("--name", c_name, "Output base name")->capture_default_str();

  // reproduce-paper
  auto* repro = app.add_subcommand("reproduce-paper", "Run every preset line and the resolution-law sweep");
  std::size_t r_n = 20000, r_points = 4001;
  bool r_no_mc = false;
  repro->add_option("-n,--realizations", r_n, "Monte-Carlo realizations")->capture_default_str();
  repro->add_option("--points", r_points, "Samples per scan line")->capture_default_str();
  repro->add_flag("--no-monte-carlo", r_no_mc, "Skip the Monte-Carlo row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analytic) {
      auto setup = g.setup();
      a_grids.apply(setup.get());
      const g2l_source_kind kind = parse_source(a_source);
      g2l_surface* raw = nullptr;
      check(g2l_analytic_surface(setup.get(), kind, parse_norm(a_norm), a_envelope ? 1 : 0, 0, &raw));
      SurfacePtr surface(raw);
      const std::string base = a_name.empty() ? std::string("analytic_") + source_name(kind) : a_name;
      const auto path = g.path(base + ".mat");
      check(g2l_surface_save(surface.get(), path.string().c_str()));
      if (a_csv) check(g2l_surface_save_csv(surface.get(), g.path(base + ".csv").string().c_str()));
      g2l_surface_info info{};
      check(g2l_surface_info_get(surface.get(), &info));
      std::cout << source_name(kind) << " surface " << info.x1_n << "x" << info.x2_n << " over +-"
                << mm(info.x1_max) << " -> " << path.string() << '\n';
      return 0;
    }

    if (*mc) {
      auto setup = g.setup();
      mc_grids.apply(setup.get());
      g2l_mc_options opts{mc_n, g.seed, g.workers};
      const auto t0 = std::chrono::steady_clock::now();
      g2l_surface* raw = nullptr;
      check(g2l_monte_carlo(setup.get(), &opts, &raw, nullptr));
      SurfacePtr surface(raw);
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto path = g.path(mc_name + ".mat");
      check(g2l_surface_save(surface.get(), path.string().c_str()));
      std::uint64_t hash = 0;
      check(g2l_setup_hash(setup.get(), &hash));
      g2l_setup_info info{};
      check(g2l_setup_info_get(setup.get(), &info));
      size_t need = 0;
      check(g2l_setup_describe(setup.get(), nullptr, 0, &need));
      std::string desc(need, '\0');
      check(g2l_setup_describe(setup.get(), desc.data(), desc.size(), nullptr));
      desc.resize(need - 1);
      write_json(g.path(mc_name + ".json"), {{"seed", g.seed},
                                             {"n_realizations", mc_n},
                                             {"workers", g.workers},
                                             {"wall_time_s", wall},
                                             {"config_hash", hex(hash)},
                                             {"config", desc},
                                             {"source_samples", info.source_samples},
                                             {"detector_pixels", info.detector_pixels},
                                             {"surface", surface_json(surface.get())}});
      std::printf("monte-carlo g2: %zu realizations, seed %llu, %.2f s -> %s\n", mc_n,
                  static_cast<unsigned long long>(g.seed), wall, path.string().c_str());
      return 0;
    }

    if (*scan) {
      auto setup = g.setup();
      g2l_surface* raw = nullptr;
      if (s_analytic) {
        s_grids.apply(setup.get());
        const g2l_source_kind kind = s_source.empty() ? G2L_THERMAL : parse_source(s_source);
        check(g2l_analytic_surface(setup.get(), kind, G2L_UNIT_PEAK, 0, 0, &raw));
      } else {
        if (s_surface.empty()) throw CLI::ValidationError("scan", "needs a surface file or --analytic");
        check(g2l_surface_load(s_surface.c_str(), &raw));
      }
      SurfacePtr surface(raw);
      g2l_surface_info info{};
      check(g2l_surface_info_get(surface.get(), &info));
      if (!s_analytic && !s_source.empty() && parse_source(s_source) != info.source)
        throw CLI::ValidationError("--source", std::string("surface holds a ") + source_name(info.source) + " pattern");

      g2l_line line{};
      line.n_points = s_points;
      if (!s_preset.empty()) {
        if (s_preset.size() != 1) throw CLI::ValidationError("--preset", "expected a single letter a-d");
        check(g2l_line_preset(s_preset[0], info.source, 0.0, 1.0, s_points, &line));
      } else if (!std::isnan(s_vertical_mm)) {
        line.vertical = 1;
        line.beta = s_vertical_mm * 1e-3;
      } else {
        line.alpha = s_alpha;
        line.beta = s_beta_mm * 1e-3;
      }
      if (line.vertical) {
        line.x_min = info.x2_min;
        line.x_max = info.x2_max;
      } else {
        check(g2l_line_fit_range(surface.get(), line.alpha, line.beta, &line.x_min, &line.x_max));
      }
      if (!std::isnan(s_xmin_mm)) line.x_min = s_xmin_mm * 1e-3;
      if (!std::isnan(s_xmax_mm)) line.x_max = s_xmax_mm * 1e-3;

      g2l_section* sraw = nullptr;
      check(g2l_section_extract(surface.get(), &line, &sraw));
      SectionPtr section(sraw);
      size_t count = 0, excluded = 0;
      check(g2l_section_data(section.get(), nullptr, nullptr, &count, &excluded));

      std::string base = s_name;
      if (base.empty()) {
        char buf[64];
        if (line.vertical) std::snprintf(buf, sizeof buf, "scan_vertical_%g", line.beta * 1e3);
        else std::snprintf(buf, sizeof buf, "scan_alpha_%g_beta_%g", line.alpha, line.beta * 1e3);
        base = buf;
      }
      const auto path = g.path(base + ".csv");
      check(g2l_section_save_csv(section.get(), path.string().c_str()));

      json rec = {{"section", path.string()},
                  {"source_kind", source_name(info.source)},
                  {"alpha", line.alpha},
                  {"beta", line.beta},
                  {"vertical", line.vertical != 0},
                  {"x_min", line.x_min},
                  {"x_max", line.x_max},
                  {"n_points", count},
                  {"excluded", excluded}};
      std::string predicted = "n/a", measured;
      if (info.source != G2L_COHERENT) {
        int flat = 0;
        double spacing = 0.0, factor = 0.0;
        if (g2l_predict_spacing(setup.get(), &line, info.source, &flat, &spacing, &factor) == G2L_OK) {
          rec["flat"] = flat != 0;
          rec["predicted_spacing_m"] = flat ? json(nullptr) : json(spacing);
          rec["predicted_factor"] = flat ? json(nullptr) : json(factor);
          predicted = flat ? "FLAT" : mm(spacing);
          rec["measured_spacing_m"] = nullptr;
          rec["measured_factor"] = nullptr;
          g2l_peak_options opts{};
          g2l_fringe_report rep{};
          if (!flat && g2l_peak_options_central(setup.get(), &line, info.source, &opts) == G2L_OK &&
              g2l_detect_peaks(section.get(), &opts, &rep, nullptr, nullptr, 0) == G2L_OK) {
            rec["measured_spacing_m"] = rep.mean_spacing;
            rec["measured_factor"] = nullable(rep.resolution_factor);
            measured = ", measured " + mm(rep.mean_spacing);
          }
        }
      }
      write_json(g.path(base + ".json"), rec);
      if (s_json) std::cout << rec.dump() << '\n';
      else
        std::cout << "scan " << count << " points (" << excluded << " off-surface), predicted spacing "
                  << predicted << measured << " -> " << path.string() << '\n';
      return 0;
    }

    if (*peaks) {
      auto setup = g.setup();
      g2l_section* sraw = nullptr;
      check(g2l_section_load_csv(p_section.c_str(), &sraw));
      SectionPtr section(sraw);
      g2l_line line{};
      check(g2l_section_line(section.get(), &line));
      g2l_source_kind kind{};
      check(g2l_section_source(section.get(), &kind));

      // Degenerate lines carry no fringes; between grid nodes the section
      // only shows pixel-scale interpolation ripple, so skip detection.
      int flat = 0;
      double predicted = 0.0, factor = 0.0;
      if (kind != G2L_COHERENT && g2l_predict_spacing(setup.get(), &line, kind, &flat, &predicted, &factor) == G2L_OK &&
          flat) {
        json rec = {{"section", p_section}, {"status", "flat"},     {"source_kind", source_name(kind)},
                    {"alpha", line.alpha},  {"beta", line.beta},    {"mean_spacing_m", nullptr}};
        write_json(g.path(fs::path(p_section).stem().string() + "_peaks.json"), rec);
        if (p_json) std::cout << rec.dump() << '\n';
        else std::cout << "FLAT: no fringes predicted along this line\n";
        return 1;
      }

      g2l_peak_options opts{};
      if (kind != G2L_COHERENT && g2l_peak_options_central(setup.get(), &line, kind, &opts) != G2L_OK)
        opts = g2l_peak_options{};
      if (p_no_window) opts.use_window = 0;
      if (!std::isnan(p_center_mm) || !std::isnan(p_width_mm)) {
        if (std::isnan(p_center_mm) || std::isnan(p_width_mm))
          throw CLI::ValidationError("--window-center", "needs --window-width as well");
        opts.use_window = 1;
        opts.window_center = p_center_mm * 1e-3;
        opts.window_width = p_width_mm * 1e-3;
      }
      if (p_prominence != 0.0) opts.min_prominence = p_prominence;
      if (!std::isnan(p_background)) {
        opts.use_background = 1;
        opts.background = p_background;
      }

      size_t count = 0;
      check(g2l_section_data(section.get(), nullptr, nullptr, &count, nullptr));
      std::vector<double> pk(count), tr(count);
      g2l_fringe_report rep{};
      const g2l_status st = g2l_detect_peaks(section.get(), &opts, &rep, pk.data(), tr.data(), count);
      if (st != G2L_OK && st != G2L_NO_SPACING) check(st);
      pk.resize(std::min(rep.n_peaks, count));
      tr.resize(std::min(rep.n_troughs, count));

      json rec = {{"section", p_section},
                  {"status", g2l_status_name(st)},
                  {"source_kind", source_name(kind)},
                  {"alpha", line.alpha},
                  {"beta", line.beta},
                  {"mean_spacing_m", st == G2L_OK ? json(rep.mean_spacing) : json(nullptr)},
                  {"spacing_std_m", rep.spacing_std},
                  {"peak_spacing_m", rep.n_peaks >= 2 ? json(rep.peak_spacing) : json(nullptr)},
                  {"visibility", rep.visibility},
                  {"resolution_factor", nullable(rep.resolution_factor)},
                  {"background", rep.background_level},
                  {"n_peaks", rep.n_peaks},
                  {"peaks_m", pk},
                  {"troughs_m", tr}};
      const auto stem = fs::path(p_section).stem().string();
      write_json(g.path(stem + "_peaks.json"), rec);
      if (p_json) {
        std::cout << rec.dump() << '\n';
      } else if (st == G2L_OK) {
        std::cout << "spacing " << mm(rep.mean_spacing) << " +- " << mm(rep.spacing_std) << ", " << rep.n_peaks
                  << " peaks, visibility " << rep.visibility;
        if (std::isfinite(rep.resolution_factor)) std::printf(", factor %.3g", rep.resolution_factor);
        std::cout << '\n';
      } else {
        std::cout << "no spacing: " << g2l_last_error() << '\n';
      }
      return st == G2L_OK ? 0 : 1;
    }

    if (*synth) {
      auto setup = g.setup();
      f_grids.apply(setup.get());
      g2l_mc_options opts{f_n, g.seed, g.workers};
      g2l_frames *r1 = nullptr, *r2 = nullptr;
      check(g2l_frames_synthesize(setup.get(), &opts, f_poisson, &r1, &r2));
      FramesPtr s1(r1), s2(r2);
      const auto p1 = g.path(f_name + "_1.g2fs"), p2 = g.path(f_name + "_2.g2fs");
      check(g2l_frames_save(s1.get(), p1.string().c_str()));
      check(g2l_frames_save(s2.get(), p2.string().c_str()));
      if (f_csv) {
        check(g2l_frames_save_csv(s1.get(), g.path(f_name + "_1.csv").string().c_str()));
        check(g2l_frames_save_csv(s2.get(), g.path(f_name + "_2.csv").string().c_str()));
      }
      size_t nf = 0, np = 0;
      double pitch = 0.0;
      check(g2l_frames_shape(s1.get(), &nf, &np, &pitch));
      std::cout << nf << " frames x " << np << " pixels (pitch " << mm(pitch) << ") -> " << p1.string() << ", "
                << p2.string() << '\n';
      return 0;
    }

    if (*correlate) {
      g2l_frames *r1 = nullptr, *r2 = nullptr;
      check(g2l_frames_load(c_first.c_str(), &r1));
      FramesPtr s1(r1);
      check(g2l_frames_load(c_second.c_str(), &r2));
      FramesPtr s2(r2);
      g2l_surface* raw = nullptr;
      check(g2l_frames_correlate(s1.get(), s2.get(), g.workers, &raw));
      SurfacePtr surface(raw);
      const auto path = g.path(c_name + ".mat");
      check(g2l_surface_save(surface.get(), path.string().c_str()));
      std::cout << "frame correlation -> " << path.string() << '\n';
      return 0;
    }

    if (*repro) {
      g2l_reproduce_options opts{g.seed, g.workers, r_no_mc ? 0 : r_n, r_points};
      g2l_report* raw = nullptr;
      check(g2l_reproduce_paper(&opts, &raw));
      ReportPtr report(raw);
      std::cout << g2l_report_table(report.get());
      const auto path = g.path("reproduce_paper.jsonl");
      std::ofstream(path) << g2l_report_records(report.get());
      std::cout << "records -> " << path.string() << '\n';
      return g2l_report_passed(report.get()) ? 0 : 1;
    }
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
