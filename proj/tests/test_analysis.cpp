#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2lab/analysis.hpp"
#include "g2lab/analytic.hpp"
#include "g2lab/error.hpp"
#include "g2lab/montecarlo.hpp"
#include "g2lab/report.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {
const Setup scan = analytic_scan_setup();
const double baseline = paper_preset::wavelength * paper_preset::distance / paper_preset::slit_separation;

CrossSection cos2(double period, double scale = 1.0, double offset = 0.0) {
  return oracle::section_from(
      [&](double x) { return offset + scale * std::pow(std::cos(oracle::pi * x / period), 2); }, -2.3e-3, 2.3e-3,
      2001);
}

CrossSection thermal_line(double alpha, std::size_t n) {
  static const auto s = evaluate_surface(scan.optics, scan.aperture, SourceKind::thermal);
  return extract_cross_section(s, ScanLine{alpha, 0.0, *fit_range(s, alpha, 0.0), n, "", false});
}
}  // namespace

TEST_CASE("pure cos^2 of known period") {
  for (double p : {0.3e-3, 0.5e-3, 0.876e-3}) {
    const auto rep = detect_peaks(cos2(p));
    CHECK(rep.mean_spacing == doctest::Approx(p).epsilon(1e-3));
    CHECK(rep.peak_spacing == doctest::Approx(p).epsilon(1e-3));
    CHECK(rep.visibility == doctest::Approx(1.0));
    for (std::size_t i = 1; i < rep.peak_positions.size(); ++i)
      REQUIRE(rep.peak_positions[i] > rep.peak_positions[i - 1]);
    CHECK(rep.n_peaks == rep.peak_positions.size());
  }
}

TEST_CASE("thermal line (a) over +-2.2 mm") {
  auto section = thermal_line(0.0, 4001);
  // Restrict to +-2.2 mm.
  CrossSection cut = section;
  cut.parameter.clear();
  cut.values.clear();
  for (std::size_t i = 0; i < section.values.size(); ++i) {
    if (std::abs(section.parameter[i]) <= 2.2e-3) {
      cut.parameter.push_back(section.parameter[i]);
      cut.values.push_back(section.values[i]);
    }
  }
  const double step = section.line.step();
  PeakOptions opts;
  opts.classical_baseline = baseline;
  const auto rep = detect_peaks(cut, opts);
  CHECK(std::abs(rep.mean_spacing - baseline) <= 0.5 * step);
  CHECK(std::abs(rep.mean_spacing * 1e3 - 0.89) <= 0.02 * baseline * 1e3);
  CHECK(*rep.resolution_factor == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.spacing_std / rep.mean_spacing < 1e-2);
}

TEST_CASE("thermal line (c) spacing and periodicity") {
  const auto section = thermal_line(-2.0, 4001);
  PeakOptions opts;
  opts.window_center = 0.0;
  opts.window_width = kCentralWindowPeriods * baseline / 3.0;
  const auto rep = detect_peaks(section, opts);
  CHECK(rep.mean_spacing * 1e3 == doctest::Approx(0.292).epsilon(2e-3));
  CHECK(rep.spacing_std / rep.mean_spacing < 1e-2);
}

TEST_CASE("scale and offset invariance") {
  const auto section = thermal_line(-1.0, 3001);
  PeakOptions opts;
  opts.window_center = 0.0;
  opts.window_width = kCentralWindowPeriods * baseline / 2.0;
  const auto ref = detect_peaks(section, opts);
  for (double c : {1e-6, 0.37, 250.0}) {
    auto scaled = section;
    for (double& v : scaled.values) v *= c;
    const auto rep = detect_peaks(scaled, opts);
    // Parabolic refinement reorders roundoff; positions agree to ~1e-12 of the period.
    REQUIRE(rep.peak_positions.size() == ref.peak_positions.size());
    for (std::size_t i = 0; i < rep.peak_positions.size(); ++i)
      CHECK(std::abs(rep.peak_positions[i] - ref.peak_positions[i]) < 1e-12 * baseline);
    CHECK(rep.mean_spacing == doctest::Approx(ref.mean_spacing).epsilon(1e-12));
  }
  for (double offset : {0.5, 3.0}) {
    auto shifted = section;
    for (double& v : shifted.values) v += offset;
    auto shifted_opts = opts;
    shifted_opts.background = offset;
    const auto rep = detect_peaks(shifted, shifted_opts);
    CHECK(rep.mean_spacing == doctest::Approx(ref.mean_spacing).epsilon(1e-12));
    // Prominence is relative, so the offset alone does not change spacing either.
    CHECK(detect_peaks(shifted, opts).mean_spacing == doctest::Approx(ref.mean_spacing).epsilon(1e-12));
  }
}

TEST_CASE("plateau maxima resolve to their midpoint") {
  CrossSection s = oracle::section_from([](double) { return 0.0; }, 0.0, 39.0, 40);
  for (std::size_t i : {10, 11, 12, 13}) s.values[i] = 1.0;
  for (std::size_t i : {25, 26}) s.values[i] = 1.0;
  const auto rep = detect_peaks(s);
  REQUIRE(rep.n_peaks == 2);
  CHECK(rep.peak_positions[0] == doctest::Approx(11.5));
  CHECK(rep.peak_positions[1] == doctest::Approx(25.5));
}

TEST_CASE("preconditions and the no-spacing error") {
  auto tiny = oracle::section_from([](double x) { return x; }, 0.0, 1.0, 10);
  CHECK_THROWS_AS(detect_peaks(tiny), Error);
  const auto c = cos2(0.5e-3);
  PeakOptions bad;
  bad.min_prominence = 1.0;
  CHECK_THROWS_AS(detect_peaks(c, bad), Error);
  bad.min_prominence = 0.0;
  CHECK_THROWS_AS(detect_peaks(c, bad), Error);

  const auto one_peak = oracle::section_from([](double x) { return std::exp(-x * x); }, -3.0, 3.0, 101);
  try {
    detect_peaks(one_peak);
    FAIL("expected no_spacing");
  } catch (const NoSpacingError& e) {
    CHECK(e.code() == ErrorCode::no_spacing);
    CHECK(e.report().n_peaks == 1);
    CHECK(e.report().peak_positions[0] == doctest::Approx(0.0).epsilon(1e-9));
  }
  const auto flat = oracle::section_from([](double) { return 0.7; }, 0.0, 1.0, 50);
  CHECK_THROWS_AS(detect_peaks(flat), NoSpacingError);
  // Roundoff-level ripple is not a fringe pattern.
  const auto ripple = oracle::section_from([](double x) { return 0.7 + 1e-16 * std::sin(40.0 * x); }, 0.0, 1.0, 200);
  CHECK_THROWS_AS(detect_peaks(ripple), NoSpacingError);
}

TEST_CASE("visibility") {
  const Setup s = analytic_scan_setup();
  const auto ent = evaluate_surface(s.optics, s.aperture, SourceKind::entangled);
  for (double alpha : {0.0, 1.0, 2.0, -0.5}) {
    const auto section = extract_cross_section(ent, ScanLine{alpha, 0.0, *fit_range(ent, alpha, 0.0), 4001, "", false});
    // Samples straddle the exact zeros; the sampled minimum is ~(pi h / P)^2.
    CHECK(measure_visibility(section, 2.0 * baseline / std::abs(alpha + 1.0)) == doctest::Approx(1.0).epsilon(1e-3));
  }
  const auto flat = oracle::section_from([](double) { return 3.0; }, 0.0, 1.0, 50);
  CHECK(measure_visibility(flat, 0.5) == 0.0);
  CHECK_THROWS_AS(measure_visibility(flat, 2.0), Error);
  CHECK_THROWS_AS(measure_visibility(flat, -1.0), Error);
}

TEST_CASE("raw Monte-Carlo g2 visibility is bounded by one half") {
  const Setup mc = monte_carlo_setup();
  EnsembleConfig ens;
  ens.n_realizations = 20000;
  ens.rng_seed = 20140101;
  const auto est = estimate_g2(mc.aperture, mc.optics, ens);
  const auto& g2 = est.correlation;
  const auto section = extract_cross_section(g2, ScanLine{-1.0, 0.0, *fit_range(g2, -1.0, 0.0), 1001, "", false});
  const double v = measure_visibility(section, 3.0 * baseline / 2.0);
  // g2 in [1, 2] gives (2 - 1) / (2 + 1) at most; 0.5 leaves room for noise.
  CHECK(v <= 0.5);
  CHECK(v > 0.25);
  // The default background for raw thermal Monte-Carlo sections is 1.
  const auto rep = detect_peaks(section, PeakOptions{kDefaultMinProminence, 0.0, 5 * baseline / 2, {}, baseline});
  CHECK(rep.background_level == 1.0);
  CHECK(std::abs(rep.mean_spacing - baseline / 2) <= mc.optics.detector().pixel_pitch);
}

TEST_CASE("central window") {
  ScanLine line{-1.0, 0.0, {-3e-3, 3e-3}, 100, "", false};
  const auto pred = predict_fringe_spacing(line, scan.optics, scan.aperture, SourceKind::thermal);
  const auto o = central_window_options(line, pred, SourceKind::thermal, baseline);
  CHECK(*o.window_center == 0.0);
  CHECK(*o.window_width == doctest::Approx(2.5 * baseline));
  CHECK(*o.classical_baseline == baseline);
  ScanLine flat{1.0, 0.0, {-3e-3, 3e-3}, 100, "", false};
  const auto fo = central_window_options(
      flat, predict_fringe_spacing(flat, scan.optics, scan.aperture, SourceKind::thermal), SourceKind::thermal,
      baseline);
  CHECK_FALSE(fo.window_width.has_value());
}
