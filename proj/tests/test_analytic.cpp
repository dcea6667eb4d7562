#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2lab/analysis.hpp"
#include "g2lab/analytic.hpp"
#include "g2lab/error.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {
const OpticalConfig cfg = paper_preset::optics();
const ApertureSpec ap = paper_preset::aperture();
const double lz = paper_preset::wavelength * paper_preset::distance;
const double baseline = lz / paper_preset::slit_separation;  // 0.876 mm

// |T~^2|^2 from quadrature, independent of the closed form.
double thermal_oracle(double delta) {
  const double xi = 2.0 * oracle::pi / lz * delta;
  return std::norm(oracle::slit_spectrum(paper_preset::slit_width, paper_preset::slit_separation, xi, 10e-9));
}
}  // namespace

TEST_CASE("thermal correlation examples") {
  const double peak = g2_thermal(cfg, ap, 0.0, 0.0);
  CHECK(peak == doctest::Approx(thermal_oracle(0.0)).epsilon(1e-6));
  for (double x : {-1e-3, 0.3e-3, 2e-3}) CHECK(g2_thermal(cfg, ap, x, x) == peak);
  // Global maximum on the diagonal.
  for (int i = 1; i < 2000; ++i) REQUIRE(g2_thermal(cfg, ap, 0.0, 3e-6 * i) < peak);

  // First-order bright fringe at lag lambda z / d: cos^2 factor back at 1.
  const double first = g2_thermal(cfg, ap, 0.0, baseline);
  CHECK(first == doctest::Approx(thermal_oracle(baseline)).epsilon(1e-6));
  // Dark fringe halfway.
  CHECK(g2_thermal(cfg, ap, 0.0, 0.5 * baseline) < 1e-20 * peak);
  CHECK(thermal_oracle(0.5 * baseline) < 1e-12 * peak);
  // Dark fringes found by root search on the quadrature oracle sit at odd
  // multiples of lambda z / (2d), so the fringe period is lambda z / d.
  const auto mins = oracle::minima(thermal_oracle, 0.1e-3, 2.4e-3, 400);
  REQUIRE(mins.size() == 3);
  CHECK(mins[0] == doctest::Approx(0.5 * baseline).epsilon(1e-5));
  CHECK(mins[1] - mins[0] == doctest::Approx(baseline).epsilon(1e-5));
  CHECK(mins[2] - mins[1] == doctest::Approx(baseline).epsilon(1e-5));
  CHECK(baseline * 1e3 == doctest::Approx(0.88).epsilon(0.02));
  // Unit-peak option.
  CHECK(g2_thermal(cfg, ap, 0.1e-3, 0.1e-3, true) == doctest::Approx(1.0));
}

TEST_CASE("entangled correlation examples") {
  CHECK(g2_entangled(cfg, ap, 0.0, 0.0) == 1.0);
  CHECK(g2_entangled(cfg, ap, 1e-3, -1e-3) == doctest::Approx(1.0));
  CHECK(g2_entangled(cfg, ap, 0.2e-3, 0.5 * baseline - 0.2e-3) < 1e-20);
  // Period along x1 = x2 = x is half the classical spacing.
  const auto section = oracle::section_from([](double x) { return g2_entangled(cfg, ap, x, x); }, -1.5e-3, 1.5e-3,
                                            3001, SourceKind::entangled);
  const auto rep = detect_peaks(section);
  CHECK(rep.mean_spacing == doctest::Approx(0.5 * baseline).epsilon(1e-4));
  // Sampled minima miss the exact zeros by up to (pi h / P)^2.
  CHECK(rep.visibility == doctest::Approx(1.0).epsilon(1e-4));
  // Envelope option only ever lowers the value.
  for (double s : {0.1e-3, 0.9e-3, 2.5e-3}) {
    CHECK(g2_entangled(cfg, ap, s, 0.0, true) <= g2_entangled(cfg, ap, s, 0.0));
  }
  const double envelope_null = lz / paper_preset::slit_width;
  CHECK(g2_entangled(cfg, ap, envelope_null, 0.0, true) < 1e-20);
}

TEST_CASE("entangled model needs a double slit") {
  const auto custom = ApertureSpec::custom(0.0, 1e-6, {0.0, 1.0, 0.0});
  try {
    g2_entangled(cfg, custom, 0.0, 0.0);
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
}

TEST_CASE("Young reference") {
  const double peak = young_reference(cfg, ap, 0.0);
  for (int i = 1; i < 1000; ++i) REQUIRE(young_reference(cfg, ap, 5e-6 * i) < peak);
  // Envelope null at lambda z / a = 2.77 mm.
  const double null_x = lz / paper_preset::slit_width;
  CHECK(null_x * 1e3 == doctest::Approx(2.766).epsilon(1e-3));
  CHECK(young_reference(cfg, ap, null_x) < 1e-20 * peak);
  // Fringe spacing by peak detection on the evaluated curve.
  const auto section =
      oracle::section_from([](double x) { return young_reference(cfg, ap, x, true); }, -2.2e-3, 2.2e-3, 4401);
  PeakOptions opts;
  opts.window_center = 0.0;
  opts.window_width = 5.0 * baseline;
  const auto rep = detect_peaks(section, opts);
  CHECK(rep.mean_spacing == doctest::Approx(baseline).epsilon(1e-3));
  // Same functional form as the thermal correlation for a binary slit.
  for (int i = -200; i <= 200; ++i) {
    const double x = 17e-6 * i;
    REQUIRE(young_reference(cfg, ap, x) == doctest::Approx(g2_thermal(cfg, ap, 0.0, x)).epsilon(1e-14));
  }
}

TEST_CASE("thermal surface structure") {
  const auto small = cfg.with_detector(DetectorGrid{4.65e-6, 301});
  const auto s = evaluate_surface(small, ap, SourceKind::thermal);
  CHECK(s.provenance() == Provenance::analytic);
  CHECK(s.normalization() == Normalization::unit_peak);
  CHECK(s.max_value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.scale() == doctest::Approx(g2_thermal(small, ap, 0.0, 0.0)).epsilon(1e-12));
  for (std::size_t i = 0; i < s.rows(); ++i) {
    REQUIRE(s(i, i) == s.max_value());
    for (std::size_t j = 0; j < s.cols(); ++j) {
      REQUIRE(s(i, j) == s(j, i));
      REQUIRE(s(i, j) >= 0.0);
      REQUIRE(s(i, j) <= 1.0);
      if (i + 1 < s.rows() && j + 1 < s.cols()) REQUIRE(s(i + 1, j + 1) == s(i, j));
    }
  }
  // Matches the pointwise function.
  const Axis ax = detector_axis(small.detector());
  CHECK(s(10, 250) == doctest::Approx(g2_thermal(small, ap, ax.at(10), ax.at(250), true)).epsilon(1e-12));
}

TEST_CASE("entangled and coherent surface structure") {
  const auto small = cfg.with_detector(DetectorGrid{4.65e-6, 257});
  const auto e = evaluate_surface(small, ap, SourceKind::entangled);
  for (std::size_t i = 0; i + 1 < e.rows(); ++i)
    for (std::size_t j = 1; j < e.cols(); ++j) REQUIRE(e(i + 1, j - 1) == e(i, j));
  for (double v : e.values()) REQUIRE((v >= 0.0 && v <= 1.0));

  const auto c = evaluate_surface(small, ap, SourceKind::coherent_reference,
                                  SurfaceOptions{Normalization::raw, std::size_t{512} << 20, false});
  const Axis ax = detector_axis(small.detector());
  CHECK(c(3, 100) == doctest::Approx(young_reference(small, ap, ax.at(3)) * young_reference(small, ap, ax.at(100))));
}

TEST_CASE("translation invariances of the point functions") {
  for (double c : {-0.7e-3, 0.05e-3, 1.3e-3}) {
    for (double x1 : {-0.4e-3, 0.0, 0.9e-3}) {
      const double x2 = 0.31e-3;
      CHECK(g2_thermal(cfg, ap, x1 + c, x2 + c) == doctest::Approx(g2_thermal(cfg, ap, x1, x2)).epsilon(1e-9));
      CHECK(g2_entangled(cfg, ap, x1 + c, x2 - c) ==
            doctest::Approx(g2_entangled(cfg, ap, x1, x2)).epsilon(1e-9));
      CHECK(g2_thermal(cfg, ap, x1, x2) == g2_thermal(cfg, ap, x2, x1));
    }
  }
}

TEST_CASE("memory budget guard") {
  SurfaceOptions opts;
  opts.memory_budget_bytes = 1000 * 1000 * sizeof(double) - 1;
  const auto big = cfg.with_detector(DetectorGrid{4.65e-6, 1000});
  try {
    evaluate_surface(big, ap, SourceKind::thermal, opts);
    FAIL("expected memory_budget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::memory_budget);
  }
  opts.memory_budget_bytes += 1;
  CHECK_NOTHROW(evaluate_surface(big, ap, SourceKind::thermal, opts));
}

TEST_CASE("raw surfaces keep the unscaled closed form") {
  const auto small = cfg.with_detector(DetectorGrid{4.65e-6, 64});
  SurfaceOptions opts;
  opts.normalization = Normalization::raw;
  const auto raw = evaluate_surface(small, ap, SourceKind::thermal, opts);
  const auto unit = evaluate_surface(small, ap, SourceKind::thermal);
  CHECK(raw.scale() == 1.0);
  for (std::size_t k = 0; k < raw.values().size(); ++k)
    REQUIRE(unit.values()[k] * unit.scale() == doctest::Approx(raw.values()[k]).epsilon(1e-12));
}
