#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <thread>

#include "g2lab/analytic.hpp"
#include "g2lab/error.hpp"
#include "g2lab/montecarlo.hpp"
#include "g2lab/propagation.hpp"

using namespace g2lab;

namespace {
const ApertureSpec ap = paper_preset::aperture();

SpeckleField coherent(const OpticalConfig& cfg) {
  SpeckleField f;
  for (std::size_t j = 0; j < cfg.source().n_samples; ++j) f.samples.emplace_back(ap.transmission(cfg.source().position(j)));
  return f;
}

// Grid whose detector pixels sit on the DFT comb of the zero-padded source.
OpticalConfig comb_config(std::size_t comb, std::size_t n_pixels) {
  const auto base = paper_preset::optics();
  const double pitch = base.wavelength() * base.distance() / (static_cast<double>(comb) * base.source().spacing());
  return base.with_detector(DetectorGrid{pitch, n_pixels});
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (auto c : v) m = std::max(m, std::abs(c));
  return m;
}
}  // namespace

TEST_CASE("coherent double slit reproduces Young's pattern") {
  const auto cfg = paper_preset::optics();
  REQUIRE(cfg.source().n_samples == 4096);
  const auto e = fraunhofer_propagate(coherent(cfg), cfg);
  // Both curves unscaled; errors relative to the closed-form peak. The grid
  // maximum is not the true peak since no pixel sits at x = 0.
  const double peak = young_reference(cfg, ap, 0.0);
  CHECK(peak == doctest::Approx(4.0 * 38e-6 * 38e-6));
  double worst = 0.0;
  for (std::size_t m = 0; m < e.size(); ++m) {
    const double young = young_reference(cfg, ap, cfg.detector().position(m));
    worst = std::max(worst, std::abs(std::norm(e[m]) - young) / peak);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("zero field propagates to zero") {
  const auto cfg = paper_preset::optics();
  SpeckleField f{std::vector<Complex>(cfg.source().n_samples), 0};
  for (auto c : fraunhofer_propagate(f, cfg)) REQUIRE(c == Complex{});
  const FraunhoferPropagator p(cfg, aperture_support(cfg, ap));
  std::vector<Complex> out(cfg.detector().n_pixels, Complex{1.0, 1.0});
  p.propagate(f.samples, out);
  for (auto c : out) REQUIRE(c == Complex{});
}

TEST_CASE("point source gives a flat modulus and a linear phase") {
  const auto cfg = paper_preset::optics();
  const std::size_t j0 = 3000;
  SpeckleField f{std::vector<Complex>(cfg.source().n_samples), 0};
  f.samples[j0] = 1.0;
  const auto e = fraunhofer_propagate(f, cfg);
  const double x0 = cfg.source().position(j0);
  const double dx = cfg.source().spacing();
  const double slope = -cfg.wavenumber() * x0 / cfg.distance();
  for (std::size_t m = 0; m + 1 < e.size(); ++m) {
    REQUIRE(std::abs(e[m]) == doctest::Approx(dx).epsilon(1e-12));
    const double step = std::arg(e[m + 1] / e[m]);
    const double want = std::remainder(slope * cfg.detector().pixel_pitch, 2.0 * kPi);
    REQUIRE(std::abs(std::remainder(step - want, 2.0 * kPi)) < 1e-9);
  }
}

TEST_CASE("cached propagator matches the one-shot transform") {
  const auto cfg = paper_preset::optics().with_detector(DetectorGrid{4.65e-6, 300});
  const auto field = sample_thermal_source(ap, cfg, 5, 99);
  const auto direct = fraunhofer_propagate(field, cfg);
  const FraunhoferPropagator support(cfg, aperture_support(cfg, ap));
  const FraunhoferPropagator full(cfg);
  std::vector<Complex> a(300), b(300);
  support.propagate(field.samples, a);
  full.propagate(field.samples, b);
  const double scale = max_abs(direct);
  for (std::size_t m = 0; m < 300; ++m) {
    REQUIRE(std::abs(a[m] - direct[m]) < 1e-12 * scale);
    REQUIRE(std::abs(b[m] - direct[m]) < 1e-12 * scale);
  }
  CHECK(support.active().size() == 1900);
}

TEST_CASE("FFT path matches the direct transform") {
  for (auto [comb, pixels] : {std::pair<std::size_t, std::size_t>{8192, 2048}, {4096, 1393}, {6000, 6000}}) {
    const auto cfg = comb_config(comb, pixels);
    REQUIRE(fft_comb_length(cfg) == comb);
    for (std::uint64_t r : {0, 1}) {
      const auto field = sample_thermal_source(ap, cfg, r, 11);
      const auto direct = fraunhofer_propagate(field, cfg, PropagationMethod::direct);
      const auto fft = fraunhofer_propagate(field, cfg, PropagationMethod::fft);
      double worst = 0.0;
      for (std::size_t m = 0; m < direct.size(); ++m) worst = std::max(worst, std::abs(fft[m] - direct[m]));
      CHECK(worst / max_abs(direct) < 1e-10);
    }
  }
}

TEST_CASE("FFT path requires an aligned grid") {
  const auto cfg = paper_preset::optics();
  CHECK_FALSE(fft_comb_length(cfg).has_value());
  try {
    fraunhofer_propagate(coherent(cfg), cfg, PropagationMethod::fft);
    FAIL("expected unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported);
  }
}

TEST_CASE("FFT planning is safe from several threads") {
  const auto cfg = comb_config(4096, 512);
  const auto field = sample_thermal_source(ap, cfg, 0, 3);
  const auto ref = fraunhofer_propagate(field, cfg, PropagationMethod::fft);
  std::vector<std::vector<Complex>> out(4);
  {
    std::vector<std::jthread> pool;
    for (auto& o : out) pool.emplace_back([&] { o = fraunhofer_propagate(field, cfg, PropagationMethod::fft); });
  }
  for (const auto& o : out) CHECK(o == ref);
}

TEST_CASE("size mismatches are rejected") {
  const auto cfg = paper_preset::optics();
  SpeckleField f{std::vector<Complex>(10), 0};
  CHECK_THROWS_AS(fraunhofer_propagate(f, cfg), Error);
  const FraunhoferPropagator p(cfg, {0, 1});
  std::vector<Complex> src(cfg.source().n_samples), det(3);
  CHECK_THROWS_AS(p.propagate(src, det), Error);
  CHECK_THROWS_AS(FraunhoferPropagator(cfg, {cfg.source().n_samples}), Error);
}
