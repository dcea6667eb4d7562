#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "g2lab/g2lab.h"

TEST_CASE("status names and last error") {
  CHECK(std::string(g2l_status_name(G2L_OK)) == "ok");
  CHECK(std::string(g2l_status_name(G2L_NO_SPACING)) == "no_spacing");
  g2l_setup* s = nullptr;
  CHECK(g2l_setup_load("/nonexistent/setup.ini", &s) == G2L_IO);
  CHECK(s == nullptr);
  CHECK(std::strlen(g2l_last_error()) > 0);
  CHECK(g2l_setup_load("paper", nullptr) == G2L_INVALID_ARGUMENT);
  g2l_setup_free(nullptr);
  g2l_surface_free(nullptr);
  g2l_section_free(nullptr);
  g2l_frames_free(nullptr);
  g2l_report_free(nullptr);
}

TEST_CASE("setup info, hash and description") {
  g2l_setup* s = nullptr;
  REQUIRE(g2l_setup_load("paper", &s) == G2L_OK);
  g2l_setup_info info;
  REQUIRE(g2l_setup_info_get(s, &info) == G2L_OK);
  CHECK(info.wavelength == 457e-9);
  CHECK(info.slit_separation == 0.12e-3);
  CHECK(info.custom_aperture == 0);
  uint64_t h1 = 0, h2 = 0;
  g2l_setup_hash(s, &h1);
  REQUIRE(g2l_setup_set_grids(s, 0, 0, 0, 512) == G2L_OK);
  g2l_setup_hash(s, &h2);
  CHECK(h1 != h2);
  // Coarse source sampling violates the Fraunhofer criterion.
  CHECK(g2l_setup_set_grids(s, 0, 2, 0, 0) == G2L_SAMPLING_VIOLATION);
  char small[8];
  size_t needed = 0;
  REQUIRE(g2l_setup_describe(s, small, sizeof small, &needed) == G2L_OK);
  CHECK(needed > sizeof small);
  CHECK(std::strlen(small) == sizeof small - 1);
  g2l_setup_free(s);
}

TEST_CASE("analytic scan and peaks through the C interface") {
  g2l_setup* s = nullptr;
  REQUIRE(g2l_setup_load("paper", &s) == G2L_OK);
  REQUIRE(g2l_setup_set_grids(s, 0, 0, 4.65e-6, 2048) == G2L_OK);
  g2l_surface* surf = nullptr;
  REQUIRE(g2l_analytic_surface(s, G2L_THERMAL, G2L_UNIT_PEAK, 0, 0, &surf) == G2L_OK);
  g2l_surface_info si;
  g2l_surface_info_get(surf, &si);
  CHECK(si.x1_n == 2048);
  CHECK(si.provenance == G2L_ANALYTIC);

  double lo = 0, hi = 0;
  REQUIRE(g2l_line_fit_range(surf, -2.0, 0.0, &lo, &hi) == G2L_OK);
  g2l_line line;
  REQUIRE(g2l_line_preset('c', G2L_THERMAL, lo, hi, 2001, &line) == G2L_OK);
  CHECK(line.alpha == -2.0);
  g2l_section* sec = nullptr;
  REQUIRE(g2l_section_extract(surf, &line, &sec) == G2L_OK);

  int flat = -1;
  double spacing = 0, factor = 0;
  REQUIRE(g2l_predict_spacing(s, &line, G2L_THERMAL, &flat, &spacing, &factor) == G2L_OK);
  CHECK(flat == 0);
  CHECK(factor == doctest::Approx(1.0 / 3.0));

  g2l_peak_options po;
  REQUIRE(g2l_peak_options_central(s, &line, G2L_THERMAL, &po) == G2L_OK);
  g2l_fringe_report rep;
  double peaks[64];
  REQUIRE(g2l_detect_peaks(sec, &po, &rep, peaks, nullptr, 64) == G2L_OK);
  CHECK(rep.mean_spacing == doctest::Approx(spacing).epsilon(0.02));
  CHECK(rep.resolution_factor == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  CHECK(rep.n_peaks >= 3);
  CHECK(peaks[1] > peaks[0]);

  REQUIRE(g2l_section_save_csv(sec, "capi_section.csv") == G2L_OK);
  g2l_section* back = nullptr;
  REQUIRE(g2l_section_load_csv("capi_section.csv", &back) == G2L_OK);
  const double *p1, *v1, *p2, *v2;
  size_t n1, n2, e1, e2;
  g2l_section_data(sec, &p1, &v1, &n1, &e1);
  g2l_section_data(back, &p2, &v2, &n2, &e2);
  REQUIRE(n1 == n2);
  CHECK(std::memcmp(v1, v2, n1 * sizeof(double)) == 0);

  // A flat line: predicted FLAT, and on grid nodes peak detection finds nothing.
  g2l_line fl = line;
  fl.alpha = 1.0;
  fl.x_min = si.x1_min;
  fl.x_max = si.x1_max;
  fl.n_points = si.x1_n;
  REQUIRE(g2l_predict_spacing(s, &fl, G2L_THERMAL, &flat, &spacing, &factor) == G2L_OK);
  CHECK(flat == 1);
  g2l_section* fsec = nullptr;
  REQUIRE(g2l_section_extract(surf, &fl, &fsec) == G2L_OK);
  g2l_peak_options plain{};
  CHECK(g2l_detect_peaks(fsec, &plain, &rep, nullptr, nullptr, 0) == G2L_NO_SPACING);
  CHECK(rep.n_peaks < 2);

  g2l_section_free(fsec);
  g2l_section_free(back);
  g2l_section_free(sec);
  g2l_surface_free(surf);
  g2l_setup_free(s);
}

TEST_CASE("Monte-Carlo and frame pipelines agree through the C interface") {
  g2l_setup* s = nullptr;
  REQUIRE(g2l_setup_load("paper", &s) == G2L_OK);
  REQUIRE(g2l_setup_set_grids(s, 80e-6, 128, 27.9e-6, 256) == G2L_OK);
  g2l_mc_options mo{200, 42, 2};
  g2l_surface* mc = nullptr;
  double mean[256];
  REQUIRE(g2l_monte_carlo(s, &mo, &mc, mean) == G2L_OK);
  CHECK(mean[128] > 0.0);
  g2l_frames *f1 = nullptr, *f2 = nullptr;
  REQUIRE(g2l_frames_synthesize(s, &mo, 0.0, &f1, &f2) == G2L_OK);
  size_t nf = 0, np = 0;
  double pitch = 0;
  g2l_frames_shape(f1, &nf, &np, &pitch);
  CHECK(nf == 200);
  CHECK(np == 256);
  REQUIRE(g2l_frames_save(f1, "capi_f1.g2fs") == G2L_OK);
  g2l_frames* f1b = nullptr;
  REQUIRE(g2l_frames_load("capi_f1.g2fs", &f1b) == G2L_OK);
  g2l_surface* fg = nullptr;
  REQUIRE(g2l_frames_correlate(f1b, f2, 1, &fg) == G2L_OK);
  const double *a, *b;
  size_t na, nb;
  g2l_surface_data(mc, &a, &na);
  g2l_surface_data(fg, &b, &nb);
  REQUIRE(na == nb);
  CHECK(std::memcmp(a, b, na * sizeof(double)) == 0);

  REQUIRE(g2l_surface_subtract_background(mc, 1.0) == G2L_OK);
  REQUIRE(g2l_surface_unit_peak(mc) == G2L_OK);
  g2l_surface_info si;
  g2l_surface_info_get(mc, &si);
  // Background subtraction stays recorded; the peak factor goes into scale.
  CHECK(si.normalization == G2L_BACKGROUND_SUBTRACTED);
  CHECK(si.scale > 0.9);
  CHECK(si.provenance == G2L_MONTE_CARLO);
  REQUIRE(g2l_surface_save(mc, "capi_mc.mat") == G2L_OK);
  g2l_surface* back = nullptr;
  REQUIRE(g2l_surface_load("capi_mc.mat", &back) == G2L_OK);
  g2l_surface_data(mc, &a, &na);
  g2l_surface_data(back, &b, &nb);
  CHECK(std::memcmp(a, b, na * sizeof(double)) == 0);

  g2l_mc_options bad{0, 1, 1};
  g2l_surface* none = nullptr;
  CHECK(g2l_monte_carlo(s, &bad, &none, nullptr) == G2L_INVALID_ARGUMENT);

  g2l_surface_free(back);
  g2l_surface_free(fg);
  g2l_frames_free(f1b);
  g2l_frames_free(f2);
  g2l_frames_free(f1);
  g2l_surface_free(mc);
  g2l_setup_free(s);
}

TEST_CASE("reproduction report through the C interface") {
  g2l_reproduce_options o{20140101, 0, 0, 2001};
  g2l_report* r = nullptr;
  REQUIRE(g2l_reproduce_paper(&o, &r) == G2L_OK);
  CHECK(g2l_report_passed(r) == 1);
  CHECK(std::strstr(g2l_report_table(r), "thermal (c)") != nullptr);
  CHECK(std::strstr(g2l_report_records(r), "monte-carlo") == nullptr);
  g2l_report_free(r);
}
