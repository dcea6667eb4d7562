#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "g2lab/config_file.hpp"
#include "g2lab/surface.hpp"

namespace g2lab {

struct ReportRow {
  std::string label;
  SourceKind source = SourceKind::thermal;
  double alpha = 0.0;
  double beta = 0.0;
  bool degenerate = false;  // predicted FLAT
  std::optional<double> predicted_mm;
  std::optional<double> measured_mm;
  std::optional<double> paper_mm;
  std::optional<double> predicted_factor;
  std::optional<double> measured_factor;
  double tolerance_mm = 0.0;
  bool pass = false;
  std::string note;
};

struct RunReport {
  std::vector<ReportRow> rows;
  std::uint64_t seed = 0;

  /// True unless a non-degenerate row failed its tolerance.
  bool passed() const noexcept;
};

struct ReproduceOptions {
  std::uint64_t seed = 20140101;
  unsigned workers = 0;
  std::size_t mc_realizations = 20000;
  bool include_monte_carlo = true;
  std::size_t scan_points = 4001;
};

/// Detector used for the analytic scans: 2048 pixels at the CCD pitch
/// (+-4.76 mm), wide enough for the 5x super-wavelength line.
Setup analytic_scan_setup();

/// Resolution-law sweep: 2048 pixels at twice the CCD pitch (+-9.52 mm), so
/// the 5x super-wavelength line still spans three dark fringes.
Setup law_sweep_setup();

/// Reduced grids for the stochastic cross-check: 128 source samples over
/// +-80 um, 256 detector pixels of 27.9 um (6x6 binned CCD pixels).
Setup monte_carlo_setup();

/// Preset thermal lines (a)-(d) plus the flat alpha = 1 line, entangled
/// lines (a)-(d) plus the flat alpha = -1 line, a Monte-Carlo cross-check
/// of thermal line (b), and the N in {2, 3, 5} resolution-law sweep.
/// Sub-case failures are recorded in the rows; the report always completes.
RunReport reproduce_paper(const ReproduceOptions& options = {});

/// Aligned plain-text table; lengths in mm to 3 significant figures.
std::string format_table(const RunReport& report);

/// One JSON object per row, full precision.
std::string format_records(const RunReport& report);

}  // namespace g2lab
