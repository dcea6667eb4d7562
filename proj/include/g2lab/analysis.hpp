#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "g2lab/error.hpp"
#include "g2lab/scanline.hpp"

namespace g2lab {

inline constexpr double kDefaultMinProminence = 0.2;
inline constexpr double kCentralWindowPeriods = 5.0;
/// Sections whose range is below this fraction of their magnitude are flat.
inline constexpr double kFlatRelativeRange = 1e-12;

struct PeakOptions {
  /// Fraction of (max - min) over the window a peak must stand out by.
  double min_prominence = kDefaultMinProminence;
  /// Restrict the analysis to |x - center| <= width / 2.
  std::optional<double> window_center;
  std::optional<double> window_width;
  /// Baseline removed before prominence evaluation. When unset, 1.0 is used
  /// for raw Monte-Carlo thermal sections (the g2 background) and 0 otherwise.
  std::optional<double> background;
  /// lambda z / d, to report a resolution factor.
  std::optional<double> classical_baseline;
};

struct FringeReport {
  std::vector<double> peak_positions;    // bright-fringe maxima, increasing
  std::vector<double> trough_positions;  // dark-fringe minima, increasing
  /// Fringe period: mean adjacent difference of the dark fringes when at
  /// least two are found, otherwise of the maxima. Dark fringes are zeros of
  /// the interference factor and do not move under a smooth envelope;
  /// maxima are pulled toward the envelope peak.
  double mean_spacing = 0.0;
  double spacing_std = 0.0;
  /// Mean adjacent difference of the maxima alone.
  double peak_spacing = 0.0;
  double visibility = 0.0;
  std::optional<double> resolution_factor;
  double background_level = 0.0;
  std::size_t n_peaks = 0;
};

/// Thrown when fewer than two maxima are found; carries what was found.
class NoSpacingError : public Error {
 public:
  NoSpacingError(const std::string& what, FringeReport partial)
      : Error(ErrorCode::no_spacing, what), report_(std::move(partial)) {}
  const FringeReport& report() const noexcept { return report_; }

 private:
  FringeReport report_;
};

/// Local extrema with prominence >= min_prominence * (max - min), refined
/// by a 3-point parabola; plateaus resolve to their midpoint.
/// Requires at least 16 samples and min_prominence in (0, 1). A section
/// flat to within kFlatRelativeRange has no extrema.
FringeReport detect_peaks(const CrossSection& section, const PeakOptions& options = {});

/// Window of kCentralWindowPeriods predicted periods around the zeroth-order
/// fringe, plus the classical baseline. Flat lines get no window.
PeakOptions central_window_options(const ScanLine& line, const SpacingPrediction& prediction,
                                   SourceKind source, double classical_baseline_length);

/// (I_max - I_min) / (I_max + I_min) over a window of the given width
/// centered on the middle of the section. Throws invalid_argument when the
/// window is not positive or wider than the section.
double measure_visibility(const CrossSection& section, double window);

}  // namespace g2lab
