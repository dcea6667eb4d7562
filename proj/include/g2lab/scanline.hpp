#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "g2lab/geometry.hpp"
#include "g2lab/surface.hpp"

namespace g2lab {

struct ScanRange {
  double x_min = 0.0;
  double x_max = 0.0;
};

/// Synchronized two-detector trajectory x1 = x, x2 = alpha x + beta.
///
/// A vertical line (x1 held at `beta`, x2 = x) covers the one affine scan
/// this parameterization cannot express.
struct ScanLine {
  double alpha = 0.0;
  double beta = 0.0;
  ScanRange range;
  std::size_t n_points = 2;
  std::string label;
  bool vertical = false;

  double x1_at(double x) const noexcept { return vertical ? beta : x; }
  double x2_at(double x) const noexcept { return vertical ? x : alpha * x + beta; }
  double step() const noexcept { return (range.x_max - range.x_min) / static_cast<double>(n_points - 1); }
  double parameter(std::size_t i) const noexcept { return range.x_min + step() * static_cast<double>(i); }

  /// Throws invalid_argument unless x_min < x_max and n_points >= 2.
  void validate() const;

  /// Lettered scans (a)-(d). Thermal: alpha = 0, -1, -2, 1/2.
  /// Entangled: alpha = 0, 1, 2, -1/2. beta = 0 throughout.
  static ScanLine preset(char letter, SourceKind source, ScanRange range, std::size_t n_points);
  static ScanLine vertical_line(double x1_fixed, ScanRange range, std::size_t n_points);
};

struct CrossSection {
  std::vector<double> parameter;
  std::vector<double> values;
  SourceKind source_kind = SourceKind::thermal;
  ScanLine line;
  Provenance provenance = Provenance::analytic;
  Normalization normalization = Normalization::raw;
  std::size_t excluded = 0;  // samples that fell outside the surface
};

/// Largest parameter interval for which both detector coordinates stay
/// inside the surface axes. nullopt if the line misses the surface.
std::optional<ScanRange> fit_range(const CorrelationSurface& surface, double alpha, double beta);

/// Bilinear samples of the surface along the line. Points outside the axes
/// are dropped and counted in `excluded`; a line entirely outside throws
/// empty_result.
CrossSection extract_cross_section(const CorrelationSurface& surface, const ScanLine& line);

/// `x,value` rows preceded by `# line <alpha> <beta> <x_min> <x_max> <n> <vertical>`,
/// `# source`, `# provenance`, `# normalization`, `# excluded` comments.
void write_section_csv(std::ostream& out, const CrossSection& section);
CrossSection read_section_csv(std::istream& in);

/// The pattern along this line carries no fringes.
struct Flat {};

struct Spacing {
  double length = 0.0;             // meters, along the scan parameter x
  double resolution_factor = 0.0;  // length / (lambda z / d)
};

using SpacingPrediction = std::variant<Spacing, Flat>;

/// Young fringe spacing lambda z / d. Requires a double-slit aperture.
double classical_baseline(const OpticalConfig& config, const ApertureSpec& aperture);

/// Thermal: lambda z / (d |alpha - 1|), Flat at alpha = 1.
/// Entangled: lambda z / (d |alpha + 1|), Flat at alpha = -1.
/// Vertical lines always give lambda z / d.
/// coherent_reference throws unsupported.
SpacingPrediction predict_fringe_spacing(const ScanLine& line, const OpticalConfig& config,
                                         const ApertureSpec& aperture, SourceKind source);

/// Parameter value where the line crosses the zeroth-order fringe
/// (x2 - x1 = 0 thermal, x1 + x2 = 0 entangled); nullopt for flat lines.
std::optional<double> zeroth_order_parameter(const ScanLine& line, SourceKind source);

}  // namespace g2lab
