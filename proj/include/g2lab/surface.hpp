#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace g2lab {

enum class SourceKind { thermal, entangled, coherent_reference };
enum class Normalization { raw, background_subtracted, unit_peak };
enum class Provenance { analytic, monte_carlo };

std::string_view to_string(SourceKind kind) noexcept;
std::string_view to_string(Normalization norm) noexcept;
std::string_view to_string(Provenance prov) noexcept;
SourceKind parse_source_kind(std::string_view text);
Normalization parse_normalization(std::string_view text);
Provenance parse_provenance(std::string_view text);

/// Uniform coordinate axis [min, max] with n >= 1 points (meters).
struct Axis {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 1;

  double step() const noexcept { return n > 1 ? (max - min) / static_cast<double>(n - 1) : 0.0; }
  double at(std::size_t i) const noexcept { return min + step() * static_cast<double>(i); }
  bool contains(double x) const noexcept;
  bool operator==(const Axis&) const = default;
};

/// Dense G2(x1, x2) grid; row index follows x1, column index follows x2.
class CorrelationSurface {
 public:
  CorrelationSurface(Axis axis_x1, Axis axis_x2, SourceKind source, Normalization normalization,
                     Provenance provenance);

  const Axis& axis_x1() const noexcept { return axis_x1_; }
  const Axis& axis_x2() const noexcept { return axis_x2_; }
  SourceKind source_kind() const noexcept { return source_; }
  Normalization normalization() const noexcept { return normalization_; }
  Provenance provenance() const noexcept { return provenance_; }

  /// Multiply values by this to recover the unnormalized quantity.
  double scale() const noexcept { return scale_; }
  void set_scale(double s) noexcept { scale_ = s; }
  void set_normalization(Normalization n) noexcept { normalization_ = n; }

  std::size_t rows() const noexcept { return axis_x1_.n; }
  std::size_t cols() const noexcept { return axis_x2_.n; }

  double& operator()(std::size_t i1, std::size_t i2) noexcept { return values_[i1 * cols() + i2]; }
  double operator()(std::size_t i1, std::size_t i2) const noexcept { return values_[i1 * cols() + i2]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row(std::size_t i1) const noexcept {
    return std::span<const double>(values_).subspan(i1 * cols(), cols());
  }

  double max_value() const noexcept;

  /// Bilinear interpolation; nullopt outside the axes.
  std::optional<double> interpolate(double x1, double x2) const noexcept;

  bool operator==(const CorrelationSurface&) const = default;

 private:
  Axis axis_x1_;
  Axis axis_x2_;
  SourceKind source_;
  Normalization normalization_;
  Provenance provenance_;
  double scale_ = 1.0;
  std::vector<double> values_;
};

/// values - level, tagged background_subtracted.
CorrelationSurface subtract_background(const CorrelationSurface& surface, double level);

/// Divides by the maximum value. A background-subtracted surface keeps its
/// tag (it may hold small negative values); otherwise the tag becomes
/// unit_peak. Throws zero_intensity if the maximum is not positive.
CorrelationSurface normalize_to_unit_peak(const CorrelationSurface& surface);

/// Plain-text matrix: `# axis_x1 <min> <max> <n>`, `# axis_x2 ...`,
/// `# source <kind>`, `# normalization <tag>`, `# provenance <p>`,
/// `# scale <s>`, then one whitespace-separated row per x1 sample.
void write_matrix(std::ostream& out, const CorrelationSurface& surface);
CorrelationSurface read_matrix(std::istream& in);

/// `x1,x2,value` rows with a header line. Intended for small grids.
void write_csv(std::ostream& out, const CorrelationSurface& surface);

}  // namespace g2lab
