#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace g2lab {

inline constexpr double kPi = std::numbers::pi;

/// Unnormalized sinc: sin(u)/u, with sinc(0) = 1.
///
/// This is NOT the pi-normalized sinc (sin(pi u)/(pi u)) used by numpy and
/// most DSP texts. Every closed form in this library is written against the
/// unnormalized convention.
double sinc(double u) noexcept;

/// One-dimensional transmission function T(x') of the object in front of
/// the source. All lengths are SI meters.
class ApertureSpec {
 public:
  enum class Kind { double_slit, custom };

  /// Two slits of width `width`, centers at +-separation/2.
  static ApertureSpec double_slit(double width, double separation);

  /// Sampled profile on the uniform grid x_i = start + i * step, linearly
  /// interpolated between samples and zero outside [start, start+(n-1)step].
  static ApertureSpec custom(double start, double step, std::vector<double> samples);

  Kind kind() const noexcept { return kind_; }
  double slit_width() const noexcept { return width_; }
  double slit_separation() const noexcept { return separation_; }
  double profile_start() const noexcept { return start_; }
  double profile_step() const noexcept { return step_; }
  const std::vector<double>& profile() const noexcept { return samples_; }

  /// Half-width of the region where T may be nonzero.
  double support_half_extent() const noexcept;

  /// T(x'). Slit edges are inclusive: |x' -+ d/2| <= a/2 gives 1.
  double transmission(double x_prime) const noexcept;

  /// Fourier transform of T^2: integral of T(x')^2 exp(-i xi x') dx'.
  /// Double slit: 2a sinc(a xi/2) cos(d xi/2). Custom: trapezoid rule.
  std::complex<double> spectrum_of_square(double xi) const;

  /// Fourier transform of T itself (coherent illumination). Identical to
  /// spectrum_of_square for a binary double slit.
  std::complex<double> spectrum(double xi) const;

 private:
  ApertureSpec() = default;

  std::complex<double> trapezoid(double xi, bool squared) const;

  Kind kind_ = Kind::double_slit;
  double width_ = 0.0;
  double separation_ = 0.0;
  double start_ = 0.0;
  double step_ = 0.0;
  std::vector<double> samples_;
};

/// Uniform midpoint grid on the source plane: x'_j = -h + (j + 1/2) dx'.
struct SourceGrid {
  double half_extent = 0.0;
  std::size_t n_samples = 0;

  double spacing() const noexcept { return 2.0 * half_extent / static_cast<double>(n_samples); }
  double position(std::size_t j) const noexcept {
    return (static_cast<double>(j) - 0.5 * static_cast<double>(n_samples - 1)) * spacing();
  }
};

/// Pixel row centered on the optical axis: x_m = (m - (n-1)/2) * pitch.
struct DetectorGrid {
  double pixel_pitch = 0.0;
  std::size_t n_pixels = 0;

  double half_extent() const noexcept { return 0.5 * pixel_pitch * static_cast<double>(n_pixels); }
  double position(std::size_t m) const noexcept {
    return (static_cast<double>(m) - 0.5 * static_cast<double>(n_pixels - 1)) * pixel_pitch;
  }
};

/// Wavelength, propagation distance and the two sampling grids.
///
/// The constructor enforces the Fraunhofer sampling criterion
/// dx' <= lambda z / (2 * detector_half_extent); a kernel sampled more
/// coarsely aliases within the detector window.
class OpticalConfig {
 public:
  OpticalConfig(double wavelength, double distance, SourceGrid source, DetectorGrid detector);

  double wavelength() const noexcept { return wavelength_; }
  double distance() const noexcept { return distance_; }
  double wavenumber() const noexcept { return 2.0 * kPi / wavelength_; }
  const SourceGrid& source() const noexcept { return source_; }
  const DetectorGrid& detector() const noexcept { return detector_; }

  OpticalConfig with_source(SourceGrid source) const;
  OpticalConfig with_detector(DetectorGrid detector) const;

 private:
  double wavelength_;
  double distance_;
  SourceGrid source_;
  DetectorGrid detector_;
};

/// Experimental constants of the pseudo-thermal double-slit measurement.
namespace paper_preset {
inline constexpr double wavelength = 457e-9;
inline constexpr double slit_width = 0.038e-3;
inline constexpr double slit_separation = 0.12e-3;
inline constexpr double distance = 0.23;
inline constexpr double pixel_pitch = 4.65e-6;
inline constexpr std::size_t ccd_row_pixels = 1392;

// 40 nm source sampling puts every slit edge (+-41 um, +-79 um) on a cell
// boundary, so the midpoint grid reproduces the slit widths exactly.
inline constexpr double source_half_extent = 81.92e-6;
inline constexpr std::size_t source_samples = 4096;

ApertureSpec aperture();
OpticalConfig optics();
}  // namespace paper_preset

/// Stable 64-bit FNV-1a digest of the full configuration, for run sidecars.
std::uint64_t config_hash(const OpticalConfig& config, const ApertureSpec& aperture);

/// Human-readable one-line summary (SI units, full precision).
std::string describe(const OpticalConfig& config, const ApertureSpec& aperture);

}  // namespace g2lab
