#include "g2lab/analytic.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

double abs2(std::complex<double> z) { return std::norm(z); }

// Spatial frequency for a detector-plane length (a lag or a coordinate).
double frequency(const OpticalConfig& config, double length) {
  return config.wavenumber() / config.distance() * length;
}

double thermal_of_lag(const OpticalConfig& config, const ApertureSpec& aperture, double lag) {
  // |T2~|^2 is even in the lag for real T; evaluate at |lag| so both
  // orderings of (x1, x2) hit identical arithmetic.
  return abs2(aperture.spectrum_of_square(frequency(config, std::abs(lag))));
}

double entangled_of_sum(const OpticalConfig& config, const ApertureSpec& aperture, double sum,
                        bool with_envelope) {
  if (aperture.kind() != ApertureSpec::Kind::double_slit)
    throw Error(ErrorCode::unsupported, "the entangled two-photon model is defined for double slits only");
  const double xi = frequency(config, std::abs(sum));
  const double c = std::cos(0.5 * aperture.slit_separation() * xi);
  double value = c * c;
  if (with_envelope) {
    const double s = sinc(0.5 * aperture.slit_width() * xi);
    value *= s * s;
  }
  return value;
}

}  // namespace

Axis detector_axis(const DetectorGrid& grid) noexcept {
  return Axis{grid.position(0), grid.position(grid.n_pixels - 1), grid.n_pixels};
}

double g2_thermal(const OpticalConfig& config, const ApertureSpec& aperture, double x1, double x2,
                  bool unit_peak) {
  const double value = thermal_of_lag(config, aperture, x2 - x1);
  return unit_peak ? value / abs2(aperture.spectrum_of_square(0.0)) : value;
}

double g2_entangled(const OpticalConfig& config, const ApertureSpec& aperture, double x1, double x2,
                    bool with_envelope) {
  return entangled_of_sum(config, aperture, x1 + x2, with_envelope);
}

double young_reference(const OpticalConfig& config, const ApertureSpec& aperture, double x,
                       bool unit_peak) {
  const double value = abs2(aperture.spectrum(frequency(config, std::abs(x))));
  return unit_peak ? value / abs2(aperture.spectrum(0.0)) : value;
}

CorrelationSurface evaluate_surface(const OpticalConfig& config, const ApertureSpec& aperture,
                                    SourceKind source, const SurfaceOptions& options) {
  const DetectorGrid& grid = config.detector();
  const std::size_t n = grid.n_pixels;
  if (n != 0 && (n > options.memory_budget_bytes / sizeof(double) / n)) {
    throw Error(ErrorCode::memory_budget,
                "surface of " + std::to_string(n) + "x" + std::to_string(n) +
                    " values exceeds the memory budget of " +
                    std::to_string(options.memory_budget_bytes) + " bytes");
  }

  const Axis axis = detector_axis(grid);
  CorrelationSurface surface(axis, axis, source, options.normalization, Provenance::analytic);
  const double pitch = grid.pixel_pitch;

  switch (source) {
    case SourceKind::thermal: {
      // profile[k] holds the lag (k - (n-1)) pixels.
      std::vector<double> profile(2 * n - 1);
      for (std::size_t k = 0; k < n; ++k) {
        const double v = thermal_of_lag(config, aperture, static_cast<double>(k) * pitch);
        profile[n - 1 + k] = v;
        profile[n - 1 - k] = v;
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) surface(i, j) = profile[j + n - 1 - i];
      break;
    }
    case SourceKind::entangled: {
      // x1 + x2 = (i + j - (n-1)) * pitch; profile is indexed by i + j.
      std::vector<double> profile(2 * n - 1);
      for (std::size_t k = 0; k < 2 * n - 1; ++k) {
        const double sum = (static_cast<double>(k) - static_cast<double>(n - 1)) * pitch;
        profile[k] = entangled_of_sum(config, aperture, sum, options.entangled_envelope);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) surface(i, j) = profile[i + j];
      break;
    }
    case SourceKind::coherent_reference: {
      std::vector<double> intensity(n);
      for (std::size_t i = 0; i < n; ++i) intensity[i] = young_reference(config, aperture, grid.position(i));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) surface(i, j) = intensity[i] * intensity[j];
      break;
    }
  }

  if (options.normalization == Normalization::unit_peak) {
    const double peak = surface.max_value();
    if (peak > 0.0) {
      for (double& v : surface.values()) v /= peak;
      surface.set_scale(peak);
    }
  }
  return surface;
}

}  // namespace g2lab
