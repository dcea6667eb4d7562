#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "g2lab/geometry.hpp"
#include "g2lab/propagation.hpp"
#include "g2lab/surface.hpp"

namespace g2lab {

struct EnsembleConfig {
  std::size_t n_realizations = 1;
  std::uint64_t rng_seed = 0;
  unsigned workers = 0;  // 0 = hardware concurrency
  bool record_variance = false;
  /// Also accumulate <E(x1) E*(x2)> and report |g1|^2 (Siegert checks).
  bool record_g1 = false;
};

/// One delta-correlated speckle realization: every source sample is an
/// independent circular complex Gaussian (unit variance in each quadrature)
/// times T(x'). Samples where T = 0 are exactly zero. The draw depends only
/// on (seed, realization_index), never on call order.
SpeckleField sample_thermal_source(const ApertureSpec& aperture, const OpticalConfig& config,
                                   std::uint64_t realization_index, std::uint64_t seed);

/// Pixel values |E|^2 * pitch (midpoint rule over each pixel).
std::vector<double> detector_intensity(std::span<const Complex> field, double pixel_pitch);
void detector_intensity(std::span<const Complex> field, double pixel_pitch, std::span<double> out);

struct G2Estimate {
  std::vector<double> mean_intensity_1;
  std::vector<double> mean_intensity_2;
  CorrelationSurface correlation;  // g2 = <I1 I2> / (<I1><I2>), raw, monte_carlo
  std::size_t n_used = 0;
  std::optional<CorrelationSurface> stderr_surface;
  std::optional<CorrelationSurface> g1_abs2;
};

/// Ensemble estimate of the normalized intensity correlation when both
/// detectors share the configured detector grid and view the same field.
/// Deterministic for a fixed seed regardless of `workers`.
G2Estimate estimate_g2(const ApertureSpec& aperture, const OpticalConfig& config, const EnsembleConfig& ensemble);

}  // namespace g2lab
