#include "g2lab/montecarlo.hpp"

#include <cmath>

#include "ensemble.hpp"
#include "g2lab/analytic.hpp"
#include "g2lab/error.hpp"
#include "g2lab/philox.hpp"

namespace g2lab {

SpeckleField sample_thermal_source(const ApertureSpec& aperture, const OpticalConfig& config,
                                   std::uint64_t realization_index, std::uint64_t seed) {
  const auto& grid = config.source();
  SpeckleField field{std::vector<Complex>(grid.n_samples), realization_index};
  const PhiloxStream stream(seed, realization_index, Stream::source_field);
  for (std::size_t j = 0; j < grid.n_samples; ++j) {
    const double t = aperture.transmission(grid.position(j));
    if (t == 0.0) continue;
    // Box-Muller on one Philox block per sample.
    const auto w = stream.block_at(static_cast<std::uint32_t>(j));
    const double u1 = open_unit(w[0], w[1]);
    const double u2 = open_unit(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * kPi * u2;
    field.samples[j] = Complex(r * std::cos(phi), r * std::sin(phi)) * t;
  }
  return field;
}

void detector_intensity(std::span<const Complex> field, double pixel_pitch, std::span<double> out) {
  for (std::size_t m = 0; m < field.size(); ++m) out[m] = std::norm(field[m]) * pixel_pitch;
}

std::vector<double> detector_intensity(std::span<const Complex> field, double pixel_pitch) {
  std::vector<double> out(field.size());
  detector_intensity(field, pixel_pitch, out);
  return out;
}

G2Estimate estimate_g2(const ApertureSpec& aperture, const OpticalConfig& config, const EnsembleConfig& ensemble) {
  if (ensemble.n_realizations < 1)
    throw Error(ErrorCode::invalid_argument, "ensemble needs at least one realization");

  const std::size_t n_pix = config.detector().n_pixels;
  const double pitch = config.detector().pixel_pitch;
  const FraunhoferPropagator propagator(config, aperture_support(config, aperture));

  detail::MomentTotals totals(n_pix, n_pix, true, ensemble.record_variance, ensemble.record_g1);
  detail::run_blocks_ordered<detail::MomentBlock>(
      ensemble.n_realizations, ensemble.workers,
      [&](std::size_t first, std::size_t last) {
        detail::MomentBlock block = totals.empty_block();
        std::vector<Complex> detector(n_pix);
        std::vector<double> intensity(n_pix);
        for (std::size_t r = first; r < last; ++r) {
          const SpeckleField field = sample_thermal_source(aperture, config, r, ensemble.rng_seed);
          propagator.propagate(field.samples, detector);
          detector_intensity(detector, pitch, intensity);
          block.add(intensity, intensity);
          if (ensemble.record_g1) block.add_field(detector);
        }
        return block;
      },
      [&](detail::MomentBlock&& block) { totals.merge(block); });

  const Axis axis = detector_axis(config.detector());
  auto norm = totals.finalize(ensemble.n_realizations, axis, axis, pitch);
  return G2Estimate{std::move(norm.mean1), std::move(norm.mean2), std::move(norm.g2), ensemble.n_realizations,
                    std::move(norm.stderr_surface), std::move(norm.g1_abs2)};
}

}  // namespace g2lab
