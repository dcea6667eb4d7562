#pragma once

#include <cstddef>

#include "g2lab/geometry.hpp"
#include "g2lab/surface.hpp"

namespace g2lab {

/// Axis spanning the pixel centers of a detector row.
Axis detector_axis(const DetectorGrid& grid) noexcept;

/// Thermal-light correlation |T2~((k/z)(x2 - x1))|^2, the correlated
/// (fluctuation) part only; the constant thermal background is not included.
/// With `unit_peak`, divided by its value at x1 = x2.
double g2_thermal(const OpticalConfig& config, const ApertureSpec& aperture, double x1, double x2,
                  bool unit_peak = false);

/// Entangled-pair coincidence rate cos^2[(k d / 2z)(x1 + x2)].
/// The single-slit envelope is left out unless `with_envelope` is set, in
/// which case the pattern is multiplied by sinc^2(a k (x1 + x2) / 2z).
double g2_entangled(const OpticalConfig& config, const ApertureSpec& aperture, double x1, double x2,
                    bool with_envelope = false);

/// Coherent far-field intensity |T~(k x / z)|^2 (Young's pattern).
double young_reference(const OpticalConfig& config, const ApertureSpec& aperture, double x,
                       bool unit_peak = false);

struct SurfaceOptions {
  Normalization normalization = Normalization::unit_peak;
  /// Upper bound on the dense value buffer; larger grids are rejected.
  std::size_t memory_budget_bytes = std::size_t{512} << 20;
  bool entangled_envelope = false;
};

/// Dense evaluation over detector grid x detector grid.
///
/// Thermal surfaces depend only on the pixel lag and entangled ones only on
/// the pixel-index sum, so each is filled from a 1-D profile of 2n-1 values;
/// diagonals (resp. anti-diagonals) are therefore exactly constant. The
/// coherent reference is the factorized product I(x1) I(x2).
///
/// `raw` and `background_subtracted` both store the unscaled closed form
/// (it has no background term); `unit_peak` divides by the grid maximum and
/// records that factor as the surface scale.
CorrelationSurface evaluate_surface(const OpticalConfig& config, const ApertureSpec& aperture,
                                    SourceKind source, const SurfaceOptions& options = {});

}  // namespace g2lab
