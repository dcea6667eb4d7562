#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "g2lab/geometry.hpp"
#include "g2lab/montecarlo.hpp"
#include "g2lab/surface.hpp"

namespace g2lab {

/// Stack of 1-D detector rows, one per speckle realization.
struct FrameStack {
  std::size_t n_frames = 0;
  std::size_t n_pixels = 0;
  double pixel_pitch = 0.0;
  std::string exposure_tag;
  std::uint64_t seed = 0;
  double poisson_mean = 0.0;  // 0 = noiseless
  std::vector<double> data;   // n_frames * n_pixels, row-major

  std::span<const double> frame(std::size_t i) const noexcept {
    return std::span<const double>(data).subspan(i * n_pixels, n_pixels);
  }
  std::span<double> frame(std::size_t i) noexcept { return std::span<double>(data).subspan(i * n_pixels, n_pixels); }

  bool operator==(const FrameStack&) const = default;
};

struct NoiseModel {
  /// Mean photon count per pixel; nullopt for noiseless frames.
  std::optional<double> poisson_mean;
};

/// Frames for two detectors behind an ideal 50/50 beam splitter: frame i of
/// both stacks comes from speckle realization i. Without noise the stacks
/// are identical. With Poisson noise each pixel becomes a photon count drawn
/// with mean poisson_mean * I / <I>, using independent substreams per stack.
std::pair<FrameStack, FrameStack> synthesize_frames(const ApertureSpec& aperture, const OpticalConfig& config,
                                                    const EnsembleConfig& ensemble, const NoiseModel& noise = {});

/// g2(x1, x2) = mean_i[I1_i(x1) I2_i(x2)] / (mean_i[I1_i(x1)] mean_i[I2_i(x2)]).
/// Accumulates in frame order exactly like estimate_g2.
CorrelationSurface correlate_frames(const FrameStack& stack1, const FrameStack& stack2, unsigned workers = 0);

/// Binary container, little-endian:
///   "G2FS" | u32 version=1 | u64 frames | u64 pixels | f64 pitch | u64 seed |
///   f64 poisson_mean | u32 tag_len | tag bytes | frames*pixels f64 values
void write_frames(std::ostream& out, const FrameStack& stack);
FrameStack read_frames(std::istream& in);

/// One row per frame, comma-separated pixel values.
void write_frames_csv(std::ostream& out, const FrameStack& stack);

}  // namespace g2lab
