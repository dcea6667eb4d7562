#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "g2lab/geometry.hpp"

namespace g2lab {

using Complex = std::complex<double>;

/// Complex amplitude on the source grid for one ensemble member.
struct SpeckleField {
  std::vector<Complex> samples;
  std::uint64_t realization_index = 0;
};

enum class PropagationMethod { direct, fft };

/// Direct discretized far-field transform with a cached kernel
///
///   E(x_m) = sum_j exp(-i (k/z) x_m x'_j) field(x'_j) dx'
///
/// restricted to the source samples listed in `active` (the aperture
/// support, typically). The constant exp(ikz)/(i lambda z) prefactor is
/// dropped. Immutable after construction and safe to share across threads.
class FraunhoferPropagator {
 public:
  explicit FraunhoferPropagator(const OpticalConfig& config);
  FraunhoferPropagator(const OpticalConfig& config, std::vector<std::size_t> active);

  std::size_t source_size() const noexcept { return n_source_; }
  std::size_t detector_size() const noexcept { return n_detector_; }
  const std::vector<std::size_t>& active() const noexcept { return active_; }

  void propagate(std::span<const Complex> source, std::span<Complex> detector) const;

 private:
  std::size_t n_source_;
  std::size_t n_detector_;
  std::vector<std::size_t> active_;
  std::vector<Complex> kernel_;  // n_detector_ x active_.size(), dx' folded in
};

/// Source indices where the aperture transmits.
std::vector<std::size_t> aperture_support(const OpticalConfig& config, const ApertureSpec& aperture);

/// DFT length M = lambda z / (pitch dx') when it is an integer no smaller
/// than the source sample count, i.e. when the detector pixels fall on the
/// DFT frequency comb of the zero-padded source. nullopt otherwise.
std::optional<std::size_t> fft_comb_length(const OpticalConfig& config);

/// One-shot propagation of a full source-grid field onto the detector grid.
/// `fft` requires fft_comb_length() and throws `unsupported` otherwise.
std::vector<Complex> fraunhofer_propagate(const SpeckleField& field, const OpticalConfig& config,
                                          PropagationMethod method = PropagationMethod::direct);

}  // namespace g2lab
