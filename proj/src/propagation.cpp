#include "g2lab/propagation.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

Complex unit_phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

void check_field_size(std::size_t got, std::size_t want) {
  if (got != want)
    throw Error(ErrorCode::invalid_argument, "field has " + std::to_string(got) +
                                                 " samples but the source grid has " + std::to_string(want));
}

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

std::vector<Complex> propagate_direct(std::span<const Complex> field, const OpticalConfig& config) {
  const auto& src = config.source();
  const auto& det = config.detector();
  const double k_over_z = config.wavenumber() / config.distance();
  const double dx = src.spacing();
  std::vector<Complex> out(det.n_pixels, Complex{});
  for (std::size_t j = 0; j < src.n_samples; ++j) {
    if (field[j] == Complex{}) continue;
    const double xs = src.position(j);
    const Complex weighted = field[j] * dx;
    for (std::size_t m = 0; m < det.n_pixels; ++m) out[m] += unit_phasor(-k_over_z * det.position(m) * xs) * weighted;
  }
  return out;
}

// With theta = (k/z) pitch dx' = 2 pi / M and centered indices
// x_m = (m - c_d) pitch, x'_j = (j - c_s) dx':
//   E_m = dx' exp(i theta c_s (m - c_d)) * DFT_M[ field_j exp(i theta c_d j) ](m mod M)
std::vector<Complex> propagate_fft(std::span<const Complex> field, const OpticalConfig& config,
                                   std::size_t comb) {
  const auto& src = config.source();
  const auto& det = config.detector();
  const double theta = 2.0 * kPi / static_cast<double>(comb);
  const double c_s = 0.5 * static_cast<double>(src.n_samples - 1);
  const double c_d = 0.5 * static_cast<double>(det.n_pixels - 1);

  std::unique_ptr<fftw_complex[], FftwFree> buf(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * comb)));
  if (!buf) throw std::bad_alloc();
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(comb), buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw Error(ErrorCode::unsupported, "FFTW could not plan a transform of length " + std::to_string(comb));

  for (std::size_t j = 0; j < comb; ++j) {
    Complex v{};
    if (j < src.n_samples) {
      // Reduce j*c_d modulo M before scaling so the phase stays small.
      const double turns = std::fmod(static_cast<double>(j) * c_d, static_cast<double>(comb));
      v = field[j] * unit_phasor(theta * turns);
    }
    buf[j][0] = v.real();
    buf[j][1] = v.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<Complex> out(det.n_pixels);
  const double dx = src.spacing();
  for (std::size_t m = 0; m < det.n_pixels; ++m) {
    const std::size_t bin = m % comb;
    const double turns = std::fmod(c_s * (static_cast<double>(m) - c_d), static_cast<double>(comb));
    out[m] = Complex(buf[bin][0], buf[bin][1]) * unit_phasor(theta * turns) * dx;
  }
  return out;
}

}  // namespace

FraunhoferPropagator::FraunhoferPropagator(const OpticalConfig& config)
    : FraunhoferPropagator(config, [&] {
        std::vector<std::size_t> all(config.source().n_samples);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
      }()) {}

FraunhoferPropagator::FraunhoferPropagator(const OpticalConfig& config, std::vector<std::size_t> active)
    : n_source_(config.source().n_samples),
      n_detector_(config.detector().n_pixels),
      active_(std::move(active)) {
  for (std::size_t j : active_) {
    if (j >= n_source_) throw Error(ErrorCode::invalid_argument, "active source index out of range");
  }
  const double k_over_z = config.wavenumber() / config.distance();
  const double dx = config.source().spacing();
  kernel_.resize(n_detector_ * active_.size());
  for (std::size_t m = 0; m < n_detector_; ++m) {
    const double xd = config.detector().position(m);
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const double xs = config.source().position(active_[a]);
      kernel_[m * active_.size() + a] = unit_phasor(-k_over_z * xd * xs) * dx;
    }
  }
}

void FraunhoferPropagator::propagate(std::span<const Complex> source, std::span<Complex> detector) const {
  check_field_size(source.size(), n_source_);
  if (detector.size() != n_detector_)
    throw Error(ErrorCode::invalid_argument, "detector buffer size does not match the detector grid");
  const std::size_t n_active = active_.size();
  for (std::size_t m = 0; m < n_detector_; ++m) {
    const Complex* row = kernel_.data() + m * n_active;
    double re = 0.0, im = 0.0;
    for (std::size_t a = 0; a < n_active; ++a) {
      const Complex f = source[active_[a]];
      re += row[a].real() * f.real() - row[a].imag() * f.imag();
      im += row[a].real() * f.imag() + row[a].imag() * f.real();
    }
    detector[m] = {re, im};
  }
}

std::vector<std::size_t> aperture_support(const OpticalConfig& config, const ApertureSpec& aperture) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < config.source().n_samples; ++j) {
    if (aperture.transmission(config.source().position(j)) != 0.0) idx.push_back(j);
  }
  return idx;
}

std::optional<std::size_t> fft_comb_length(const OpticalConfig& config) {
  const double m = config.wavelength() * config.distance() /
                   (config.detector().pixel_pitch * config.source().spacing());
  const double rounded = std::round(m);
  if (std::abs(m - rounded) > 1e-9 * rounded) return std::nullopt;
  if (rounded < static_cast<double>(config.source().n_samples) || rounded > 1e9) return std::nullopt;
  return static_cast<std::size_t>(rounded);
}

std::vector<Complex> fraunhofer_propagate(const SpeckleField& field, const OpticalConfig& config,
                                          PropagationMethod method) {
  check_field_size(field.samples.size(), config.source().n_samples);
  if (method == PropagationMethod::direct) return propagate_direct(field.samples, config);
  const auto comb = fft_comb_length(config);
  if (!comb)
    throw Error(ErrorCode::unsupported,
                "detector pixels are not on the DFT frequency comb (lambda z / (pitch dx') must be an integer "
                ">= source samples); use the direct transform");
  return propagate_fft(field.samples, config, *comb);
}

}  // namespace g2lab
