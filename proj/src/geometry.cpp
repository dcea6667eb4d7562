#include "g2lab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

std::string fmt_length(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double sinc(double u) noexcept {
  if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

ApertureSpec ApertureSpec::double_slit(double width, double separation) {
  if (!positive_finite(width))
    throw Error(ErrorCode::invalid_argument, "slit width must be positive");
  if (!std::isfinite(separation) || separation <= width)
    throw Error(ErrorCode::invalid_argument,
                "slit separation must exceed the slit width (slits would overlap)");
  ApertureSpec spec;
  spec.kind_ = Kind::double_slit;
  spec.width_ = width;
  spec.separation_ = separation;
  return spec;
}

ApertureSpec ApertureSpec::custom(double start, double step, std::vector<double> samples) {
  if (!std::isfinite(start) || !positive_finite(step))
    throw Error(ErrorCode::invalid_argument, "custom profile needs a finite start and positive step");
  if (samples.size() < 2)
    throw Error(ErrorCode::invalid_argument, "custom profile needs at least two samples");
  for (double t : samples) {
    if (!(t >= 0.0 && t <= 1.0))
      throw Error(ErrorCode::invalid_argument, "transmission samples must lie in [0, 1]");
  }
  ApertureSpec spec;
  spec.kind_ = Kind::custom;
  spec.start_ = start;
  spec.step_ = step;
  spec.samples_ = std::move(samples);
  return spec;
}

double ApertureSpec::support_half_extent() const noexcept {
  if (kind_ == Kind::double_slit) return 0.5 * (separation_ + width_);
  const double end = start_ + step_ * static_cast<double>(samples_.size() - 1);
  return std::max(std::abs(start_), std::abs(end));
}

double ApertureSpec::transmission(double x) const noexcept {
  if (kind_ == Kind::double_slit) {
    const double half_width = 0.5 * width_;
    const double center = 0.5 * separation_;
    return (std::abs(x - center) <= half_width || std::abs(x + center) <= half_width) ? 1.0 : 0.0;
  }
  const double u = (x - start_) / step_;
  const auto last = static_cast<double>(samples_.size() - 1);
  if (!(u >= 0.0 && u <= last)) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(u), samples_.size() - 2);
  const double frac = u - static_cast<double>(i);
  const double t = samples_[i] + frac * (samples_[i + 1] - samples_[i]);
  return std::clamp(t, 0.0, 1.0);
}

std::complex<double> ApertureSpec::trapezoid(double xi, bool squared) const {
  std::complex<double> acc{0.0, 0.0};
  const std::size_t n = samples_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double t = samples_[i];
    if (squared) t *= t;
    if (t == 0.0) continue;
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    const double phase = -xi * (start_ + step_ * static_cast<double>(i));
    acc += w * t * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc * step_;
}

std::complex<double> ApertureSpec::spectrum_of_square(double xi) const {
  if (kind_ == Kind::double_slit) {
    // T is 0/1, so T^2 = T.
    return {2.0 * width_ * sinc(0.5 * width_ * xi) * std::cos(0.5 * separation_ * xi), 0.0};
  }
  return trapezoid(xi, true);
}

std::complex<double> ApertureSpec::spectrum(double xi) const {
  if (kind_ == Kind::double_slit) return spectrum_of_square(xi);
  return trapezoid(xi, false);
}

OpticalConfig::OpticalConfig(double wavelength, double distance, SourceGrid source,
                             DetectorGrid detector)
    : wavelength_(wavelength), distance_(distance), source_(source), detector_(detector) {
  if (!positive_finite(wavelength_))
    throw Error(ErrorCode::invalid_argument, "wavelength must be positive");
  if (!positive_finite(distance_))
    throw Error(ErrorCode::invalid_argument, "propagation distance must be positive");
  if (!positive_finite(source_.half_extent) || source_.n_samples < 1)
    throw Error(ErrorCode::invalid_argument, "source grid needs a positive extent and at least one sample");
  if (!positive_finite(detector_.pixel_pitch) || detector_.n_pixels < 1)
    throw Error(ErrorCode::invalid_argument, "detector grid needs a positive pitch and at least one pixel");

  const double limit = wavelength_ * distance_ / (2.0 * detector_.half_extent());
  const double dx = source_.spacing();
  if (dx > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "Fraunhofer sampling criterion violated: source spacing " << dx * 1e6
        << " um exceeds lambda*z/(2*detector_half_extent) = " << limit * 1e6
        << " um; increase source samples to at least "
        << static_cast<std::size_t>(std::ceil(2.0 * source_.half_extent / limit))
        << " or shrink the detector window";
    throw Error(ErrorCode::sampling_violation, msg.str());
  }
}

OpticalConfig OpticalConfig::with_source(SourceGrid source) const {
  return OpticalConfig(wavelength_, distance_, source, detector_);
}

OpticalConfig OpticalConfig::with_detector(DetectorGrid detector) const {
  return OpticalConfig(wavelength_, distance_, source_, detector);
}

namespace paper_preset {

ApertureSpec aperture() { return ApertureSpec::double_slit(slit_width, slit_separation); }

OpticalConfig optics() {
  return OpticalConfig(wavelength, distance, SourceGrid{source_half_extent, source_samples},
                       DetectorGrid{pixel_pitch, ccd_row_pixels});
}

}  // namespace paper_preset

std::string describe(const OpticalConfig& config, const ApertureSpec& aperture) {
  std::ostringstream out;
  out << "wavelength=" << fmt_length(config.wavelength())
      << " distance=" << fmt_length(config.distance())
      << " source_half_extent=" << fmt_length(config.source().half_extent)
      << " source_samples=" << config.source().n_samples
      << " pixel_pitch=" << fmt_length(config.detector().pixel_pitch)
      << " pixels=" << config.detector().n_pixels;
  if (aperture.kind() == ApertureSpec::Kind::double_slit) {
    out << " aperture=double_slit width=" << fmt_length(aperture.slit_width())
        << " separation=" << fmt_length(aperture.slit_separation());
  } else {
    out << " aperture=custom start=" << fmt_length(aperture.profile_start())
        << " step=" << fmt_length(aperture.profile_step()) << " samples=";
    for (double t : aperture.profile()) out << fmt_length(t) << ',';
  }
  return out.str();
}

std::uint64_t config_hash(const OpticalConfig& config, const ApertureSpec& aperture) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : describe(config, aperture)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace g2lab
