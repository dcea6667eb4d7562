#include "g2lab/frames.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>

#include "ensemble.hpp"
#include "g2lab/analytic.hpp"
#include "g2lab/error.hpp"
#include "g2lab/philox.hpp"

namespace g2lab {

namespace {

constexpr char kMagic[4] = {'G', '2', 'F', 'S'};
constexpr std::uint32_t kVersion = 1;

template <class U>
void put(std::ostream& out, U value) {
  unsigned char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }

template <class U>
U get(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U)))
    throw Error(ErrorCode::parse, "truncated frame-stack file");
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

// Ensemble-mean pixel value for the delta-correlated source: each source
// sample contributes 2 |T|^2 dx'^2 independently of the detector position.
double mean_pixel_intensity(const ApertureSpec& aperture, const OpticalConfig& config) {
  const auto& src = config.source();
  double sum = 0.0;
  for (std::size_t j = 0; j < src.n_samples; ++j) {
    const double t = aperture.transmission(src.position(j));
    sum += t * t;
  }
  return 2.0 * sum * src.spacing() * src.spacing() * config.detector().pixel_pitch;
}

void apply_shot_noise(std::span<double> row, double scale, std::uint64_t seed, std::uint64_t realization,
                      Stream stream) {
  PhiloxStream engine(seed, realization, stream);
  for (double& v : row) {
    const double mean = v * scale;
    if (mean <= 0.0) {
      v = 0.0;
      continue;
    }
    std::poisson_distribution<long long> draw(mean);
    v = static_cast<double>(draw(engine));
  }
}

}  // namespace

std::pair<FrameStack, FrameStack> synthesize_frames(const ApertureSpec& aperture, const OpticalConfig& config,
                                                    const EnsembleConfig& ensemble, const NoiseModel& noise) {
  if (ensemble.n_realizations < 1)
    throw Error(ErrorCode::invalid_argument, "ensemble needs at least one realization");
  if (noise.poisson_mean && !(*noise.poisson_mean > 0.0))
    throw Error(ErrorCode::invalid_argument, "Poisson mean photon count must be positive");

  const std::size_t n_pix = config.detector().n_pixels;
  const double pitch = config.detector().pixel_pitch;

  FrameStack s1;
  s1.n_frames = ensemble.n_realizations;
  s1.n_pixels = n_pix;
  s1.pixel_pitch = pitch;
  s1.exposure_tag = "synthetic";
  s1.seed = ensemble.rng_seed;
  s1.poisson_mean = noise.poisson_mean.value_or(0.0);
  s1.data.assign(s1.n_frames * n_pix, 0.0);
  FrameStack s2 = s1;

  const FraunhoferPropagator propagator(config, aperture_support(config, aperture));
  const double scale = noise.poisson_mean ? *noise.poisson_mean / mean_pixel_intensity(aperture, config) : 0.0;

  struct Done {};
  detail::run_blocks_ordered<Done>(
      ensemble.n_realizations, ensemble.workers,
      [&](std::size_t first, std::size_t last) {
        std::vector<Complex> detector(n_pix);
        for (std::size_t r = first; r < last; ++r) {
          const SpeckleField field = sample_thermal_source(aperture, config, r, ensemble.rng_seed);
          propagator.propagate(field.samples, detector);
          auto row1 = s1.frame(r);
          auto row2 = s2.frame(r);
          detector_intensity(detector, pitch, row1);
          std::copy(row1.begin(), row1.end(), row2.begin());
          if (noise.poisson_mean) {
            apply_shot_noise(row1, scale, ensemble.rng_seed, r, Stream::shot_noise_1);
            apply_shot_noise(row2, scale, ensemble.rng_seed, r, Stream::shot_noise_2);
          }
        }
        return Done{};
      },
      [](Done&&) {});
  return {std::move(s1), std::move(s2)};
}

CorrelationSurface correlate_frames(const FrameStack& stack1, const FrameStack& stack2, unsigned workers) {
  if (stack1.n_frames != stack2.n_frames || stack1.n_pixels != stack2.n_pixels)
    throw Error(ErrorCode::invalid_argument, "frame stacks differ in frame count or row length");
  if (stack1.pixel_pitch != stack2.pixel_pitch)
    throw Error(ErrorCode::invalid_argument, "frame stacks differ in pixel pitch");
  if (stack1.n_frames == 0 || stack1.n_pixels == 0)
    throw Error(ErrorCode::invalid_argument, "frame stacks are empty");

  const std::size_t n_pix = stack1.n_pixels;
  detail::MomentTotals totals(n_pix, n_pix, false, false, false);
  detail::run_blocks_ordered<detail::MomentBlock>(
      stack1.n_frames, workers,
      [&](std::size_t first, std::size_t last) {
        detail::MomentBlock block = totals.empty_block();
        for (std::size_t i = first; i < last; ++i) block.add(stack1.frame(i), stack2.frame(i));
        return block;
      },
      [&](detail::MomentBlock&& block) { totals.merge(block); });

  const Axis axis = detector_axis(DetectorGrid{stack1.pixel_pitch, n_pix});
  return std::move(totals.finalize(stack1.n_frames, axis, axis, 1.0).g2);
}

void write_frames(std::ostream& out, const FrameStack& stack) {
  if (stack.data.size() != stack.n_frames * stack.n_pixels)
    throw Error(ErrorCode::invalid_argument, "frame stack data size does not match its header");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kVersion);
  put<std::uint64_t>(out, stack.n_frames);
  put<std::uint64_t>(out, stack.n_pixels);
  put_f64(out, stack.pixel_pitch);
  put<std::uint64_t>(out, stack.seed);
  put_f64(out, stack.poisson_mean);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(stack.exposure_tag.size()));
  out.write(stack.exposure_tag.data(), static_cast<std::streamsize>(stack.exposure_tag.size()));
  for (double v : stack.data) put_f64(out, v);
  if (!out) throw Error(ErrorCode::io, "failed writing frame stack");
}

FrameStack read_frames(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error(ErrorCode::parse, "not a frame-stack file (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion)
    throw Error(ErrorCode::parse, "unsupported frame-stack version " + std::to_string(version));

  FrameStack stack;
  stack.n_frames = get<std::uint64_t>(in);
  stack.n_pixels = get<std::uint64_t>(in);
  stack.pixel_pitch = get_f64(in);
  stack.seed = get<std::uint64_t>(in);
  stack.poisson_mean = get_f64(in);
  const auto tag_len = get<std::uint32_t>(in);
  stack.exposure_tag.resize(tag_len);
  if (tag_len && !in.read(stack.exposure_tag.data(), tag_len))
    throw Error(ErrorCode::parse, "truncated frame-stack tag");

  if (stack.n_pixels != 0 && stack.n_frames > (std::size_t{1} << 40) / stack.n_pixels)
    throw Error(ErrorCode::parse, "frame-stack header declares an implausible size");
  stack.data.resize(stack.n_frames * stack.n_pixels);
  for (double& v : stack.data) {
    v = get_f64(in);
    if (!(v >= 0.0)) throw Error(ErrorCode::parse, "frame-stack intensities must be non-negative");
  }
  return stack;
}

void write_frames_csv(std::ostream& out, const FrameStack& stack) {
  char buf[40];
  for (std::size_t i = 0; i < stack.n_frames; ++i) {
    const auto row = stack.frame(i);
    for (std::size_t m = 0; m < row.size(); ++m) {
      std::snprintf(buf, sizeof buf, "%.17g", row[m]);
      if (m) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "failed writing frame CSV");
}

}  // namespace g2lab
