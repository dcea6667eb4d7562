#pragma once

// Deterministic ensemble accumulation shared by montecarlo and frames.
//
// Realizations are grouped into fixed-size blocks. Each block is summed
// sequentially in realization order, then blocks are folded into the run
// total in block order with Neumaier-compensated addition. Block boundaries
// and merge order never depend on the worker count, so results are
// bit-identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "g2lab/surface.hpp"

namespace g2lab::detail {

inline constexpr std::size_t kBlockSize = 64;

unsigned resolve_workers(unsigned requested) noexcept;

/// Runs compute(first, last) for consecutive blocks of [0, n_items) on up to
/// `workers` threads and hands the results to consume() in block order.
template <class Result, class Compute, class Consume>
void run_blocks_ordered(std::size_t n_items, unsigned workers, Compute&& compute, Consume&& consume) {
  const std::size_t n_blocks = (n_items + kBlockSize - 1) / kBlockSize;
  workers = resolve_workers(workers);
  const std::size_t batch = std::max<std::size_t>(2 * std::size_t{workers}, 1);

  for (std::size_t b0 = 0; b0 < n_blocks; b0 += batch) {
    const std::size_t b1 = std::min(n_blocks, b0 + batch);
    std::vector<std::optional<Result>> results(b1 - b0);
    auto run_one = [&](std::size_t b) {
      const std::size_t first = b * kBlockSize;
      results[b - b0].emplace(compute(first, std::min(n_items, first + kBlockSize)));
    };

    const std::size_t n_threads = std::min<std::size_t>(workers, b1 - b0);
    if (n_threads <= 1) {
      for (std::size_t b = b0; b < b1; ++b) run_one(b);
    } else {
      std::atomic<std::size_t> next{b0};
      std::vector<std::exception_ptr> errors(n_threads);
      {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
          pool.emplace_back([&, t] {
            try {
              for (std::size_t b = next++; b < b1; b = next++) run_one(b);
            } catch (...) {
              errors[t] = std::current_exception();
              next = b1;
            }
          });
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (auto& r : results) consume(std::move(*r));
  }
}

/// Neumaier running sum over a vector of values.
template <class T>
class CompensatedVector {
 public:
  explicit CompensatedVector(std::size_t n = 0) : sum_(n), comp_(n) {}

  void add(std::span<const T> values) {
    for (std::size_t i = 0; i < sum_.size(); ++i) add_one(i, values[i]);
  }

  std::vector<T> total() const {
    std::vector<T> out(sum_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sum_[i] + comp_[i];
    return out;
  }

 private:
  static void neumaier(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }

  void add_one(std::size_t i, double x) { neumaier(sum_[i], comp_[i], x); }
  void add_one(std::size_t i, std::complex<double> x) {
    double sr = sum_[i].real(), si = sum_[i].imag(), cr = comp_[i].real(), ci = comp_[i].imag();
    neumaier(sr, cr, x.real());
    neumaier(si, ci, x.imag());
    sum_[i] = {sr, si};
    comp_[i] = {cr, ci};
  }

  std::vector<T> sum_;
  std::vector<T> comp_;
};

/// Intensity-product moments for one block (plain sums).
///
/// In symmetric mode only the upper triangle n >= m of the pair products is
/// stored (row-major, packed), and row2 must equal row1.
struct MomentBlock {
  MomentBlock(std::size_t n1, std::size_t n2, bool symmetric, bool second_moment, bool field_products);

  void add(std::span<const double> row1, std::span<const double> row2);
  void add_field(std::span<const std::complex<double>> field);

  std::size_t n1, n2;
  bool symmetric;
  std::vector<double> s1, s2, s12, s12sq;
  std::vector<std::complex<double>> e12;
};

/// Compensated run totals of MomentBlock.
class MomentTotals {
 public:
  MomentTotals(std::size_t n1, std::size_t n2, bool symmetric, bool second_moment, bool field_products);

  void merge(const MomentBlock& block);
  MomentBlock empty_block() const;

  struct Normalized {
    std::vector<double> mean1, mean2;
    CorrelationSurface g2;
    std::optional<CorrelationSurface> stderr_surface;
    std::optional<CorrelationSurface> g1_abs2;
  };

  /// g2 = <I1 I2> / (<I1><I2>) on the given axes. Throws zero_intensity if
  /// any mean intensity is not positive. `field_scale` converts <E1 E2*>
  /// into intensity units for g1 (the pixel pitch).
  Normalized finalize(std::size_t n_used, const Axis& axis1, const Axis& axis2, double field_scale) const;

 private:
  std::size_t n1_, n2_;
  bool symmetric_, second_moment_, field_products_;
  CompensatedVector<double> s1_, s2_, s12_, s12sq_;
  CompensatedVector<std::complex<double>> e12_;
};

}  // namespace g2lab::detail
