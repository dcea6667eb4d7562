#include "ensemble.hpp"

#include <string>

#include "g2lab/error.hpp"

namespace g2lab::detail {

namespace {

std::size_t pair_count(std::size_t n1, std::size_t n2, bool symmetric) {
  return symmetric ? n1 * (n1 + 1) / 2 : n1 * n2;
}

}  // namespace

unsigned resolve_workers(unsigned requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

MomentBlock::MomentBlock(std::size_t n1_, std::size_t n2_, bool symmetric_, bool second_moment,
                         bool field_products)
    : n1(n1_), n2(n2_), symmetric(symmetric_) {
  const std::size_t pairs = pair_count(n1, n2, symmetric);
  s1.assign(n1, 0.0);
  if (!symmetric) s2.assign(n2, 0.0);
  s12.assign(pairs, 0.0);
  if (second_moment) s12sq.assign(pairs, 0.0);
  if (field_products) e12.assign(pairs, {});
}

void MomentBlock::add(std::span<const double> row1, std::span<const double> row2) {
  for (std::size_t m = 0; m < n1; ++m) s1[m] += row1[m];
  if (!symmetric)
    for (std::size_t n = 0; n < n2; ++n) s2[n] += row2[n];

  const bool second = !s12sq.empty();
  std::size_t p = 0;
  for (std::size_t m = 0; m < n1; ++m) {
    const double a = row1[m];
    for (std::size_t n = symmetric ? m : 0; n < n2; ++n, ++p) {
      const double prod = a * row2[n];
      s12[p] += prod;
      if (second) s12sq[p] += prod * prod;
    }
  }
}

void MomentBlock::add_field(std::span<const std::complex<double>> field) {
  std::size_t p = 0;
  for (std::size_t m = 0; m < n1; ++m) {
    const std::complex<double> a = field[m];
    for (std::size_t n = m; n < n2; ++n, ++p) e12[p] += a * std::conj(field[n]);
  }
}

MomentTotals::MomentTotals(std::size_t n1, std::size_t n2, bool symmetric, bool second_moment,
                           bool field_products)
    : n1_(n1),
      n2_(n2),
      symmetric_(symmetric),
      second_moment_(second_moment),
      field_products_(field_products),
      s1_(n1),
      s2_(symmetric ? 0 : n2),
      s12_(pair_count(n1, n2, symmetric)),
      s12sq_(second_moment ? pair_count(n1, n2, symmetric) : 0),
      e12_(field_products ? pair_count(n1, n2, symmetric) : 0) {}

MomentBlock MomentTotals::empty_block() const {
  return MomentBlock(n1_, n2_, symmetric_, second_moment_, field_products_);
}

void MomentTotals::merge(const MomentBlock& block) {
  s1_.add(block.s1);
  if (!symmetric_) s2_.add(block.s2);
  s12_.add(block.s12);
  if (second_moment_) s12sq_.add(block.s12sq);
  if (field_products_) e12_.add(block.e12);
}

MomentTotals::Normalized MomentTotals::finalize(std::size_t n_used, const Axis& axis1, const Axis& axis2,
                                                double field_scale) const {
  if (n_used == 0) throw Error(ErrorCode::zero_intensity, "no realizations accumulated");
  const double n = static_cast<double>(n_used);

  Normalized out{{}, {}, CorrelationSurface(axis1, axis2, SourceKind::thermal, Normalization::raw,
                                            Provenance::monte_carlo),
                 std::nullopt, std::nullopt};
  out.mean1 = s1_.total();
  for (double& v : out.mean1) v /= n;
  if (symmetric_) {
    out.mean2 = out.mean1;
  } else {
    out.mean2 = s2_.total();
    for (double& v : out.mean2) v /= n;
  }
  auto check = [](const std::vector<double>& mean, const char* which) {
    for (std::size_t i = 0; i < mean.size(); ++i) {
      if (!(mean[i] > 0.0))
        throw Error(ErrorCode::zero_intensity, std::string("mean intensity on ") + which + " is zero at pixel " +
                                                   std::to_string(i) + "; g2 cannot be normalized");
    }
  };
  check(out.mean1, "detector 1");
  check(out.mean2, "detector 2");

  const std::vector<double> s12 = s12_.total();
  std::vector<double> s12sq;
  if (second_moment_) {
    s12sq = s12sq_.total();
    out.stderr_surface.emplace(axis1, axis2, SourceKind::thermal, Normalization::raw, Provenance::monte_carlo);
  }
  std::vector<std::complex<double>> e12;
  if (field_products_) {
    e12 = e12_.total();
    out.g1_abs2.emplace(axis1, axis2, SourceKind::thermal, Normalization::raw, Provenance::monte_carlo);
  }

  std::size_t p = 0;
  for (std::size_t a = 0; a < n1_; ++a) {
    for (std::size_t b = symmetric_ ? a : 0; b < n2_; ++b, ++p) {
      const double denom = out.mean1[a] * out.mean2[b];
      const double num = s12[p] / n;
      const double g2 = num / denom;
      out.g2(a, b) = g2;
      if (symmetric_) out.g2(b, a) = g2;

      if (second_moment_) {
        double se = 0.0;
        if (n_used > 1) {
          const double var = (s12sq[p] / n - num * num) * n / (n - 1.0);
          se = std::sqrt(std::max(var, 0.0) / n) / denom;
        }
        (*out.stderr_surface)(a, b) = se;
        if (symmetric_) (*out.stderr_surface)(b, a) = se;
      }
      if (field_products_) {
        const double g1 = std::norm(e12[p] / n * field_scale) / denom;
        (*out.g1_abs2)(a, b) = g1;
        if (symmetric_) (*out.g1_abs2)(b, a) = g1;
      }
    }
  }
  return out;
}

}  // namespace g2lab::detail
