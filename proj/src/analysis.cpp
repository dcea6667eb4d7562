#include "g2lab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

namespace g2lab {

namespace {

struct Extremum {
  double position;
  double prominence;
};

// Vertex of the parabola through three points.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double a = (x1 - x0) * (y1 - y2);
  const double b = (x1 - x2) * (y1 - y0);
  const double denom = a - b;
  if (denom == 0.0) return x1;
  const double v = x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / denom;
  return std::clamp(v, x0, x2);
}

// Local maxima of y (strict on both sides, plateaus allowed) with their
// topographic prominence.
std::vector<Extremum> find_maxima(std::span<const double> x, std::span<const double> y, double min_prominence) {
  std::vector<Extremum> out;
  const std::size_t n = y.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(y[i] > y[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n) break;
    if (y[j + 1] < y[i]) {
      const double h = y[i];
      double left_min = h;
      for (std::size_t k = i; k-- > 0;) {
        if (y[k] > h) break;
        left_min = std::min(left_min, y[k]);
      }
      double right_min = h;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (y[k] > h) break;
        right_min = std::min(right_min, y[k]);
      }
      const double prominence = h - std::max(left_min, right_min);
      if (prominence >= min_prominence) {
        double pos;
        if (i == j) pos = parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
        else pos = 0.5 * (x[i] + x[j]);
        out.push_back({pos, prominence});
      }
    }
    i = j + 1;
  }
  return out;
}

void spacing_stats(const std::vector<double>& pos, double& mean, double& std_dev) {
  mean = 0.0;
  std_dev = 0.0;
  if (pos.size() < 2) return;
  std::vector<double> diffs(pos.size() - 1);
  for (std::size_t i = 0; i + 1 < pos.size(); ++i) diffs[i] = pos[i + 1] - pos[i];
  mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(diffs.size());
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  std_dev = std::sqrt(ss / static_cast<double>(diffs.size()));
}

double visibility_of(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double sum = *hi + *lo;
  if (!(sum > 0.0)) return 0.0;
  return std::clamp((*hi - *lo) / sum, 0.0, 1.0);
}

}  // namespace

FringeReport detect_peaks(const CrossSection& section, const PeakOptions& options) {
  if (section.parameter.size() != section.values.size())
    throw Error(ErrorCode::invalid_argument, "cross-section arrays differ in length");
  if (section.values.size() < 16)
    throw Error(ErrorCode::invalid_argument, "peak detection needs at least 16 samples");
  if (!(options.min_prominence > 0.0 && options.min_prominence < 1.0))
    throw Error(ErrorCode::invalid_argument, "min_prominence must lie in (0, 1)");

  std::vector<double> x, raw;
  for (std::size_t i = 0; i < section.values.size(); ++i) {
    const double p = section.parameter[i];
    if (options.window_width && options.window_center &&
        std::abs(p - *options.window_center) > 0.5 * *options.window_width)
      continue;
    x.push_back(p);
    raw.push_back(section.values[i]);
  }
  if (x.size() < 3) throw Error(ErrorCode::invalid_argument, "analysis window holds fewer than three samples");

  FringeReport report;
  report.background_level = options.background.value_or(
      section.provenance == Provenance::monte_carlo && section.source_kind == SourceKind::thermal &&
              section.normalization == Normalization::raw
          ? 1.0
          : 0.0);
  report.visibility = visibility_of(raw);

  std::vector<double> y(raw.size()), neg(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    y[i] = raw[i] - report.background_level;
    neg[i] = -y[i];
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double threshold = options.min_prominence * (*hi - *lo);
  // A range at roundoff level is a flat section, not fringes.
  const auto [rlo, rhi] = std::minmax_element(raw.begin(), raw.end());
  const bool flat = (*rhi - *rlo) <= kFlatRelativeRange * std::max(std::abs(*rhi), std::abs(*rlo));

  if (!flat && *hi > *lo) {
    for (const auto& e : find_maxima(x, y, threshold)) report.peak_positions.push_back(e.position);
    for (const auto& e : find_maxima(x, neg, threshold)) report.trough_positions.push_back(e.position);
  }
  report.n_peaks = report.peak_positions.size();

  double unused = 0.0;
  spacing_stats(report.peak_positions, report.peak_spacing, unused);
  if (report.trough_positions.size() >= 2) spacing_stats(report.trough_positions, report.mean_spacing, report.spacing_std);
  else spacing_stats(report.peak_positions, report.mean_spacing, report.spacing_std);
  if (options.classical_baseline && report.n_peaks >= 2)
    report.resolution_factor = report.mean_spacing / *options.classical_baseline;

  if (report.n_peaks < 2)
    throw NoSpacingError("found " + std::to_string(report.n_peaks) + " peak(s); at least two are needed for a spacing",
                         std::move(report));
  return report;
}

PeakOptions central_window_options(const ScanLine& line, const SpacingPrediction& prediction, SourceKind source,
                                   double classical_baseline_length) {
  PeakOptions opts;
  opts.classical_baseline = classical_baseline_length;
  if (const auto* s = std::get_if<Spacing>(&prediction)) {
    if (auto center = zeroth_order_parameter(line, source)) {
      opts.window_center = *center;
      opts.window_width = kCentralWindowPeriods * s->length;
    }
  }
  return opts;
}

double measure_visibility(const CrossSection& section, double window) {
  if (section.parameter.empty()) throw Error(ErrorCode::invalid_argument, "empty cross-section");
  const double lo = section.parameter.front();
  const double hi = section.parameter.back();
  if (!(window > 0.0) || window > (hi - lo) * (1.0 + 1e-12))
    throw Error(ErrorCode::invalid_argument, "visibility window lies outside the section range");
  const double center = 0.5 * (lo + hi);
  std::vector<double> v;
  for (std::size_t i = 0; i < section.values.size(); ++i) {
    if (std::abs(section.parameter[i] - center) <= 0.5 * window) v.push_back(section.values[i]);
  }
  if (v.empty()) throw Error(ErrorCode::invalid_argument, "visibility window holds no samples");
  return visibility_of(v);
}

}  // namespace g2lab
