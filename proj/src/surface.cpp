#include "g2lab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::thermal: return "thermal";
    case SourceKind::entangled: return "entangled";
    case SourceKind::coherent_reference: return "coherent_reference";
  }
  return "unknown";
}

std::string_view to_string(Normalization norm) noexcept {
  switch (norm) {
    case Normalization::raw: return "raw";
    case Normalization::background_subtracted: return "background_subtracted";
    case Normalization::unit_peak: return "unit_peak";
  }
  return "unknown";
}

std::string_view to_string(Provenance prov) noexcept {
  return prov == Provenance::analytic ? "analytic" : "monte_carlo";
}

SourceKind parse_source_kind(std::string_view text) {
  if (text == "thermal") return SourceKind::thermal;
  if (text == "entangled") return SourceKind::entangled;
  if (text == "coherent_reference" || text == "coherent") return SourceKind::coherent_reference;
  throw Error(ErrorCode::parse, "unknown source kind '" + std::string(text) + "'");
}

Normalization parse_normalization(std::string_view text) {
  if (text == "raw") return Normalization::raw;
  if (text == "background_subtracted") return Normalization::background_subtracted;
  if (text == "unit_peak") return Normalization::unit_peak;
  throw Error(ErrorCode::parse, "unknown normalization '" + std::string(text) + "'");
}

Provenance parse_provenance(std::string_view text) {
  if (text == "analytic") return Provenance::analytic;
  if (text == "monte_carlo") return Provenance::monte_carlo;
  throw Error(ErrorCode::parse, "unknown provenance '" + std::string(text) + "'");
}

bool Axis::contains(double x) const noexcept {
  const double slack = 1e-9 * std::max(std::abs(step()), 1e-300);
  return x >= min - slack && x <= max + slack;
}

CorrelationSurface::CorrelationSurface(Axis axis_x1, Axis axis_x2, SourceKind source,
                                       Normalization normalization, Provenance provenance)
    : axis_x1_(axis_x1),
      axis_x2_(axis_x2),
      source_(source),
      normalization_(normalization),
      provenance_(provenance) {
  if (axis_x1_.n < 1 || axis_x2_.n < 1)
    throw Error(ErrorCode::invalid_argument, "surface axes need at least one sample");
  if ((axis_x1_.n > 1 && !(axis_x1_.max > axis_x1_.min)) ||
      (axis_x2_.n > 1 && !(axis_x2_.max > axis_x2_.min)))
    throw Error(ErrorCode::invalid_argument, "surface axes must be increasing");
  values_.assign(axis_x1_.n * axis_x2_.n, 0.0);
}

double CorrelationSurface::max_value() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

std::optional<double> CorrelationSurface::interpolate(double x1, double x2) const noexcept {
  if (!axis_x1_.contains(x1) || !axis_x2_.contains(x2)) return std::nullopt;

  auto locate = [](const Axis& axis, double x, std::size_t& i, double& frac) {
    if (axis.n == 1) {
      i = 0;
      frac = 0.0;
      return;
    }
    const double u = std::clamp((x - axis.min) / axis.step(), 0.0, static_cast<double>(axis.n - 1));
    i = std::min(static_cast<std::size_t>(u), axis.n - 2);
    frac = u - static_cast<double>(i);
  };

  std::size_t i1 = 0, i2 = 0;
  double f1 = 0.0, f2 = 0.0;
  locate(axis_x1_, x1, i1, f1);
  locate(axis_x2_, x2, i2, f2);
  const std::size_t j1 = axis_x1_.n > 1 ? i1 + 1 : i1;
  const std::size_t j2 = axis_x2_.n > 1 ? i2 + 1 : i2;

  const double v00 = (*this)(i1, i2);
  const double v01 = (*this)(i1, j2);
  const double v10 = (*this)(j1, i2);
  const double v11 = (*this)(j1, j2);
  return (1.0 - f1) * ((1.0 - f2) * v00 + f2 * v01) + f1 * ((1.0 - f2) * v10 + f2 * v11);
}

CorrelationSurface subtract_background(const CorrelationSurface& surface, double level) {
  CorrelationSurface out = surface;
  for (double& v : out.values()) v -= level;
  out.set_normalization(Normalization::background_subtracted);
  return out;
}

CorrelationSurface normalize_to_unit_peak(const CorrelationSurface& surface) {
  const double peak = surface.max_value();
  if (!(peak > 0.0) || !std::isfinite(peak))
    throw Error(ErrorCode::zero_intensity, "cannot normalize a surface whose maximum is not positive");
  CorrelationSurface out = surface;
  for (double& v : out.values()) v /= peak;
  out.set_scale(surface.scale() * peak);
  if (surface.normalization() != Normalization::background_subtracted)
    out.set_normalization(Normalization::unit_peak);
  return out;
}

void write_matrix(std::ostream& out, const CorrelationSurface& s) {
  out << "# axis_x1 " << full(s.axis_x1().min) << ' ' << full(s.axis_x1().max) << ' ' << s.axis_x1().n << '\n'
      << "# axis_x2 " << full(s.axis_x2().min) << ' ' << full(s.axis_x2().max) << ' ' << s.axis_x2().n << '\n'
      << "# source " << to_string(s.source_kind()) << '\n'
      << "# normalization " << to_string(s.normalization()) << '\n'
      << "# provenance " << to_string(s.provenance()) << '\n'
      << "# scale " << full(s.scale()) << '\n';
  std::string line;
  for (std::size_t i = 0; i < s.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < s.cols(); ++j) {
      if (j) line += ' ';
      line += full(s(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw Error(ErrorCode::io, "failed writing surface matrix");
}

CorrelationSurface read_matrix(std::istream& in) {
  std::optional<Axis> ax1, ax2;
  SourceKind source = SourceKind::thermal;
  Normalization norm = Normalization::raw;
  Provenance prov = Provenance::analytic;
  double scale = 1.0;

  std::string line;
  std::vector<double> data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream hdr(line.substr(1));
      std::string key;
      hdr >> key;
      if (key == "axis_x1" || key == "axis_x2") {
        Axis a;
        if (!(hdr >> a.min >> a.max >> a.n)) throw Error(ErrorCode::parse, "malformed axis header: " + line);
        (key == "axis_x1" ? ax1 : ax2) = a;
      } else if (key == "source" || key == "normalization" || key == "provenance") {
        std::string value;
        hdr >> value;
        if (key == "source") source = parse_source_kind(value);
        else if (key == "normalization") norm = parse_normalization(value);
        else prov = parse_provenance(value);
      } else if (key == "scale") {
        hdr >> scale;
      }
      continue;
    }
    std::istringstream row(line);
    double v = 0.0;
    while (row >> v) data.push_back(v);
    if (!row.eof()) throw Error(ErrorCode::parse, "non-numeric value in surface row");
  }
  if (!ax1 || !ax2) throw Error(ErrorCode::parse, "surface file lacks axis headers");
  CorrelationSurface surface(*ax1, *ax2, source, norm, prov);
  if (data.size() != surface.values().size())
    throw Error(ErrorCode::parse, "surface value count " + std::to_string(data.size()) +
                                      " does not match axes " + std::to_string(ax1->n) + "x" +
                                      std::to_string(ax2->n));
  std::copy(data.begin(), data.end(), surface.values().begin());
  surface.set_scale(scale);
  return surface;
}

void write_csv(std::ostream& out, const CorrelationSurface& s) {
  out << "x1,x2,value\n";
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      out << full(s.axis_x1().at(i)) << ',' << full(s.axis_x2().at(j)) << ',' << full(s(i, j)) << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::io, "failed writing surface CSV");
}

}  // namespace g2lab
