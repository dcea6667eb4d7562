#include "g2lab/scanline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <limits>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

constexpr double kDegenerateTol = 1e-12;

// Interval of x with lo <= alpha x + beta <= hi, intersected with [a, b].
std::optional<ScanRange> clip_affine(double alpha, double beta, double lo, double hi, ScanRange r) {
  if (std::abs(alpha) < kDegenerateTol) {
    if (beta < lo || beta > hi) return std::nullopt;
    return r;
  }
  double x0 = (lo - beta) / alpha;
  double x1 = (hi - beta) / alpha;
  if (x0 > x1) std::swap(x0, x1);
  r.x_min = std::max(r.x_min, x0);
  r.x_max = std::min(r.x_max, x1);
  if (!(r.x_max > r.x_min)) return std::nullopt;
  return r;
}

}  // namespace

void ScanLine::validate() const {
  if (!(range.x_min < range.x_max)) throw Error(ErrorCode::invalid_argument, "scan range needs x_min < x_max");
  if (n_points < 2) throw Error(ErrorCode::invalid_argument, "scan line needs at least two points");
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw Error(ErrorCode::invalid_argument, "scan slope and offset must be finite");
}

ScanLine ScanLine::preset(char letter, SourceKind source, ScanRange range, std::size_t n_points) {
  static constexpr double thermal[] = {0.0, -1.0, -2.0, 0.5};
  static constexpr double entangled[] = {0.0, 1.0, 2.0, -0.5};
  if (letter < 'a' || letter > 'd')
    throw Error(ErrorCode::invalid_argument, std::string("unknown scan preset '") + letter + "'");
  const auto idx = static_cast<std::size_t>(letter - 'a');
  double alpha = 0.0;
  switch (source) {
    case SourceKind::thermal: alpha = thermal[idx]; break;
    case SourceKind::entangled: alpha = entangled[idx]; break;
    case SourceKind::coherent_reference:
      throw Error(ErrorCode::unsupported, "scan presets exist for thermal and entangled sources only");
  }
  ScanLine line{alpha, 0.0, range, n_points, std::string(to_string(source)) + " (" + letter + ")", false};
  return line;
}

ScanLine ScanLine::vertical_line(double x1_fixed, ScanRange range, std::size_t n_points) {
  return ScanLine{0.0, x1_fixed, range, n_points, "vertical", true};
}

std::optional<ScanRange> fit_range(const CorrelationSurface& surface, double alpha, double beta) {
  const Axis& a1 = surface.axis_x1();
  const Axis& a2 = surface.axis_x2();
  return clip_affine(alpha, beta, a2.min, a2.max, ScanRange{a1.min, a1.max});
}

CrossSection extract_cross_section(const CorrelationSurface& surface, const ScanLine& line) {
  line.validate();
  CrossSection section;
  section.source_kind = surface.source_kind();
  section.line = line;
  section.provenance = surface.provenance();
  section.normalization = surface.normalization();
  section.parameter.reserve(line.n_points);
  section.values.reserve(line.n_points);
  for (std::size_t i = 0; i < line.n_points; ++i) {
    const double x = line.parameter(i);
    if (auto v = surface.interpolate(line.x1_at(x), line.x2_at(x))) {
      section.parameter.push_back(x);
      section.values.push_back(*v);
    } else {
      ++section.excluded;
    }
  }
  if (section.parameter.empty())
    throw Error(ErrorCode::empty_result, "scan line lies entirely outside the correlation surface");
  return section;
}

void write_section_csv(std::ostream& out, const CrossSection& section) {
  char buf[128];
  const ScanLine& l = section.line;
  std::snprintf(buf, sizeof buf, "# line %.17g %.17g %.17g %.17g %zu %d\n", l.alpha, l.beta, l.range.x_min,
                l.range.x_max, l.n_points, l.vertical ? 1 : 0);
  out << buf;
  out << "# source " << to_string(section.source_kind) << '\n'
      << "# provenance " << to_string(section.provenance) << '\n'
      << "# normalization " << to_string(section.normalization) << '\n'
      << "# excluded " << section.excluded << '\n'
      << "x,value\n";
  for (std::size_t i = 0; i < section.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", section.parameter[i], section.values[i]);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::io, "failed to write cross-section");
}

CrossSection read_section_csv(std::istream& in) {
  CrossSection section;
  bool have_line = false;
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty() || text == "x,value") continue;
    if (text.front() == '#') {
      std::istringstream hdr(text.substr(1));
      std::string key, value;
      hdr >> key;
      if (key == "line") {
        ScanLine& l = section.line;
        int vertical = 0;
        if (!(hdr >> l.alpha >> l.beta >> l.range.x_min >> l.range.x_max >> l.n_points >> vertical))
          throw Error(ErrorCode::parse, "malformed line header: " + text);
        l.vertical = vertical != 0;
        have_line = true;
      } else if (key == "source" && hdr >> value) {
        section.source_kind = parse_source_kind(value);
      } else if (key == "provenance" && hdr >> value) {
        section.provenance = parse_provenance(value);
      } else if (key == "normalization" && hdr >> value) {
        section.normalization = parse_normalization(value);
      } else if (key == "excluded") {
        hdr >> section.excluded;
      }
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::parse, "expected x,value row: " + text);
    try {
      const double x = std::stod(text.substr(0, comma));
      const double v = std::stod(text.substr(comma + 1));
      section.parameter.push_back(x);
      section.values.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::parse, "non-numeric cross-section row: " + text);
    }
  }
  if (!have_line) throw Error(ErrorCode::parse, "cross-section file lacks a line header");
  if (section.values.empty()) throw Error(ErrorCode::empty_result, "cross-section file holds no samples");
  return section;
}

double classical_baseline(const OpticalConfig& config, const ApertureSpec& aperture) {
  if (aperture.kind() != ApertureSpec::Kind::double_slit)
    throw Error(ErrorCode::unsupported, "the classical fringe spacing is defined for double slits only");
  return config.wavelength() * config.distance() / aperture.slit_separation();
}

SpacingPrediction predict_fringe_spacing(const ScanLine& line, const OpticalConfig& config,
                                         const ApertureSpec& aperture, SourceKind source) {
  if (source == SourceKind::coherent_reference)
    throw Error(ErrorCode::unsupported, "fringe-spacing prediction needs a thermal or entangled source");
  const double baseline = classical_baseline(config, aperture);
  // |d(x2 -+ x1)/dx|: how fast the pattern argument moves along the line.
  double rate = 1.0;
  if (!line.vertical) rate = source == SourceKind::thermal ? std::abs(line.alpha - 1.0) : std::abs(line.alpha + 1.0);
  if (rate < kDegenerateTol) return Flat{};
  return Spacing{baseline / rate, 1.0 / rate};
}

std::optional<double> zeroth_order_parameter(const ScanLine& line, SourceKind source) {
  if (line.vertical) return source == SourceKind::thermal ? line.beta : -line.beta;
  if (source == SourceKind::thermal) {
    // alpha x + beta - x = 0
    if (std::abs(line.alpha - 1.0) < kDegenerateTol) return std::nullopt;
    return line.beta / (1.0 - line.alpha);
  }
  if (std::abs(line.alpha + 1.0) < kDegenerateTol) return std::nullopt;
  return -line.beta / (1.0 + line.alpha);
}

}  // namespace g2lab
