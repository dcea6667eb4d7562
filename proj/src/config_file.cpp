#include "g2lab/config_file.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "g2lab/error.hpp"

namespace g2lab {

namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string owned(trim(text));
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(owned, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse, "cannot parse " + std::string(what) + ": '" + owned + "'");
  }
  if (used != owned.size())
    throw Error(ErrorCode::parse, "trailing characters in " + std::string(what) + ": '" + owned + "'");
  return value;
}

std::size_t parse_count(const std::string& text, std::string_view what) {
  const auto s = trim(text);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::parse, "cannot parse " + std::string(what) + " as a count: '" + text + "'");
  return value;
}

std::string required(const pt::ptree& tree, const char* key) {
  auto v = tree.get_optional<std::string>(key);
  if (!v) throw Error(ErrorCode::parse, std::string("missing required key '") + key + "'");
  return *v;
}

}  // namespace

Setup paper_setup() { return Setup{paper_preset::optics(), paper_preset::aperture()}; }

double parse_length(std::string_view text) {
  auto s = trim(text);
  struct Suffix {
    std::string_view name;
    double scale;
  };
  // Longest suffixes first so "mm" is not read as "m".
  static constexpr Suffix suffixes[] = {
      {"nm", 1e-9}, {"um", 1e-6}, {"\xC2\xB5m", 1e-6}, {"mm", 1e-3}, {"m", 1.0}};
  double scale = 1.0;
  for (const auto& suf : suffixes) {
    if (s.size() > suf.name.size() && s.substr(s.size() - suf.name.size()) == suf.name) {
      scale = suf.scale;
      s = trim(s.substr(0, s.size() - suf.name.size()));
      break;
    }
  }
  return parse_number(s, "length") * scale;
}

ApertureSpec read_profile_csv(std::istream& in) {
  std::vector<double> xs, ts;
  std::string line;
  while (std::getline(in, line)) {
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto comma = s.find(',');
    if (comma == std::string_view::npos)
      throw Error(ErrorCode::parse, "profile rows must be 'x,T': '" + std::string(s) + "'");
    xs.push_back(parse_number(s.substr(0, comma), "profile x"));
    ts.push_back(parse_number(s.substr(comma + 1), "profile T"));
  }
  if (xs.size() < 2) throw Error(ErrorCode::parse, "profile needs at least two rows");
  const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (std::abs((xs[i] - xs[i - 1]) - step) > 1e-6 * std::abs(step))
      throw Error(ErrorCode::invalid_argument, "custom profile must be sampled on a uniform grid");
  }
  return ApertureSpec::custom(xs.front(), step, std::move(ts));
}

Setup parse_setup(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::parse, std::string("malformed setup file: ") + e.message());
  }

  const pt::ptree aperture_sec = tree.get_child("aperture", pt::ptree{});
  const pt::ptree optics_sec = tree.get_child("optics", pt::ptree{});
  const pt::ptree grids_sec = tree.get_child("grids", pt::ptree{});

  const std::string kind = aperture_sec.get<std::string>("kind", "double_slit");
  ApertureSpec aperture = [&] {
    if (kind == "double_slit") {
      return ApertureSpec::double_slit(parse_length(required(aperture_sec, "width")),
                                       parse_length(required(aperture_sec, "separation")));
    }
    if (kind == "custom") {
      std::filesystem::path path = required(aperture_sec, "profile");
      if (path.is_relative()) path = base_dir / path;
      std::ifstream file(path);
      if (!file) throw Error(ErrorCode::io, "cannot open profile " + path.string());
      return read_profile_csv(file);
    }
    throw Error(ErrorCode::parse, "unknown aperture kind '" + kind + "'");
  }();

  SourceGrid source{paper_preset::source_half_extent, paper_preset::source_samples};
  DetectorGrid detector{paper_preset::pixel_pitch, paper_preset::ccd_row_pixels};
  if (auto v = grids_sec.get_optional<std::string>("source_half_extent")) source.half_extent = parse_length(*v);
  if (auto v = grids_sec.get_optional<std::string>("source_samples")) source.n_samples = parse_count(*v, "source_samples");
  if (auto v = grids_sec.get_optional<std::string>("pixel_pitch")) detector.pixel_pitch = parse_length(*v);
  if (auto v = grids_sec.get_optional<std::string>("detector_pixels")) detector.n_pixels = parse_count(*v, "detector_pixels");

  OpticalConfig optics(parse_length(required(optics_sec, "wavelength")),
                       parse_length(required(optics_sec, "distance")), source, detector);
  return Setup{std::move(optics), std::move(aperture)};
}

Setup load_setup(const std::string& name_or_path) {
  if (name_or_path == kPaperPresetName) return paper_setup();
  std::ifstream file(name_or_path);
  if (!file) throw Error(ErrorCode::io, "cannot open setup file " + name_or_path);
  return parse_setup(file, std::filesystem::path(name_or_path).parent_path());
}

}  // namespace g2lab
