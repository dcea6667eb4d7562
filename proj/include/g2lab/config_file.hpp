#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "g2lab/geometry.hpp"

namespace g2lab {

/// Optics plus aperture: everything a run needs besides ensemble settings.
struct Setup {
  OpticalConfig optics;
  ApertureSpec aperture;
};

/// Name reserved for the built-in experimental preset.
inline constexpr std::string_view kPaperPresetName = "paper";

Setup paper_setup();

/// Parses a length with an optional unit suffix (nm, um, µm, mm, m).
/// A bare number is meters.
double parse_length(std::string_view text);

/// Reads an INI-style setup:
///
///   [aperture]  kind = double_slit|custom, width, separation, profile (CSV path)
///   [optics]    wavelength, distance
///   [grids]     source_half_extent, source_samples, pixel_pitch, detector_pixels
///
/// [grids] keys default to the preset grids. Relative profile paths are
/// resolved against `base_dir`.
Setup parse_setup(std::istream& in, const std::filesystem::path& base_dir = {});

/// `paper` selects the preset; anything else is a path to a setup file.
Setup load_setup(const std::string& name_or_path);

/// Two-column CSV (x in meters, T) on a uniform grid; non-uniform rejected.
ApertureSpec read_profile_csv(std::istream& in);

}  // namespace g2lab
