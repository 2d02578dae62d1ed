#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "facejet/matcher.hpp"

namespace facejet {

inline constexpr int kGalleryFormatVersion = 1;

std::string serialize_gallery(const Gallery& gallery);
Gallery parse_gallery(std::string_view text);

void save_gallery(const Gallery& gallery, const std::filesystem::path& path);
Gallery load_gallery(const std::filesystem::path& path);

/// One "x y J" line per point, in cluster order.
std::string format_points(const FeaturePointSet& points);
FeaturePointSet parse_points(std::string_view text);
void save_points(const FeaturePointSet& points, const std::filesystem::path& path);
FeaturePointSet load_points(const std::filesystem::path& path);

/// "J-MAP w h\n" followed by w*h little-endian float32 values, row-major.
void save_jmap(const RealPlane& map, const std::filesystem::path& path);
RealPlane load_jmap(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace facejet
