#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "facejet/plane.hpp"

namespace facejet {

/// Side length of the eye-aligned crop.
inline constexpr int kCanonicalSize = 128;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Eye positions in the crop: inter-eye distance of 48 px on row 52.
inline constexpr Point2 kCanonicalLeftEye{40.0, 52.0};
inline constexpr Point2 kCanonicalRightEye{88.0, 52.0};

/// Gray-level image, row-major, nominal range [0, 255].
///
/// Construction only requires finite samples. Loaders guarantee [0, 255];
/// unclipped photometric perturbations may leave that range on purpose.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const { return pixels_.width(); }
  int height() const { return pixels_.height(); }
  bool empty() const { return pixels_.size() == 0; }
  bool is_canonical() const {
    return width() == kCanonicalSize && height() == kCanonicalSize;
  }

  double& operator()(int x, int y) { return pixels_(x, y); }
  double operator()(int x, int y) const { return pixels_(x, y); }

  std::span<const double> data() const { return pixels_.data(); }
  std::span<double> data() { return pixels_.data(); }
  const RealPlane& plane() const { return pixels_; }

  /// True when every sample lies in [0, 255].
  bool in_range() const;

  bool operator==(const GrayImage&) const = default;

 private:
  RealPlane pixels_;
};

/// Subject's eyes in source-image pixel units, origin top-left.
/// `left` is the eye with the smaller x.
struct EyeCoords {
  Point2 left;
  Point2 right;
};

/// Decodes a binary 8-bit PGM (P5) or an 8-bit PNG (gray, gray+alpha,
/// RGB, RGBA). Color is converted with 0.299R + 0.587G + 0.114B.
GrayImage load_image(const std::filesystem::path& path);

/// Writes a binary 8-bit PGM; samples are rounded and clamped to [0, 255].
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

/// Reads an eyes sidecar: four decimals "lx ly rx ry".
EyeCoords load_eyes(const std::filesystem::path& path);

/// Similarity-warps `image` so the eyes land on the canonical positions of
/// a 128x128 crop. Bilinear sampling; samples outside the source are 0.
GrayImage align_crop(const GrayImage& image, const EyeCoords& eyes);

}  // namespace facejet
