#pragma once

// Shared generators for unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "facejet/dataset.hpp"
#include "facejet/image.hpp"

namespace facejet::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    const double u1 = uniform(1e-300, 1.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline GrayImage random_image(int w, int h, Rng& rng, double lo = 0.0, double hi = 255.0) {
  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (double& v : data) v = rng.uniform(lo, hi);
  return GrayImage(w, h, std::move(data));
}

inline GrayImage random_integer_image(int w, int h, Rng& rng) {
  std::vector<double> data(static_cast<std::size_t>(w) * h);
  for (double& v : data) v = rng.integer(0, 255);
  return GrayImage(w, h, std::move(data));
}

/// Sum of random plane waves with wave numbers in [k_lo, k_hi], scaled to
/// the requested standard deviation.
inline RealPlane band_limited_texture(int w, int h, Rng& rng, double stddev, double k_lo = 0.15,
                                      double k_hi = 0.6, int waves = 32) {
  RealPlane t(w, h);
  for (int i = 0; i < waves; ++i) {
    const double k = rng.uniform(k_lo, k_hi);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double kx = k * std::cos(angle), ky = k * std::sin(angle);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) t(x, y) += std::cos(kx * x + ky * y + phase);
  }
  // Each unit wave has variance 1/2.
  const double scale = stddev / std::sqrt(waves / 2.0);
  for (double& v : t.data()) v *= scale;
  return t;
}

inline double gaussian_blob(double x, double y, double cx, double cy, double sx, double sy) {
  const double dx = (x - cx) / sx, dy = (y - cy) / sy;
  return std::exp(-0.5 * (dx * dx + dy * dy));
}

/// Smooth face-like 128x128 base: elliptical face, dark eyes at the
/// canonical eye positions, nose ridge and mouth.
inline RealPlane face_base() {
  RealPlane base(kCanonicalSize, kCanonicalSize);
  for (int y = 0; y < kCanonicalSize; ++y)
    for (int x = 0; x < kCanonicalSize; ++x) {
      const double ex = (x - 64.0) / 46.0, ey = (y - 68.0) / 58.0;
      const double r = std::sqrt(ex * ex + ey * ey);
      const double face = 1.0 / (1.0 + std::exp((r - 1.0) * 14.0));
      double v = 70.0 + 85.0 * face;
      v -= 55.0 * gaussian_blob(x, y, kCanonicalLeftEye.x, kCanonicalLeftEye.y, 7.0, 4.0);
      v -= 55.0 * gaussian_blob(x, y, kCanonicalRightEye.x, kCanonicalRightEye.y, 7.0, 4.0);
      v -= 25.0 * gaussian_blob(x, y, 40.0, 41.0, 10.0, 2.5);
      v -= 25.0 * gaussian_blob(x, y, 88.0, 41.0, 10.0, 2.5);
      v += 20.0 * gaussian_blob(x, y, 64.0, 74.0, 4.0, 12.0);
      v -= 40.0 * gaussian_blob(x, y, 64.0, 100.0, 14.0, 3.5);
      base(x, y) = v;
    }
  return base;
}

/// Face mask in [0, 1] used to composite subject textures.
inline double face_weight(int x, int y) {
  const double ex = (x - 64.0) / 44.0, ey = (y - 68.0) / 56.0;
  const double r = std::sqrt(ex * ex + ey * ey);
  return 1.0 / (1.0 + std::exp((r - 0.9) * 16.0));
}

struct SyntheticSubject {
  std::string id;
  RealPlane texture;
};

inline std::vector<SyntheticSubject> synthetic_subjects(int count, std::uint64_t seed, double texture_std = 22.0) {
  Rng rng(seed);
  std::vector<SyntheticSubject> subjects;
  for (int s = 0; s < count; ++s) {
    char id[16];
    std::snprintf(id, sizeof id, "s%02d", s);
    subjects.push_back({id, band_limited_texture(kCanonicalSize, kCanonicalSize, rng, texture_std)});
  }
  return subjects;
}

/// One capture of a subject: base + masked texture + sensor noise, clipped.
inline GrayImage synthetic_capture(const RealPlane& base, const SyntheticSubject& subject, Rng& rng,
                                   double noise_std = 3.0) {
  std::vector<double> data(static_cast<std::size_t>(kCanonicalSize) * kCanonicalSize);
  for (int y = 0; y < kCanonicalSize; ++y)
    for (int x = 0; x < kCanonicalSize; ++x) {
      const double v = base(x, y) + face_weight(x, y) * subject.texture(x, y) + noise_std * rng.normal();
      data[static_cast<std::size_t>(y) * kCanonicalSize + x] = std::clamp(v, 0.0, 255.0);
    }
  return GrayImage(kCanonicalSize, kCanonicalSize, std::move(data));
}

/// Quantizes to 8 bits the way save_pgm does.
inline GrayImage quantized(const GrayImage& image) {
  GrayImage out = image;
  for (double& v : out.data()) v = std::clamp(static_cast<double>(std::lround(v)), 0.0, 255.0);
  return out;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("facejet_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double max_abs_diff(const GrayImage& a, const GrayImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

/// Writes root/<subject>/<i>.pgm for `per_subject` captures of each subject.
inline void write_synthetic_dataset(const std::filesystem::path& root, const std::vector<SyntheticSubject>& subjects,
                                    int per_subject, Rng& rng) {
  const RealPlane base = face_base();
  for (const auto& s : subjects) {
    std::filesystem::create_directories(root / s.id);
    for (int i = 0; i < per_subject; ++i)
      save_pgm(synthetic_capture(base, s, rng), root / s.id / (std::to_string(i) + ".pgm"));
  }
}

}  // namespace facejet::testing
