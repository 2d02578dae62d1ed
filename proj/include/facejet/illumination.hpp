#pragma once

#include <span>
#include <vector>

#include "facejet/convolution.hpp"
#include "facejet/gabor.hpp"
#include "facejet/image.hpp"

namespace facejet {

inline constexpr double kDefaultContrastFloor = 1.0;

/// Local brightness (mean) and contrast (population std) over the
/// truncation window of one scale.
struct ScaleStats {
  int half_width = 0;
  RealPlane brightness;
  RealPlane contrast;
};

/// One ScaleStats per scale v; all orientations of a scale share it.
struct StatsStack {
  std::vector<ScaleStats> scales;
};

StatsStack local_stats(const GrayImage& image, const FilterBank& bank);

/// Illumination-normalized coefficients
///   G0 = (G - brightness * phi_eff) / max(contrast, epsilon_c).
struct NormalizedStack {
  int width = 0;
  int height = 0;
  double epsilon_c = kDefaultContrastFloor;
  BankParams params;
  std::vector<ComplexPlane> planes;
};

NormalizedStack normalize(const ResponseStack& responses, const StatsStack& stats,
                          const FilterBank& bank, double epsilon_c = kDefaultContrastFloor);

/// Coefficient magnitudes at one pixel, j order.
struct Jet {
  std::vector<double> values;
  bool operator==(const Jet&) const = default;
};

Jet jet_at(const NormalizedStack& normalized, Pixel x);

/// Which coefficients feed the jets: G0 (normalized) or plain G (raw).
enum class CoefficientMode { normalized, raw };

/// Jets of every pixel of one image, pixel-major: values[(y*w + x)*K + j].
class JetField {
 public:
  JetField() = default;
  JetField(int width, int height, int num_coefficients);

  int width() const { return width_; }
  int height() const { return height_; }
  int num_coefficients() const { return k_; }

  std::span<const double> jet(Pixel p) const {
    return {values_.data() + offset(p), static_cast<std::size_t>(k_)};
  }
  std::span<double> jet(Pixel p) { return {values_.data() + offset(p), static_cast<std::size_t>(k_)}; }

 private:
  std::size_t offset(Pixel p) const {
    return (static_cast<std::size_t>(p.y) * width_ + p.x) * static_cast<std::size_t>(k_);
  }
  int width_ = 0;
  int height_ = 0;
  int k_ = 0;
  std::vector<double> values_;
};

/// Magnitudes of every plane, gathered per pixel.
JetField magnitude_field(const std::vector<ComplexPlane>& planes);

/// Runs transform -> (local_stats, normalize) and gathers magnitude jets.
class JetExtractor {
 public:
  JetExtractor(FilterBank bank, double epsilon_c = kDefaultContrastFloor,
               ConvolutionStrategy strategy = ConvolutionStrategy::fft,
               CoefficientMode mode = CoefficientMode::normalized);

  const FilterBank& bank() const { return bank_; }
  double epsilon_c() const { return epsilon_c_; }
  CoefficientMode mode() const { return mode_; }

  /// Complex coefficient planes selected by mode().
  std::vector<ComplexPlane> coefficients(const GrayImage& image) const;
  JetField field(const GrayImage& image) const;
  std::vector<Jet> jets_at(const GrayImage& image, std::span<const Pixel> points) const;

 private:
  FilterBank bank_;
  double epsilon_c_;
  ConvolutionStrategy strategy_;
  CoefficientMode mode_;
};

}  // namespace facejet
