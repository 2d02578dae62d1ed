#include "facejet/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "facejet/error.hpp"
#include "facejet/sat.hpp"

namespace facejet {

StatsStack local_stats(const GrayImage& image, const FilterBank& bank) {
  const SummedAreaTables tables(image);
  StatsStack stack;
  stack.scales.reserve(static_cast<std::size_t>(bank.params().num_scales));
  for (int v = 0; v < bank.params().num_scales; ++v) {
    ScaleStats s;
    s.half_width = bank.scale_radius(v);
    s.brightness = RealPlane(image.width(), image.height());
    s.contrast = RealPlane(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y)
      for (int x = 0; x < image.width(); ++x) {
        const WindowStats w = window_stats(tables, {x, y}, s.half_width);
        s.brightness(x, y) = w.mean;
        s.contrast(x, y) = w.stddev;
      }
    stack.scales.push_back(std::move(s));
  }
  return stack;
}

NormalizedStack normalize(const ResponseStack& responses, const StatsStack& stats,
                          const FilterBank& bank, double epsilon_c) {
  if (!(epsilon_c > 0.0)) throw ConfigError("epsilon_c must be > 0");
  if (responses.planes.size() != bank.size() ||
      stats.scales.size() != static_cast<std::size_t>(bank.params().num_scales))
    throw IncompatibleError("responses/stats do not match the filter bank");

  NormalizedStack out;
  out.width = responses.width;
  out.height = responses.height;
  out.epsilon_c = epsilon_c;
  out.params = bank.params();
  out.planes.reserve(bank.size());
  for (const auto& kernel : bank.kernels()) {
    const ComplexPlane& g = responses.planes[static_cast<std::size_t>(kernel.j)];
    const ScaleStats& s = stats.scales[static_cast<std::size_t>(kernel.scale)];
    const ComplexPlane phi = effective_phi(kernel, out.width, out.height);
    ComplexPlane g0(out.width, out.height);
    for (std::size_t i = 0; i < g0.size(); ++i) {
      const double contrast = std::max(s.contrast.data()[i], epsilon_c);
      g0.data()[i] = (g.data()[i] - s.brightness.data()[i] * phi.data()[i]) / contrast;
    }
    out.planes.push_back(std::move(g0));
  }
  return out;
}

Jet jet_at(const NormalizedStack& normalized, Pixel x) {
  if (x.x < 0 || x.y < 0 || x.x >= normalized.width || x.y >= normalized.height)
    throw DataError("jet position (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                    ") outside image");
  Jet jet;
  jet.values.reserve(normalized.planes.size());
  for (const auto& plane : normalized.planes) jet.values.push_back(std::abs(plane(x.x, x.y)));
  return jet;
}

JetField::JetField(int width, int height, int num_coefficients)
    : width_(width),
      height_(height),
      k_(num_coefficients),
      values_(static_cast<std::size_t>(width) * height * num_coefficients, 0.0) {}

JetField magnitude_field(const std::vector<ComplexPlane>& planes) {
  if (planes.empty()) return {};
  const int w = planes.front().width();
  const int h = planes.front().height();
  const int k = static_cast<int>(planes.size());
  JetField field(w, h, k);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto jet = field.jet({x, y});
      for (int j = 0; j < k; ++j) jet[static_cast<std::size_t>(j)] = std::abs(planes[j](x, y));
    }
  return field;
}

JetExtractor::JetExtractor(FilterBank bank, double epsilon_c, ConvolutionStrategy strategy,
                           CoefficientMode mode)
    : bank_(std::move(bank)), epsilon_c_(epsilon_c), strategy_(strategy), mode_(mode) {
  if (!(epsilon_c_ > 0.0)) throw ConfigError("epsilon_c must be > 0");
}

std::vector<ComplexPlane> JetExtractor::coefficients(const GrayImage& image) const {
  ResponseStack responses = transform(image, bank_, strategy_);
  if (mode_ == CoefficientMode::raw) return std::move(responses.planes);
  return normalize(responses, local_stats(image, bank_), bank_, epsilon_c_).planes;
}

JetField JetExtractor::field(const GrayImage& image) const {
  return magnitude_field(coefficients(image));
}

std::vector<Jet> JetExtractor::jets_at(const GrayImage& image, std::span<const Pixel> points) const {
  const auto planes = coefficients(image);
  std::vector<Jet> jets;
  jets.reserve(points.size());
  for (const Pixel& p : points) {
    if (!planes.front().contains(p.x, p.y)) throw DataError("feature point outside image");
    Jet jet;
    jet.values.reserve(planes.size());
    for (const auto& plane : planes) jet.values.push_back(std::abs(plane(p.x, p.y)));
    jets.push_back(std::move(jet));
  }
  return jets;
}

}  // namespace facejet
