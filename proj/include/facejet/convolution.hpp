#pragma once

#include <string_view>
#include <vector>

#include "facejet/gabor.hpp"
#include "facejet/image.hpp"

namespace facejet {

enum class ConvolutionStrategy { direct, fft };

ConvolutionStrategy parse_strategy(std::string_view name);
std::string_view to_string(ConvolutionStrategy strategy);

/// Gabor coefficients G_j for every kernel of a bank, in j order.
struct ResponseStack {
  int width = 0;
  int height = 0;
  std::vector<ComplexPlane> planes;
};

/// out(x) = Σ_{x' in D(x) ∩ image} I(x') psi(x - x'). Taps that would read
/// outside the image are skipped.
ComplexPlane convolve(const GrayImage& image, const GaborKernel& kernel,
                      ConvolutionStrategy strategy = ConvolutionStrategy::fft);

/// Per-pixel sum of the taps actually applied by convolve(): equals
/// kernel.phi in the interior and shrinks near the borders.
ComplexPlane effective_phi(const GaborKernel& kernel, int width, int height);

ResponseStack transform(const GrayImage& image, const FilterBank& bank,
                        ConvolutionStrategy strategy = ConvolutionStrategy::fft);

}  // namespace facejet
