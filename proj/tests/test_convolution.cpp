#include <gtest/gtest.h>

#include <cmath>

#include "facejet/convolution.hpp"
#include "facejet/error.hpp"
#include "test_support.hpp"

namespace facejet {
namespace {

double frobenius(const ComplexPlane& p) {
  double s = 0.0;
  for (const auto& v : p.data()) s += std::norm(v);
  return std::sqrt(s);
}

double relative_error(const ComplexPlane& a, const ComplexPlane& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(d) / frobenius(b);
}

TEST(Convolve, DeltaImageReproducesTheKernel) {
  const FilterBank bank = build_bank();
  const GaborKernel& k = bank.kernel(3);
  GrayImage img(41, 37, 0.0);
  const Pixel c{20, 18};
  img(c.x, c.y) = 1.0;
  for (auto strategy : {ConvolutionStrategy::direct, ConvolutionStrategy::fft}) {
    const ComplexPlane out = convolve(img, k, strategy);
    for (int y = 0; y < 37; ++y)
      for (int x = 0; x < 41; ++x) {
        const int dx = x - c.x, dy = y - c.y;
        const std::complex<double> expect =
            (std::abs(dx) <= k.radius && std::abs(dy) <= k.radius) ? k.tap(dx, dy) : 0.0;
        ASSERT_LT(std::abs(out(x, y) - expect), 1e-12) << to_string(strategy) << " at " << x << "," << y;
      }
  }
}

TEST(Convolve, ConstantImageWithDcCorrectionVanishesInInterior) {
  BankParams p;
  p.dc_correct = true;
  const FilterBank bank = build_bank(p);
  const double c = 137.0;
  const GrayImage img(64, 64, c);
  for (int j : {0, 9, 17}) {
    const GaborKernel& k = bank.kernel(j);
    for (auto strategy : {ConvolutionStrategy::direct, ConvolutionStrategy::fft}) {
      const ComplexPlane out = convolve(img, k, strategy);
      for (int y = k.radius; y < 64 - k.radius; ++y)
        for (int x = k.radius; x < 64 - k.radius; ++x)
          ASSERT_LE(std::abs(out(x, y)), 1e-9 * c * k.abs_tap_sum());
    }
  }
}

TEST(Convolve, FftMatchesDirect) {
  testing::Rng rng(13);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(64, 64, rng);
  const ComplexPlane direct = convolve(img, bank.kernel(13), ConvolutionStrategy::direct);
  const ComplexPlane fft = convolve(img, bank.kernel(13), ConvolutionStrategy::fft);
  EXPECT_LE(relative_error(fft, direct), 1e-5);
}

TEST(Convolve, FftMatchesDirectOnOddNonSquareImages) {
  testing::Rng rng(14);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(37, 23, rng);
  for (int j : {0, 15, 39}) {
    const ComplexPlane direct = convolve(img, bank.kernel(j), ConvolutionStrategy::direct);
    const ComplexPlane fft = convolve(img, bank.kernel(j), ConvolutionStrategy::fft);
    EXPECT_LE(relative_error(fft, direct), 1e-9) << "kernel " << j;
  }
}

TEST(Transform, ProducesOnePlanePerKernel) {
  testing::Rng rng(15);
  const FilterBank bank = build_bank();
  const ResponseStack stack = transform(testing::random_image(128, 128, rng), bank);
  ASSERT_EQ(stack.planes.size(), 40u);
  for (const auto& p : stack.planes) {
    EXPECT_EQ(p.width(), 128);
    EXPECT_EQ(p.height(), 128);
    for (const auto& v : p.data()) ASSERT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
  }
}

TEST(Transform, ZeroImageGivesZeroPlanes) {
  const FilterBank bank = build_bank();
  const ResponseStack stack = transform(GrayImage(32, 32, 0.0), bank);
  for (const auto& p : stack.planes)
    for (const auto& v : p.data()) ASSERT_EQ(v, std::complex<double>(0.0, 0.0));
}

TEST(Transform, BrightnessAndGainSeparateThroughEffectivePhi) {
  testing::Rng rng(16);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(32, 32, rng);
  const double a = 10.0, b = 2.0;
  GrayImage shifted = img;
  for (double& v : shifted.data()) v = a + b * v;
  for (auto strategy : {ConvolutionStrategy::direct, ConvolutionStrategy::fft}) {
    const ResponseStack base = transform(img, bank, strategy);
    const ResponseStack moved = transform(shifted, bank, strategy);
    for (const auto& k : bank.kernels()) {
      const ComplexPlane phi = effective_phi(k, 32, 32);
      ComplexPlane expect(32, 32);
      for (std::size_t i = 0; i < expect.size(); ++i)
        expect.data()[i] = a * phi.data()[i] + b * base.planes[k.j].data()[i];
      EXPECT_LE(relative_error(moved.planes[k.j], expect), 1e-6) << "kernel " << k.j;
    }
  }
}

TEST(EffectivePhi, EqualsResponseToAllOnesImage) {
  const FilterBank bank = build_bank();
  const GrayImage ones(50, 30, 1.0);
  for (int j : {0, 11, 38}) {
    const ComplexPlane phi = effective_phi(bank.kernel(j), 50, 30);
    const ComplexPlane direct = convolve(ones, bank.kernel(j), ConvolutionStrategy::direct);
    for (std::size_t i = 0; i < phi.size(); ++i) ASSERT_LT(std::abs(phi.data()[i] - direct.data()[i]), 1e-12);
  }
}

TEST(Strategy, ParsesNames) {
  EXPECT_EQ(parse_strategy("direct"), ConvolutionStrategy::direct);
  EXPECT_EQ(parse_strategy("fft"), ConvolutionStrategy::fft);
  EXPECT_THROW(parse_strategy("gpu"), ConfigError);
}

}  // namespace
}  // namespace facejet
