#include <gtest/gtest.h>

#include <cmath>

#include "facejet/error.hpp"
#include "facejet/illumination.hpp"
#include "test_support.hpp"

namespace facejet {
namespace {

TEST(LocalStats, ConstantImage) {
  const FilterBank bank = build_bank();
  const StatsStack stats = local_stats(GrayImage(40, 30, 77.0), bank);
  ASSERT_EQ(stats.scales.size(), 5u);
  for (int v = 0; v < 5; ++v) {
    EXPECT_EQ(stats.scales[v].half_width, bank.scale_radius(v));
    for (double m : stats.scales[v].brightness.data()) ASSERT_DOUBLE_EQ(m, 77.0);
    for (double s : stats.scales[v].contrast.data()) ASSERT_EQ(s, 0.0);
  }
}

TEST(LocalStats, SymmetricWindowOverStepAveragesBothSides) {
  GrayImage img(33, 33, 0.0);
  for (int y = 0; y < 33; ++y) {
    img(16, y) = 100.0;
    for (int x = 17; x < 33; ++x) img(x, y) = 200.0;
  }
  const StatsStack stats = local_stats(img, build_bank());
  // Column 16 is the exact centre, so even clamped windows stay symmetric.
  for (const auto& s : stats.scales) EXPECT_DOUBLE_EQ(s.brightness(16, 16), 100.0);
}

TEST(LocalStats, MatchesNaiveWindowLoops) {
  testing::Rng rng(21);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(32, 32, rng);
  const StatsStack stats = local_stats(img, bank);
  const ScaleStats& s = stats.scales[2];
  const int r = s.half_width;
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      double sum = 0.0;
      int n = 0;
      for (int yy = std::max(0, y - r); yy <= std::min(31, y + r); ++yy)
        for (int xx = std::max(0, x - r); xx <= std::min(31, x + r); ++xx) {
          sum += img(xx, yy);
          ++n;
        }
      const double mean = sum / n;
      double var = 0.0;
      for (int yy = std::max(0, y - r); yy <= std::min(31, y + r); ++yy)
        for (int xx = std::max(0, x - r); xx <= std::min(31, x + r); ++xx)
          var += (img(xx, yy) - mean) * (img(xx, yy) - mean);
      ASSERT_NEAR(s.brightness(x, y), mean, 1e-9);
      ASSERT_NEAR(s.contrast(x, y), std::sqrt(var / n), 1e-9);
    }
}

NormalizedStack run(const GrayImage& img, const FilterBank& bank, double eps = 1.0,
                    ConvolutionStrategy strategy = ConvolutionStrategy::fft) {
  return normalize(transform(img, bank, strategy), local_stats(img, bank), bank, eps);
}

TEST(Normalize, ConstantImageNormalizesToZero) {
  const FilterBank bank = build_bank();
  const double c = 180.0;
  const NormalizedStack n = run(GrayImage(48, 48, c), bank);
  for (const auto& k : bank.kernels())
    for (const auto& v : n.planes[k.j].data()) ASSERT_LE(std::abs(v), 1e-9 * c * k.abs_tap_sum());
}

TEST(Normalize, GlobalAffineChangeLeavesCoefficientsUnchanged) {
  testing::Rng rng(22);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(48, 48, rng);
  GrayImage changed = img;
  for (double& v : changed.data()) v = 20.0 + 1.5 * v;
  const StatsStack stats = local_stats(img, bank);
  const NormalizedStack a = run(img, bank);
  const NormalizedStack b = run(changed, bank);
  for (const auto& k : bank.kernels()) {
    const ScaleStats& s = stats.scales[k.scale];
    for (std::size_t i = 0; i < a.planes[k.j].size(); ++i) {
      if (s.contrast.data()[i] < 2.0) continue;
      const auto va = a.planes[k.j].data()[i], vb = b.planes[k.j].data()[i];
      ASSERT_LE(std::abs(va - vb), 1e-6 * std::max(std::abs(va), 1e-300)) << "kernel " << k.j;
    }
  }
}

TEST(Normalize, ReconstructsResponsesWhereContrastExceedsFloor) {
  testing::Rng rng(23);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(40, 40, rng);
  const ResponseStack g = transform(img, bank);
  const StatsStack stats = local_stats(img, bank);
  const NormalizedStack n = normalize(g, stats, bank, 1.0);
  for (const auto& k : bank.kernels()) {
    const ComplexPlane phi = effective_phi(k, 40, 40);
    const ScaleStats& s = stats.scales[k.scale];
    for (std::size_t i = 0; i < phi.size(); ++i) {
      if (s.contrast.data()[i] < 1.0) continue;
      const auto rebuilt = s.brightness.data()[i] * phi.data()[i] + s.contrast.data()[i] * n.planes[k.j].data()[i];
      const auto orig = g.planes[k.j].data()[i];
      ASSERT_LE(std::abs(rebuilt - orig), 1e-9 * std::abs(orig) + 1e-12);
    }
  }
}

TEST(Normalize, ContrastFloorKeepsFlatPatchesBounded) {
  // Left part flat, right part textured: flat windows hit the floor.
  testing::Rng rng(24);
  GrayImage img(64, 32, 90.0);
  for (int y = 0; y < 32; ++y)
    for (int x = 48; x < 64; ++x) img(x, y) = rng.uniform(0, 255);
  const FilterBank bank = build_bank();
  const ResponseStack g = transform(img, bank);
  const StatsStack stats = local_stats(img, bank);
  for (double eps : {1.0, 0.1, 0.01}) {
    const NormalizedStack n = normalize(g, stats, bank, eps);
    for (const auto& k : bank.kernels()) {
      const ComplexPlane phi = effective_phi(k, 64, 32);
      const ScaleStats& s = stats.scales[k.scale];
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const auto v = n.planes[k.j].data()[i];
        ASSERT_TRUE(std::isfinite(v.real()) && std::isfinite(v.imag()));
        const auto numerator = g.planes[k.j].data()[i] - s.brightness.data()[i] * phi.data()[i];
        ASSERT_LE(std::abs(v), std::abs(numerator) / eps * (1 + 1e-12) + 1e-300);
      }
    }
  }
  EXPECT_THROW(normalize(g, stats, bank, 0.0), ConfigError);
}

TEST(Normalize, PatchwiseAffineInvarianceAwayFromTheSeam) {
  testing::Rng rng(25);
  BankParams p;
  p.num_scales = 2;
  const FilterBank bank = build_bank(p);
  const GrayImage img = testing::random_image(80, 40, rng);
  GrayImage changed = img;
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 80; ++x) changed(x, y) = x < 40 ? 30.0 + 0.6 * img(x, y) : -15.0 + 1.7 * img(x, y);
  const NormalizedStack a = run(img, bank);
  const NormalizedStack b = run(changed, bank);
  int checked = 0;
  for (const auto& k : bank.kernels())
    for (int y = 0; y < 40; ++y)
      for (int x = 0; x < 80; ++x) {
        const int lo = std::max(0, x - k.radius), hi = std::min(79, x + k.radius);
        if (lo < 40 && hi >= 40) continue;  // window straddles the seam
        const auto va = a.planes[k.j](x, y), vb = b.planes[k.j](x, y);
        ASSERT_LE(std::abs(va - vb), 1e-5 * std::abs(va));
        ++checked;
      }
  EXPECT_GT(checked, 1000);
}

TEST(JetAt, ZeroStackGivesZeroJet) {
  NormalizedStack n;
  n.width = 4;
  n.height = 3;
  n.planes.assign(40, ComplexPlane(4, 3));
  const Jet jet = jet_at(n, {1, 2});
  EXPECT_EQ(jet.values, std::vector<double>(40, 0.0));
}

TEST(JetAt, MagnitudeOfThreePlusFourIIsFive) {
  NormalizedStack n;
  n.width = 2;
  n.height = 2;
  n.planes.assign(40, ComplexPlane(2, 2, {3.0, 4.0}));
  const Jet jet = jet_at(n, {1, 1});
  for (double v : jet.values) EXPECT_DOUBLE_EQ(v, 5.0);
  EXPECT_THROW(jet_at(n, {2, 0}), DataError);
  EXPECT_THROW(jet_at(n, {0, -1}), DataError);
}

TEST(JetAt, MatchesMagnitudeOfRandomStack) {
  testing::Rng rng(26);
  const FilterBank bank = build_bank();
  const NormalizedStack n = run(testing::random_image(24, 24, rng), bank);
  const JetField field = magnitude_field(n.planes);
  for (int trial = 0; trial < 20; ++trial) {
    const Pixel p{rng.integer(0, 23), rng.integer(0, 23)};
    const Jet jet = jet_at(n, p);
    for (int j = 0; j < 40; ++j) {
      const auto c = n.planes[j](p.x, p.y);
      const double mag = std::sqrt(c.real() * c.real() + c.imag() * c.imag());
      EXPECT_NEAR(jet.values[j], mag, 1e-12 * mag);
      EXPECT_EQ(field.jet(p)[j], jet.values[j]);
    }
  }
}

TEST(JetExtractor, RawModeUsesPlainResponses) {
  testing::Rng rng(27);
  const FilterBank bank = build_bank();
  const GrayImage img = testing::random_image(32, 32, rng);
  const JetExtractor raw(bank, 1.0, ConvolutionStrategy::fft, CoefficientMode::raw);
  const ResponseStack g = transform(img, bank);
  const std::vector<Pixel> pts{{3, 4}, {30, 1}};
  const auto jets = raw.jets_at(img, pts);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int j = 0; j < 40; ++j) EXPECT_EQ(jets[i].values[j], std::abs(g.planes[j](pts[i].x, pts[i].y)));
}

}  // namespace
}  // namespace facejet
