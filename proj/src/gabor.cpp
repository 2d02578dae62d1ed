#include "facejet/gabor.hpp"

#include <cmath>
#include <string>

#include "facejet/error.hpp"

namespace facejet {

namespace {
constexpr int kMaxRadius = 4096;
}

void BankParams::validate() const {
  if (num_scales < 1) throw ConfigError("bank.num_scales must be >= 1");
  if (num_orientations < 1) throw ConfigError("bank.num_orientations must be >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("bank.sigma must be > 0");
  if (!(frequency_scale > 0.0) || !std::isfinite(frequency_scale))
    throw ConfigError("bank.frequency_scale must be > 0");
  if (!(truncation_factor > 0.0) || !std::isfinite(truncation_factor))
    throw ConfigError("bank.truncation_factor must be > 0");
}

double GaborKernel::abs_tap_sum() const {
  double s = 0.0;
  for (const auto& t : taps) s += std::abs(t);
  return s;
}

double wave_number(const BankParams& params, int v) {
  return params.frequency_scale * std::pow(2.0, -(v + 2) / 2.0);
}

int support_radius(const BankParams& params, int v) {
  const double extent = params.truncation_factor * params.sigma / wave_number(params, v);
  // 2.5 * 2pi / (pi * 2^-3) evaluates to 40.000000000000007; do not round that up to 41.
  const double r = std::ceil(extent * (1.0 - 1e-12));
  if (!(r <= kMaxRadius))
    throw ConfigError("kernel support radius " + std::to_string(r) + " exceeds " +
                      std::to_string(kMaxRadius) + " for scale " + std::to_string(v));
  return std::max(1, static_cast<int>(r));
}

FilterBank build_bank(const BankParams& params) {
  params.validate();
  const double sigma2 = params.sigma * params.sigma;
  const double dc = std::exp(-sigma2 / 2.0);

  std::vector<GaborKernel> kernels;
  kernels.reserve(static_cast<std::size_t>(params.num_kernels()));
  for (int v = 0; v < params.num_scales; ++v) {
    const double k = wave_number(params, v);
    const double k2 = k * k;
    const int radius = support_radius(params, v);
    for (int mu = 0; mu < params.num_orientations; ++mu) {
      const double angle = mu * std::numbers::pi / params.num_orientations;
      GaborKernel kernel;
      kernel.j = mu + params.num_orientations * v;
      kernel.scale = v;
      kernel.orientation = mu;
      kernel.kx = k * std::cos(angle);
      kernel.ky = k * std::sin(angle);
      kernel.radius = radius;
      kernel.taps.reserve(static_cast<std::size_t>(kernel.side()) * kernel.side());
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const double envelope =
              (k2 / sigma2) * std::exp(-k2 * static_cast<double>(dx * dx + dy * dy) / (2.0 * sigma2));
          const double phase = kernel.kx * dx + kernel.ky * dy;
          kernel.taps.emplace_back(envelope * (std::cos(phase) - dc), envelope * std::sin(phase));
        }
      }
      std::complex<double> sum = 0.0;
      for (const auto& t : kernel.taps) sum += t;
      if (params.dc_correct) {
        const std::complex<double> mean = sum / static_cast<double>(kernel.taps.size());
        for (auto& t : kernel.taps) t -= mean;
        kernel.phi = 0.0;
      } else {
        kernel.phi = sum;
      }
      kernels.push_back(std::move(kernel));
    }
  }
  return FilterBank(params, std::move(kernels));
}

}  // namespace facejet
