#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "facejet/plane.hpp"

namespace facejet {

struct BankParams {
  int num_scales = 5;
  int num_orientations = 8;
  double sigma = 2.0 * std::numbers::pi;
  /// Carrier applied to 2^{-(v+2)/2}; 1.0 reproduces the bare grid.
  double frequency_scale = std::numbers::pi;
  /// Support half-width in units of sigma / k_v.
  double truncation_factor = 2.5;
  /// Subtract the tap mean so every kernel sums to exactly zero.
  bool dc_correct = false;

  int num_kernels() const { return num_scales * num_orientations; }
  /// Throws ConfigError when a field is out of range.
  void validate() const;

  bool operator==(const BankParams&) const = default;
};

/// One sampled, truncated Gabor kernel. Taps are stored row-major over
/// offsets (dx, dy) in [-radius, radius]^2.
struct GaborKernel {
  int j = 0;
  int scale = 0;
  int orientation = 0;
  double kx = 0.0;
  double ky = 0.0;
  int radius = 0;
  std::vector<std::complex<double>> taps;
  std::complex<double> phi;  // sum of taps

  int side() const { return 2 * radius + 1; }
  const std::complex<double>& tap(int dx, int dy) const {
    return taps[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
  }
  double abs_tap_sum() const;
};

class FilterBank {
 public:
  FilterBank(BankParams params, std::vector<GaborKernel> kernels)
      : params_(params), kernels_(std::move(kernels)) {}

  const BankParams& params() const { return params_; }
  const std::vector<GaborKernel>& kernels() const { return kernels_; }
  const GaborKernel& kernel(int j) const { return kernels_.at(static_cast<std::size_t>(j)); }
  std::size_t size() const { return kernels_.size(); }
  /// Truncation radius shared by all orientations of scale v.
  int scale_radius(int v) const { return kernel(v * params_.num_orientations).radius; }
  int max_radius() const { return scale_radius(params_.num_scales - 1); }

 private:
  BankParams params_;
  std::vector<GaborKernel> kernels_;
};

/// Wave number of scale v: frequency_scale * 2^{-(v+2)/2}.
double wave_number(const BankParams& params, int v);

/// ceil(T * sigma / k_v), robust to rounding just above an integer.
int support_radius(const BankParams& params, int v);

/// Samples the kernel
///   psi(d) = k^2/sigma^2 exp(-k^2 |d|^2 / (2 sigma^2)) [exp(i k.d) - exp(-sigma^2/2)]
/// for every (scale, orientation), indexed j = orientation + U * scale.
FilterBank build_bank(const BankParams& params = {});

}  // namespace facejet
