#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "facejet/convolution.hpp"
#include "facejet/gabor.hpp"
#include "facejet/illumination.hpp"
#include "facejet/perturb.hpp"
#include "facejet/separability.hpp"

namespace facejet {

struct RunPaths {
  std::filesystem::path dataset;      // enrollment / training images
  std::filesystem::path probes;       // evaluation images
  std::filesystem::path points;       // "x y J" feature point list
  std::filesystem::path gallery;
  std::filesystem::path report;
  std::filesystem::path jmap;         // optional separability raster
  std::filesystem::path perturb_out;  // output root of the perturb command

  bool operator==(const RunPaths&) const = default;
};

struct RunConfig {
  BankParams bank;
  double epsilon_c = kDefaultContrastFloor;
  SelectionConfig selection;
  std::vector<PerturbSpec> perturbations;
  RunPaths paths;
  std::uint64_t seed = 0;
  ConvolutionStrategy strategy = ConvolutionStrategy::fft;
  /// evaluate: one selection/enrollment/evaluation row per q.
  std::vector<int> sweep_q;
  /// evaluate: also run the pipeline on raw coefficients and compare.
  bool compare_raw = false;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses the JSON config. Relative paths are resolved against `base_dir`.
/// Unknown keys and out-of-range values raise ConfigError naming the field.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& config);

}  // namespace facejet
