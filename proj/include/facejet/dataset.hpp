#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "facejet/image.hpp"

namespace facejet {

struct Sample {
  GrayImage image;
  std::string subject_id;
  std::string source;  // file name relative to the subject directory
  int class_index = 0;
};

/// Canonical-size images labeled by subject, ordered by (subject, file name).
class LabeledDataset {
 public:
  LabeledDataset() = default;
  explicit LabeledDataset(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<std::string>& subjects() const { return subjects_; }
  std::size_t size() const { return samples_.size(); }
  std::size_t num_classes() const { return subjects_.size(); }

  /// Throws DataError unless at least `count` distinct subjects are present.
  void require_classes(std::size_t count) const;

 private:
  std::vector<Sample> samples_;
  std::vector<std::string> subjects_;
};

/// Loads root/<subject_id>/*.{pgm,png}. Images that are not 128x128 need a
/// "<file>.eyes" sidecar and are aligned with align_crop.
LabeledDataset load_dataset(const std::filesystem::path& root, std::size_t min_classes = 1);

/// Loads a single probe; aligns it when a sidecar exists next to it.
/// Throws IncompatibleError for a non-canonical image without eyes.
GrayImage load_canonical(const std::filesystem::path& path);

}  // namespace facejet
