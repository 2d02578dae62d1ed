#pragma once

#include <cstdint>
#include <vector>

#include "facejet/dataset.hpp"
#include "facejet/illumination.hpp"

namespace facejet {

/// Jet fields of a labeled training set, one per sample.
struct TrainingJets {
  std::vector<JetField> fields;
  std::vector<int> labels;  // class index per field
  int num_classes = 0;

  int width() const { return fields.empty() ? 0 : fields.front().width(); }
  int height() const { return fields.empty() ? 0 : fields.front().height(); }
};

TrainingJets extract_training_jets(const LabeledDataset& dataset, const JetExtractor& extractor);

/// Per-pixel class separability. `traces_only` maps carry tr_sb/tr_sw but
/// no ratio yet.
struct SeparabilityMap {
  RealPlane tr_sb;
  RealPlane tr_sw;
  RealPlane ratio;
  /// 1 where tr_sw fell below the floor while tr_sb did not.
  Plane<std::uint8_t> degenerate;
  double sw_floor = 0.0;
  std::size_t num_samples = 0;
  std::size_t num_classes = 0;

  int width() const { return ratio.width(); }
  int height() const { return ratio.height(); }
};

/// Traces of the within-class and between-class scatter matrices of the
/// jets at every pixel. Class statistics are accumulated sample by sample
/// (Welford), so fields can be streamed.
SeparabilityMap scatter_traces(const TrainingJets& jets);

/// ratio = tr_sb / tr_sw with floor = sw_floor_factor * mean(tr_sw).
/// Pixels with tr_sw under the floor but tr_sb above it are marked
/// degenerate and get the largest regular ratio; with both under, 0.
SeparabilityMap separability_map(SeparabilityMap traces, double sw_floor_factor = 1e-12);

enum class ThresholdMode { absolute, quantile };

struct SelectionConfig {
  ThresholdMode threshold_mode = ThresholdMode::quantile;
  /// Absolute threshold; candidates satisfy ratio > epsilon0.
  double epsilon0 = 0.0;
  /// Quantile mode: fraction of pixels meant to survive the threshold.
  double keep_fraction = 0.05;
  int q = 50;
  int max_iterations = 20;
  double sw_floor = 1e-12;

  void validate() const;
  bool operator==(const SelectionConfig&) const = default;
};

struct Candidate {
  Pixel pixel;
  double separability = 0.0;
};

/// Sorted by descending separability, ties in row-major order.
struct CandidateSet {
  double threshold = 0.0;
  std::vector<Candidate> points;
  std::size_t size() const { return points.size(); }
};

/// Threshold the separability in quantile mode so that about
/// keep_fraction of the pixels lie strictly above it.
double quantile_threshold(const RealPlane& ratio, double keep_fraction);

CandidateSet candidates(const SeparabilityMap& map, const SelectionConfig& config);

}  // namespace facejet
