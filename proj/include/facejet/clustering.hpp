#pragma once

#include <vector>

#include "facejet/separability.hpp"

namespace facejet {

/// Average over training samples of the cosine similarity between the
/// jets at `a` and `b`; samples where either jet is zero contribute 0.
double mean_similarity(Pixel a, Pixel b, const TrainingJets& jets);

Pixel snap(const Point2& p);

/// Snapshot of one assignment pass.
struct ClusterState {
  int step = 0;
  std::vector<Point2> centers;   // centers the assignment was made against
  std::vector<Pixel> snapped;    // their pixel positions
  std::vector<int> assignments;  // group index per candidate
};

struct ClusterTrace {
  std::vector<ClusterState> states;
};

struct FeaturePoint {
  Pixel pixel;
  double separability = 0.0;
  int group_size = 0;
};

struct FeaturePointSet {
  std::vector<FeaturePoint> points;
  std::size_t num_candidates = 0;
  int iterations = 0;

  std::vector<Pixel> pixels() const;
};

/// Separability-weighted correlation clustering of the candidates into q
/// groups. Centers start at the q best candidates; each pass assigns every
/// candidate to the most similar center (lowest index on ties), then moves
/// each center to the separability-weighted centroid of its members. Stops
/// when nothing moved or after max_iterations recenterings.
FeaturePointSet cluster(const CandidateSet& pf, const SelectionConfig& config, const TrainingJets& jets,
                        const RealPlane& separability, ClusterTrace* trace = nullptr);

struct Selection {
  SeparabilityMap map;
  CandidateSet candidates;
  FeaturePointSet points;
};

/// transform -> normalize -> jets -> scatter -> separability -> candidates -> cluster.
Selection select_feature_points(const TrainingJets& jets, const SelectionConfig& config);
Selection select_feature_points(const LabeledDataset& dataset, const JetExtractor& extractor,
                                const SelectionConfig& config);

}  // namespace facejet
