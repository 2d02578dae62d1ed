#pragma once

#include <string>
#include <vector>

#include "facejet/clustering.hpp"
#include "facejet/dataset.hpp"
#include "facejet/illumination.hpp"

namespace facejet {

/// Cosine of two magnitude jets; 0 if either is the zero vector.
double jet_similarity(const Jet& a, const Jet& b);

struct Template {
  std::string subject_id;
  std::vector<Jet> jets;  // one per feature point
  int num_enrolled = 0;
  bool operator==(const Template&) const = default;
};

/// Sum of per-point jet similarities.
double face_similarity(const std::vector<Jet>& probe_jets, const Template& templ);

struct Gallery {
  BankParams bank_params;
  double epsilon_c = kDefaultContrastFloor;
  CoefficientMode mode = CoefficientMode::normalized;
  FeaturePointSet points;
  std::vector<Template> templates;

  /// Extractor matching the gallery's bank, floor and coefficient mode.
  JetExtractor extractor(ConvolutionStrategy strategy = ConvolutionStrategy::fft) const;
};

/// Per point, the elementwise mean of the jets of every image.
Template enroll(const std::vector<GrayImage>& images, const std::string& subject_id,
                const std::vector<Pixel>& points, const JetExtractor& extractor);

/// Enrolls every subject of `dataset` in subject order.
Gallery build_gallery(const LabeledDataset& dataset, const FeaturePointSet& points,
                      const JetExtractor& extractor);

struct MatchResult {
  std::vector<std::string> ranking;
  std::vector<double> scores;  // aligned with ranking, descending
};

MatchResult identify(const GrayImage& probe, const Gallery& gallery, const JetExtractor& extractor);
MatchResult identify(const GrayImage& probe, const Gallery& gallery,
                     ConvolutionStrategy strategy = ConvolutionStrategy::fft);

struct ProbeRecord {
  std::string subject_id;
  std::string source;
  int rank = 0;  // 1-based rank of the true subject
  std::string best_match;
  double best_score = 0.0;
};

struct EvalReport {
  double rank1 = 0.0;
  std::vector<double> cmc;  // cmc[k-1] = fraction correct within rank k
  std::vector<ProbeRecord> probes;
  int excluded = 0;  // probes whose subject is not enrolled
};

/// Closed-set identification of every probe. Probes of unenrolled subjects
/// are skipped and counted in `excluded`.
EvalReport evaluate(const Gallery& gallery, const std::vector<Sample>& probes, const JetExtractor& extractor);
EvalReport evaluate(const Gallery& gallery, const LabeledDataset& probes,
                    ConvolutionStrategy strategy = ConvolutionStrategy::fft);

}  // namespace facejet
