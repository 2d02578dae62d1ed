#include "facejet/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "facejet/error.hpp"

namespace facejet {

double jet_similarity(const Jet& a, const Jet& b) {
  if (a.values.size() != b.values.size())
    throw IncompatibleError("jet length mismatch: " + std::to_string(a.values.size()) + " vs " +
                            std::to_string(b.values.size()));
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    ab += a.values[i] * b.values[i];
    aa += a.values[i] * a.values[i];
    bb += b.values[i] * b.values[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

double face_similarity(const std::vector<Jet>& probe_jets, const Template& templ) {
  if (probe_jets.size() != templ.jets.size())
    throw IncompatibleError("probe has " + std::to_string(probe_jets.size()) + " jets, template " +
                            templ.subject_id + " has " + std::to_string(templ.jets.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < probe_jets.size(); ++i) total += jet_similarity(probe_jets[i], templ.jets[i]);
  return total;
}

JetExtractor Gallery::extractor(ConvolutionStrategy strategy) const {
  return JetExtractor(build_bank(bank_params), epsilon_c, strategy, mode);
}

Template enroll(const std::vector<GrayImage>& images, const std::string& subject_id,
                const std::vector<Pixel>& points, const JetExtractor& extractor) {
  if (images.empty()) throw DataError("cannot enroll " + subject_id + " without images");
  Template templ;
  templ.subject_id = subject_id;
  templ.num_enrolled = static_cast<int>(images.size());
  for (const auto& image : images) {
    auto jets = extractor.jets_at(image, points);
    if (templ.jets.empty()) {
      templ.jets = std::move(jets);
      continue;
    }
    for (std::size_t p = 0; p < jets.size(); ++p)
      for (std::size_t j = 0; j < jets[p].values.size(); ++j) templ.jets[p].values[j] += jets[p].values[j];
  }
  if (images.size() > 1) {
    const double n = static_cast<double>(images.size());
    for (auto& jet : templ.jets)
      for (double& v : jet.values) v /= n;
  }
  return templ;
}

Gallery build_gallery(const LabeledDataset& dataset, const FeaturePointSet& points,
                      const JetExtractor& extractor) {
  Gallery gallery;
  gallery.bank_params = extractor.bank().params();
  gallery.epsilon_c = extractor.epsilon_c();
  gallery.mode = extractor.mode();
  gallery.points = points;
  const auto pixels = points.pixels();
  for (const auto& subject : dataset.subjects()) {
    std::vector<GrayImage> images;
    for (const auto& s : dataset.samples())
      if (s.subject_id == subject) images.push_back(s.image);
    gallery.templates.push_back(enroll(images, subject, pixels, extractor));
  }
  return gallery;
}

MatchResult identify(const GrayImage& probe, const Gallery& gallery, const JetExtractor& extractor) {
  if (gallery.templates.empty()) throw DataError("gallery is empty");
  const auto jets = extractor.jets_at(probe, gallery.points.pixels());
  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(gallery.templates.size());
  for (const auto& t : gallery.templates) scored.emplace_back(face_similarity(jets, t), &t.subject_id);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  MatchResult result;
  for (const auto& [score, id] : scored) {
    result.ranking.push_back(*id);
    result.scores.push_back(score);
  }
  return result;
}

MatchResult identify(const GrayImage& probe, const Gallery& gallery, ConvolutionStrategy strategy) {
  return identify(probe, gallery, gallery.extractor(strategy));
}

EvalReport evaluate(const Gallery& gallery, const std::vector<Sample>& probes, const JetExtractor& extractor) {
  if (probes.empty()) throw DataError("probe set is empty");
  if (gallery.templates.empty()) throw DataError("gallery is empty");
  EvalReport report;
  const std::size_t gallery_size = gallery.templates.size();
  std::vector<int> hits(gallery_size, 0);
  for (const auto& probe : probes) {
    const bool enrolled = std::any_of(gallery.templates.begin(), gallery.templates.end(),
                                      [&](const Template& t) { return t.subject_id == probe.subject_id; });
    if (!enrolled) {
      ++report.excluded;
      std::cerr << "warning: probe " << probe.subject_id << "/" << probe.source
                << " has no enrolled template; skipped\n";
      continue;
    }
    const MatchResult match = identify(probe.image, gallery, extractor);
    const auto it = std::find(match.ranking.begin(), match.ranking.end(), probe.subject_id);
    const int rank = static_cast<int>(it - match.ranking.begin()) + 1;
    ++hits[static_cast<std::size_t>(rank - 1)];
    report.probes.push_back({probe.subject_id, probe.source, rank, match.ranking.front(), match.scores.front()});
  }
  if (report.probes.empty()) throw DataError("no probe belongs to an enrolled subject");
  const double total = static_cast<double>(report.probes.size());
  int cumulative = 0;
  for (std::size_t k = 0; k < gallery_size; ++k) {
    cumulative += hits[k];
    report.cmc.push_back(cumulative / total);
  }
  report.rank1 = report.cmc.front();
  return report;
}

EvalReport evaluate(const Gallery& gallery, const LabeledDataset& probes, ConvolutionStrategy strategy) {
  return evaluate(gallery, probes.samples(), gallery.extractor(strategy));
}

}  // namespace facejet
