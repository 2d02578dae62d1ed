#include "facejet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "facejet/error.hpp"

namespace facejet {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(double ab, double na, double nb) {
  if (na == 0.0 || nb == 0.0) return 0.0;
  return ab / (na * nb);
}

// Jet norms of one pixel across all training samples.
std::vector<double> norms_at(Pixel p, const TrainingJets& jets) {
  std::vector<double> out;
  out.reserve(jets.fields.size());
  for (const auto& f : jets.fields) out.push_back(norm(f.jet(p)));
  return out;
}

double mean_similarity(Pixel a, const std::vector<double>& norms_a, Pixel b,
                       const std::vector<double>& norms_b, const TrainingJets& jets) {
  double total = 0.0;
  for (std::size_t t = 0; t < jets.fields.size(); ++t)
    total += cosine(dot(jets.fields[t].jet(a), jets.fields[t].jet(b)), norms_a[t], norms_b[t]);
  return total / static_cast<double>(jets.fields.size());
}

}  // namespace

double mean_similarity(Pixel a, Pixel b, const TrainingJets& jets) {
  if (jets.fields.empty()) throw DataError("no training jets");
  for (Pixel p : {a, b})
    if (p.x < 0 || p.y < 0 || p.x >= jets.width() || p.y >= jets.height())
      throw DataError("similarity requested outside the jet field");
  return mean_similarity(a, norms_at(a, jets), b, norms_at(b, jets), jets);
}

Pixel snap(const Point2& p) {
  return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}

std::vector<Pixel> FeaturePointSet::pixels() const {
  std::vector<Pixel> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.pixel);
  return out;
}

FeaturePointSet cluster(const CandidateSet& pf, const SelectionConfig& config, const TrainingJets& jets,
                        const RealPlane& separability, ClusterTrace* trace) {
  const int n = static_cast<int>(pf.size());
  const int q = config.q;
  if (q <= 1 || q >= n)
    throw ConfigError("selection.q = " + std::to_string(q) + " violates 1 < q < N with N = " +
                      std::to_string(n));
  if (config.max_iterations < 1) throw ConfigError("selection.max_iterations must be >= 1");
  if (jets.fields.empty()) throw DataError("no training jets");

  std::vector<std::vector<double>> candidate_norms;
  candidate_norms.reserve(static_cast<std::size_t>(n));
  for (const auto& c : pf.points) candidate_norms.push_back(norms_at(c.pixel, jets));

  std::vector<Point2> centers;
  for (int k = 0; k < q; ++k)
    centers.push_back({static_cast<double>(pf.points[k].pixel.x), static_cast<double>(pf.points[k].pixel.y)});

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::vector<Pixel> snapped;
  int step = 0;
  for (;;) {
    snapped.clear();
    std::vector<std::vector<double>> center_norms;
    for (const auto& c : centers) {
      snapped.push_back(snap(c));
      center_norms.push_back(norms_at(snapped.back(), jets));
    }

    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const Pixel xi = pf.points[static_cast<std::size_t>(i)].pixel;
      int best = 0;
      double best_s = 0.0;
      for (int k = 0; k < q; ++k) {
        const double s = mean_similarity(xi, candidate_norms[static_cast<std::size_t>(i)],
                                         snapped[static_cast<std::size_t>(k)],
                                         center_norms[static_cast<std::size_t>(k)], jets);
        if (k == 0 || s > best_s) {
          best = k;
          best_s = s;
        }
      }
      if (assignment[static_cast<std::size_t>(i)] != best) changed = true;
      assignment[static_cast<std::size_t>(i)] = best;
    }
    if (trace) trace->states.push_back({step, centers, snapped, assignment});
    if (!(step < config.max_iterations && changed)) break;

    std::vector<double> wsum(static_cast<std::size_t>(q), 0.0), wx(wsum), wy(wsum);
    std::vector<double> sx(wsum), sy(wsum);
    std::vector<int> members(static_cast<std::size_t>(q), 0);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)]);
      const auto& c = pf.points[static_cast<std::size_t>(i)];
      wsum[k] += c.separability;
      wx[k] += c.separability * c.pixel.x;
      wy[k] += c.separability * c.pixel.y;
      sx[k] += c.pixel.x;
      sy[k] += c.pixel.y;
      ++members[k];
    }
    for (std::size_t k = 0; k < static_cast<std::size_t>(q); ++k) {
      if (members[k] == 0) continue;  // empty group keeps its center
      if (wsum[k] > 0.0)
        centers[k] = {wx[k] / wsum[k], wy[k] / wsum[k]};
      else
        centers[k] = {sx[k] / members[k], sy[k] / members[k]};
    }
    ++step;
  }

  FeaturePointSet result;
  result.num_candidates = pf.size();
  result.iterations = step;
  std::vector<Pixel> chosen;
  const auto taken = [&](Pixel p) { return std::find(chosen.begin(), chosen.end(), p) != chosen.end(); };
  for (int k = 0; k < q; ++k) {
    Pixel p = snapped[static_cast<std::size_t>(k)];
    int size = 0;
    for (int a : assignment) size += (a == k);
    if (taken(p)) {
      // Members are visited in descending separability.
      bool moved = false;
      for (int i = 0; i < n && !moved; ++i)
        if (assignment[static_cast<std::size_t>(i)] == k && !taken(pf.points[static_cast<std::size_t>(i)].pixel)) {
          p = pf.points[static_cast<std::size_t>(i)].pixel;
          moved = true;
        }
      for (int i = 0; i < n && !moved; ++i)
        if (!taken(pf.points[static_cast<std::size_t>(i)].pixel)) {
          p = pf.points[static_cast<std::size_t>(i)].pixel;
          moved = true;
        }
    }
    chosen.push_back(p);
    result.points.push_back({p, separability(p.x, p.y), size});
  }
  return result;
}

Selection select_feature_points(const TrainingJets& jets, const SelectionConfig& config) {
  config.validate();
  Selection selection;
  selection.map = separability_map(scatter_traces(jets), config.sw_floor);
  selection.candidates = candidates(selection.map, config);
  const std::size_t n = selection.candidates.size();
  if (n <= static_cast<std::size_t>(config.q))
    throw DataError("too few candidates: N=" + std::to_string(n) + ", q=" + std::to_string(config.q));
  selection.points = cluster(selection.candidates, config, jets, selection.map.ratio);
  return selection;
}

Selection select_feature_points(const LabeledDataset& dataset, const JetExtractor& extractor,
                                const SelectionConfig& config) {
  config.validate();
  dataset.require_classes(2);
  return select_feature_points(extract_training_jets(dataset, extractor), config);
}

}  // namespace facejet
