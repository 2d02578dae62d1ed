#include "facejet/separability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "facejet/error.hpp"

namespace facejet {

TrainingJets extract_training_jets(const LabeledDataset& dataset, const JetExtractor& extractor) {
  TrainingJets jets;
  jets.num_classes = static_cast<int>(dataset.num_classes());
  jets.fields.reserve(dataset.size());
  for (const auto& sample : dataset.samples()) {
    jets.fields.push_back(extractor.field(sample.image));
    jets.labels.push_back(sample.class_index);
  }
  return jets;
}

SeparabilityMap scatter_traces(const TrainingJets& jets) {
  if (jets.fields.size() < 2) throw DataError("scatter needs at least 2 samples");
  if (jets.labels.size() != jets.fields.size()) throw DataError("one label per jet field required");
  const int w = jets.width();
  const int h = jets.height();
  const int k = jets.fields.front().num_coefficients();
  for (const auto& f : jets.fields)
    if (f.width() != w || f.height() != h || f.num_coefficients() != k)
      throw IncompatibleError("jet fields differ in size");

  std::vector<int> counts(static_cast<std::size_t>(jets.num_classes), 0);
  for (int label : jets.labels) {
    if (label < 0 || label >= jets.num_classes) throw DataError("class label out of range");
    ++counts[static_cast<std::size_t>(label)];
  }
  const auto populated = std::count_if(counts.begin(), counts.end(), [](int n) { return n > 0; });
  if (populated < 2) throw DataError("scatter needs at least 2 classes, found " + std::to_string(populated));

  SeparabilityMap map;
  map.tr_sb = RealPlane(w, h);
  map.tr_sw = RealPlane(w, h);
  map.num_samples = jets.fields.size();
  map.num_classes = static_cast<std::size_t>(populated);

  const std::size_t c_count = counts.size();
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<double> mean(c_count * kk);
  std::vector<double> m2(c_count * kk);
  std::vector<int> seen(c_count);
  std::vector<double> global(kk);
  const double total = static_cast<double>(jets.fields.size());

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::fill(mean.begin(), mean.end(), 0.0);
      std::fill(m2.begin(), m2.end(), 0.0);
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t s = 0; s < jets.fields.size(); ++s) {
        const auto c = static_cast<std::size_t>(jets.labels[s]);
        const auto g = jets.fields[s].jet({x, y});
        const double n = ++seen[c];
        double* mc = mean.data() + c * kk;
        double* m2c = m2.data() + c * kk;
        for (std::size_t j = 0; j < kk; ++j) {
          const double delta = g[j] - mc[j];
          mc[j] += delta / n;
          m2c[j] += delta * (g[j] - mc[j]);
        }
      }
      std::fill(global.begin(), global.end(), 0.0);
      double sw = 0.0;
      for (std::size_t c = 0; c < c_count; ++c) {
        for (std::size_t j = 0; j < kk; ++j) {
          global[j] += seen[c] * mean[c * kk + j];
          sw += m2[c * kk + j];
        }
      }
      for (double& g : global) g /= total;
      double sb = 0.0;
      for (std::size_t c = 0; c < c_count; ++c) {
        if (seen[c] == 0) continue;
        double d2 = 0.0;
        for (std::size_t j = 0; j < kk; ++j) {
          const double d = mean[c * kk + j] - global[j];
          d2 += d * d;
        }
        sb += seen[c] * d2;
      }
      map.tr_sb(x, y) = sb;
      map.tr_sw(x, y) = sw;
    }
  }
  return map;
}

SeparabilityMap separability_map(SeparabilityMap traces, double sw_floor_factor) {
  if (!(sw_floor_factor >= 0.0)) throw ConfigError("selection.sw_floor must be >= 0");
  const auto& sw = traces.tr_sw.data();
  const auto& sb = traces.tr_sb.data();
  const double mean_sw =
      sw.empty() ? 0.0 : std::accumulate(sw.begin(), sw.end(), 0.0) / static_cast<double>(sw.size());
  const double floor = sw_floor_factor * mean_sw;
  traces.sw_floor = floor;
  traces.ratio = RealPlane(traces.tr_sb.width(), traces.tr_sb.height(), 0.0);
  traces.degenerate = Plane<std::uint8_t>(traces.tr_sb.width(), traces.tr_sb.height(), 0);

  double max_regular = 0.0;
  bool any_regular = false;
  for (std::size_t i = 0; i < sw.size(); ++i) {
    if (sw[i] > 0.0 && sw[i] >= floor) {
      const double r = sb[i] / sw[i];
      traces.ratio.data()[i] = r;
      max_regular = any_regular ? std::max(max_regular, r) : r;
      any_regular = true;
    } else if (sb[i] > 0.0 && sb[i] >= floor) {
      traces.degenerate.data()[i] = 1;
    }
  }
  // Zero within-class spread with non-zero between-class spread is as
  // separable as it gets.
  const double degenerate_value = any_regular ? max_regular : 1.0;
  for (std::size_t i = 0; i < sw.size(); ++i)
    if (traces.degenerate.data()[i]) traces.ratio.data()[i] = degenerate_value;
  return traces;
}

void SelectionConfig::validate() const {
  if (!std::isfinite(epsilon0)) throw ConfigError("selection.epsilon0 must be finite");
  if (threshold_mode == ThresholdMode::quantile && !(keep_fraction > 0.0 && keep_fraction <= 1.0))
    throw ConfigError("selection.keep_fraction must lie in (0, 1]");
  if (q <= 1) throw ConfigError("selection.q = " + std::to_string(q) + " violates 1 < q < N");
  if (max_iterations < 1) throw ConfigError("selection.max_iterations must be >= 1");
  if (!(sw_floor >= 0.0)) throw ConfigError("selection.sw_floor must be >= 0");
}

double quantile_threshold(const RealPlane& ratio, double keep_fraction) {
  std::vector<double> values = ratio.data();
  if (values.empty()) return 0.0;
  const auto target = static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(values.size())));
  if (target >= values.size()) return -1.0;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(target), values.end(),
                   std::greater<>());
  return values[target];
}

CandidateSet candidates(const SeparabilityMap& map, const SelectionConfig& config) {
  CandidateSet set;
  set.threshold = config.threshold_mode == ThresholdMode::quantile
                      ? quantile_threshold(map.ratio, config.keep_fraction)
                      : config.epsilon0;
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x)
      if (map.ratio(x, y) > set.threshold) set.points.push_back({{x, y}, map.ratio(x, y)});
  // Row-major insertion order + stable sort gives the documented tie-break.
  std::stable_sort(set.points.begin(), set.points.end(),
                   [](const Candidate& a, const Candidate& b) { return a.separability > b.separability; });
  return set;
}

}  // namespace facejet
