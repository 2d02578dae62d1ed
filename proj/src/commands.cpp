#include "facejet/commands.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

#include "facejet/clustering.hpp"
#include "facejet/dataset.hpp"
#include "facejet/error.hpp"
#include "facejet/gallery_io.hpp"
#include "facejet/matcher.hpp"

namespace facejet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& require_path(const fs::path& p, const char* field) {
  if (p.empty()) throw ConfigError(std::string("paths.") + field + " is required for this command");
  return p;
}

fs::path output_path(const CommandOptions& options, const fs::path& configured, const char* field) {
  if (options.out) return *options.out;
  return require_path(configured, field);
}

RunConfig effective(RunConfig config, const CommandOptions& options) {
  if (options.strategy) config.strategy = *options.strategy;
  if (options.seed) config.seed = *options.seed;
  if (options.raw_coefficients) config.compare_raw = true;
  return config;
}

JetExtractor make_extractor(const RunConfig& config, CoefficientMode mode = CoefficientMode::normalized) {
  return JetExtractor(build_bank(config.bank), config.epsilon_c, config.strategy, mode);
}

// splitmix64 finalizer; mixes run seed, suite and probe index into one stream seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t probe_seed(std::uint64_t seed, std::size_t suite, std::size_t probe) {
  return mix(mix(mix(seed) + suite) + probe);
}

struct ProbeSuite {
  std::string name;
  std::vector<Sample> probes;
};

std::vector<ProbeSuite> build_suites(const RunConfig& config, const LabeledDataset& probes) {
  std::vector<ProbeSuite> suites;
  suites.push_back({"clean", probes.samples()});
  for (std::size_t s = 0; s < config.perturbations.size(); ++s) {
    const PerturbSpec& spec = config.perturbations[s];
    ProbeSuite suite{std::to_string(s) + ":" + spec.label(), {}};
    for (std::size_t i = 0; i < probes.size(); ++i) {
      Sample sample = probes.samples()[i];
      sample.image = perturb(sample.image, spec, probe_seed(config.seed, s, i));
      suite.probes.push_back(std::move(sample));
    }
    suites.push_back(std::move(suite));
  }
  return suites;
}

std::vector<Sample> pooled(const std::vector<ProbeSuite>& suites) {
  std::vector<Sample> all;
  for (const auto& s : suites) all.insert(all.end(), s.probes.begin(), s.probes.end());
  return all;
}

json report_json(const EvalReport& r, bool with_probes) {
  json j = {{"rank1", r.rank1}, {"cmc", r.cmc}, {"excluded", r.excluded}, {"num_probes", r.probes.size()}};
  if (with_probes) {
    json probes = json::array();
    for (const auto& p : r.probes)
      probes.push_back({{"subject_id", p.subject_id},
                        {"source", p.source},
                        {"rank", p.rank},
                        {"best_match", p.best_match},
                        {"best_score", p.best_score}});
    j["probes"] = probes;
  }
  return j;
}

}  // namespace

void cmd_select(const RunConfig& base, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(base, options);
  const fs::path points_path = output_path(options, config.paths.points, "points");
  const LabeledDataset dataset = load_dataset(require_path(config.paths.dataset, "dataset"), 2);
  const Selection selection = select_feature_points(dataset, make_extractor(config), config.selection);
  save_points(selection.points, points_path);
  if (!config.paths.jmap.empty()) save_jmap(selection.map.ratio, config.paths.jmap);
  out << "candidates N=" << selection.candidates.size() << " q=" << selection.points.points.size()
      << " iterations=" << selection.points.iterations << "\n";
  out << "wrote " << points_path.string() << "\n";
}

void cmd_enroll(const RunConfig& base, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(base, options);
  const fs::path gallery_path = output_path(options, config.paths.gallery, "gallery");
  const FeaturePointSet points = load_points(require_path(config.paths.points, "points"));
  const LabeledDataset dataset = load_dataset(require_path(config.paths.dataset, "dataset"));
  const Gallery gallery = build_gallery(dataset, points, make_extractor(config));
  save_gallery(gallery, gallery_path);
  out << "enrolled " << gallery.templates.size() << " subjects at " << points.points.size() << " points\n";
  out << "wrote " << gallery_path.string() << "\n";
}

void cmd_identify(const RunConfig& base, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(base, options);
  if (!options.probe) throw ConfigError("--probe is required for identify");
  const Gallery gallery = load_gallery(require_path(config.paths.gallery, "gallery"));
  const GrayImage probe = load_canonical(*options.probe);
  for (const auto& p : gallery.points.points)
    if (p.pixel.x >= probe.width() || p.pixel.y >= probe.height() || p.pixel.x < 0 || p.pixel.y < 0)
      throw IncompatibleError("gallery feature point outside the probe image");
  const MatchResult match = identify(probe, gallery, gallery.extractor(config.strategy));
  for (std::size_t i = 0; i < match.ranking.size(); ++i) {
    char score[64];
    std::snprintf(score, sizeof score, "%.6f", match.scores[i]);
    out << (i + 1) << " " << match.ranking[i] << " " << score << "\n";
  }
}

void cmd_evaluate(const RunConfig& base, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(base, options);
  const fs::path report_path = output_path(options, config.paths.report, "report");
  const Gallery gallery = load_gallery(require_path(config.paths.gallery, "gallery"));
  const LabeledDataset probe_set = load_dataset(require_path(config.paths.probes, "probes"));
  const auto suites = build_suites(config, probe_set);
  const JetExtractor extractor = gallery.extractor(config.strategy);

  json report;
  report["gallery_subjects"] = gallery.templates.size();
  report["feature_points"] = gallery.points.points.size();
  report["coefficients"] = gallery.mode == CoefficientMode::raw ? "raw" : "normalized";
  json suite_rows = json::array();
  std::vector<double> normalized_rank1;
  for (const auto& suite : suites) {
    const EvalReport r = evaluate(gallery, suite.probes, extractor);
    json row = report_json(r, true);
    row["name"] = suite.name;
    suite_rows.push_back(row);
    normalized_rank1.push_back(r.rank1);
  }
  report["suites"] = suite_rows;
  const auto all_probes = pooled(suites);
  report["overall"] = report_json(evaluate(gallery, all_probes, extractor), false);
  out << "rank1 (clean) = " << format_double(normalized_rank1.front()) << "\n";

  if (config.compare_raw || !config.sweep_q.empty()) {
    const LabeledDataset enrollment = load_dataset(require_path(config.paths.dataset, "dataset"));
    if (config.compare_raw) {
      JetExtractor raw_extractor(build_bank(gallery.bank_params), gallery.epsilon_c, config.strategy,
                                 CoefficientMode::raw);
      const Gallery raw_gallery = build_gallery(enrollment, gallery.points, raw_extractor);
      json rows = json::array();
      for (std::size_t s = 0; s < suites.size(); ++s) {
        const EvalReport raw = evaluate(raw_gallery, suites[s].probes, raw_extractor);
        rows.push_back({{"name", suites[s].name},
                        {"normalized_rank1", normalized_rank1[s]},
                        {"raw_rank1", raw.rank1}});
      }
      report["comparison"] = {
          {"suites", rows},
          {"normalized_rank1", report["overall"]["rank1"]},
          {"raw_rank1", evaluate(raw_gallery, all_probes, raw_extractor).rank1}};
    }
    if (!config.sweep_q.empty()) {
      enrollment.require_classes(2);
      const JetExtractor sweep_extractor = make_extractor(config);
      const TrainingJets jets = extract_training_jets(enrollment, sweep_extractor);
      json rows = json::array();
      for (int q : config.sweep_q) {
        SelectionConfig selection = config.selection;
        selection.q = q;
        const Selection chosen = select_feature_points(jets, selection);
        const Gallery g = build_gallery(enrollment, chosen.points, sweep_extractor);
        const EvalReport r = evaluate(g, all_probes, sweep_extractor);
        rows.push_back({{"q", q}, {"candidates", chosen.candidates.size()}, {"rank1", r.rank1}});
        out << "sweep q=" << q << " rank1=" << format_double(r.rank1) << "\n";
      }
      report["sweep"] = rows;
    }
  }
  write_text_file(report_path, report.dump(2) + "\n");
  out << "wrote " << report_path.string() << "\n";
}

void cmd_perturb(const RunConfig& base, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(base, options);
  const fs::path root = output_path(options, config.paths.perturb_out, "perturb_out");
  const fs::path source = config.paths.probes.empty() ? config.paths.dataset : config.paths.probes;
  const LabeledDataset probe_set = load_dataset(require_path(source, "probes"));
  if (config.perturbations.empty()) throw ConfigError("perturbations must list at least one entry");
  const auto suites = build_suites(config, probe_set);
  std::size_t written = 0;
  for (std::size_t s = 1; s < suites.size(); ++s) {
    const fs::path dir = root / (std::to_string(s - 1) + "_" + config.perturbations[s - 1].label());
    for (const auto& sample : suites[s].probes) {
      const fs::path subject_dir = dir / sample.subject_id;
      fs::create_directories(subject_dir);
      save_pgm(sample.image, subject_dir / fs::path(sample.source).replace_extension(".pgm"));
      ++written;
    }
  }
  out << "wrote " << written << " images under " << root.string() << "\n";
}

int run_command(const std::string& command, const fs::path& config_path, const CommandOptions& options,
                std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = load_config(config_path);
    if (command == "select")
      cmd_select(config, options, out);
    else if (command == "enroll")
      cmd_enroll(config, options, out);
    else if (command == "identify")
      cmd_identify(config, options, out);
    else if (command == "evaluate")
      cmd_evaluate(config, options, out);
    else if (command == "perturb")
      cmd_perturb(config, options, out);
    else
      throw ConfigError("unknown command " + command);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IncompatibleError& e) {
    err << "incompatible input: " << e.what() << "\n";
    return kExitIncompatible;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace facejet
