#include "facejet/config.hpp"

#include <json.hpp>

#include <set>

#include "facejet/error.hpp"
#include "facejet/gallery_io.hpp"

namespace facejet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Typed access to one JSON object; every key read is remembered so that
// leftover (misspelled) keys can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_ + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return object_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    if (!has(key)) return;
    try {
      target = object_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key) + " has the wrong type");
    }
  }

  const json& at(const std::string& key) const { return object_.at(key); }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : object_.items())
      if (!seen_.count(key)) throw ConfigError("unknown config field " + field(key));
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

fs::path resolve(const std::string& text, const fs::path& base) {
  if (text.empty()) return {};
  fs::path p(text);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::pair<double, double> read_pair(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(field + " must be a two-number array");
  return {j[0].get<double>(), j[1].get<double>()};
}

PerturbSpec parse_perturbation(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  std::string kind;
  r.read("kind", kind);
  PerturbSpec spec;
  r.read("clip", spec.clip);
  if (kind == "global_affine") {
    GlobalAffine g;
    r.read("a", g.a);
    r.read("b", g.b);
    spec.kind = g;
  } else if (kind == "smooth_field") {
    SmoothField f;
    r.read("rows", f.rows);
    r.read("cols", f.cols);
    if (r.has("cells")) {
      const json& cells = r.at("cells");
      if (!cells.is_array()) throw ConfigError(r.field("cells") + " must be an array");
      for (const auto& c : cells) f.cells.push_back(read_pair(c, r.field("cells")));
    }
    if (r.has("a_range")) f.a_range = read_pair(r.at("a_range"), r.field("a_range"));
    if (r.has("b_range")) f.b_range = read_pair(r.at("b_range"), r.field("b_range"));
    spec.kind = f;
  } else if (kind == "half_shadow") {
    HalfShadow s;
    std::string side = "left";
    r.read("side", side);
    s.side = parse_side(side);
    r.read("gain", s.gain);
    spec.kind = s;
  } else {
    throw ConfigError(r.field("kind") + " must be global_affine|smooth_field|half_shadow");
  }
  r.finish();
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec;
}

json perturbation_json(const PerturbSpec& spec) {
  json j;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GlobalAffine>) {
          j["kind"] = "global_affine";
          j["a"] = k.a;
          j["b"] = k.b;
        } else if constexpr (std::is_same_v<T, SmoothField>) {
          j["kind"] = "smooth_field";
          j["rows"] = k.rows;
          j["cols"] = k.cols;
          if (!k.cells.empty()) {
            json cells = json::array();
            for (const auto& [a, b] : k.cells) cells.push_back({a, b});
            j["cells"] = cells;
          }
          j["a_range"] = {k.a_range.first, k.a_range.second};
          j["b_range"] = {k.b_range.first, k.b_range.second};
        } else {
          j["kind"] = "half_shadow";
          j["side"] = std::string(to_string(k.side));
          j["gain"] = k.gain;
        }
      },
      spec.kind);
  j["clip"] = spec.clip;
  return j;
}

}  // namespace

void RunConfig::validate() const {
  bank.validate();
  if (!(epsilon_c > 0.0)) throw ConfigError("epsilon_c must be > 0");
  selection.validate();
  for (int q : sweep_q)
    if (q <= 1) throw ConfigError("sweep_q entry " + std::to_string(q) + " violates 1 < q < N");
  for (const auto& p : perturbations) p.validate();
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig config;
  ObjectReader r(root, "");

  if (r.has("bank")) {
    ObjectReader b(r.at("bank"), "bank");
    b.read("num_scales", config.bank.num_scales);
    b.read("num_orientations", config.bank.num_orientations);
    b.read("sigma", config.bank.sigma);
    b.read("frequency_scale", config.bank.frequency_scale);
    b.read("truncation_factor", config.bank.truncation_factor);
    b.read("dc_correct", config.bank.dc_correct);
    b.finish();
  }
  r.read("epsilon_c", config.epsilon_c);

  if (r.has("selection")) {
    ObjectReader s(r.at("selection"), "selection");
    std::string mode = "quantile";
    s.read("threshold_mode", mode);
    if (mode == "quantile")
      config.selection.threshold_mode = ThresholdMode::quantile;
    else if (mode == "absolute")
      config.selection.threshold_mode = ThresholdMode::absolute;
    else
      throw ConfigError("selection.threshold_mode must be absolute|quantile");
    s.read("epsilon0", config.selection.epsilon0);
    s.read("keep_fraction", config.selection.keep_fraction);
    s.read("q", config.selection.q);
    s.read("max_iterations", config.selection.max_iterations);
    s.read("sw_floor", config.selection.sw_floor);
    s.finish();
  }

  if (r.has("perturbations")) {
    const json& list = r.at("perturbations");
    if (!list.is_array()) throw ConfigError("perturbations must be an array");
    for (std::size_t i = 0; i < list.size(); ++i)
      config.perturbations.push_back(parse_perturbation(list[i], "perturbations[" + std::to_string(i) + "]"));
  }

  if (r.has("paths")) {
    ObjectReader p(r.at("paths"), "paths");
    const auto path_field = [&](const char* key, fs::path& target) {
      std::string text;
      p.read(key, text);
      target = resolve(text, base_dir);
    };
    path_field("dataset", config.paths.dataset);
    path_field("probes", config.paths.probes);
    path_field("points", config.paths.points);
    path_field("gallery", config.paths.gallery);
    path_field("report", config.paths.report);
    path_field("jmap", config.paths.jmap);
    path_field("perturb_out", config.paths.perturb_out);
    p.finish();
  }

  r.read("seed", config.seed);
  if (r.has("strategy")) {
    std::string s;
    r.read("strategy", s);
    config.strategy = parse_strategy(s);
  }
  r.read("sweep_q", config.sweep_q);
  r.read("compare_raw", config.compare_raw);
  r.finish();
  config.validate();
  return config;
}

RunConfig load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  return parse_config(text, path.parent_path());
}

std::string serialize_config(const RunConfig& config) {
  json j;
  j["bank"] = {{"num_scales", config.bank.num_scales},
               {"num_orientations", config.bank.num_orientations},
               {"sigma", config.bank.sigma},
               {"frequency_scale", config.bank.frequency_scale},
               {"truncation_factor", config.bank.truncation_factor},
               {"dc_correct", config.bank.dc_correct}};
  j["epsilon_c"] = config.epsilon_c;
  j["selection"] = {
      {"threshold_mode", config.selection.threshold_mode == ThresholdMode::quantile ? "quantile" : "absolute"},
      {"epsilon0", config.selection.epsilon0},
      {"keep_fraction", config.selection.keep_fraction},
      {"q", config.selection.q},
      {"max_iterations", config.selection.max_iterations},
      {"sw_floor", config.selection.sw_floor}};
  j["perturbations"] = json::array();
  for (const auto& p : config.perturbations) j["perturbations"].push_back(perturbation_json(p));
  j["paths"] = {{"dataset", config.paths.dataset.string()},   {"probes", config.paths.probes.string()},
                {"points", config.paths.points.string()},     {"gallery", config.paths.gallery.string()},
                {"report", config.paths.report.string()},     {"jmap", config.paths.jmap.string()},
                {"perturb_out", config.paths.perturb_out.string()}};
  j["seed"] = config.seed;
  j["strategy"] = std::string(to_string(config.strategy));
  j["sweep_q"] = config.sweep_q;
  j["compare_raw"] = config.compare_raw;
  return j.dump(2) + "\n";
}

}  // namespace facejet
