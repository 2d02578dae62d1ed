#include "facejet/gallery_io.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "facejet/error.hpp"

namespace facejet {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf.data(), end);
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::string serialize_gallery(const Gallery& gallery) {
  json j;
  j["format_version"] = kGalleryFormatVersion;
  j["bank"] = {{"num_scales", gallery.bank_params.num_scales},
               {"num_orientations", gallery.bank_params.num_orientations},
               {"sigma", gallery.bank_params.sigma},
               {"frequency_scale", gallery.bank_params.frequency_scale},
               {"truncation_factor", gallery.bank_params.truncation_factor},
               {"dc_correct", gallery.bank_params.dc_correct}};
  j["epsilon_c"] = gallery.epsilon_c;
  j["coefficients"] = gallery.mode == CoefficientMode::normalized ? "normalized" : "raw";
  json points = json::array();
  for (const auto& p : gallery.points.points) points.push_back({p.pixel.x, p.pixel.y, p.separability});
  j["points"] = points;
  json templates = json::array();
  for (const auto& t : gallery.templates) {
    json jets = json::array();
    for (const auto& jet : t.jets) jets.push_back(jet.values);
    templates.push_back({{"subject_id", t.subject_id}, {"num_enrolled", t.num_enrolled}, {"jets", jets}});
  }
  j["templates"] = templates;
  return j.dump(1) + "\n";
}

Gallery parse_gallery(std::string_view text) {
  Gallery g;
  try {
    const json j = json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != kGalleryFormatVersion)
      throw IncompatibleError("unsupported gallery format_version " + std::to_string(version));
    const json& b = j.at("bank");
    g.bank_params.num_scales = b.at("num_scales").get<int>();
    g.bank_params.num_orientations = b.at("num_orientations").get<int>();
    g.bank_params.sigma = b.at("sigma").get<double>();
    g.bank_params.frequency_scale = b.at("frequency_scale").get<double>();
    g.bank_params.truncation_factor = b.at("truncation_factor").get<double>();
    g.bank_params.dc_correct = b.at("dc_correct").get<bool>();
    g.epsilon_c = j.at("epsilon_c").get<double>();
    const std::string mode = j.at("coefficients").get<std::string>();
    if (mode != "normalized" && mode != "raw") throw DataError("gallery coefficients must be normalized|raw");
    g.mode = mode == "raw" ? CoefficientMode::raw : CoefficientMode::normalized;
    for (const auto& p : j.at("points"))
      g.points.points.push_back({{p.at(0).get<int>(), p.at(1).get<int>()}, p.at(2).get<double>(), 0});
    const std::size_t k = static_cast<std::size_t>(g.bank_params.num_kernels());
    for (const auto& t : j.at("templates")) {
      Template templ;
      templ.subject_id = t.at("subject_id").get<std::string>();
      templ.num_enrolled = t.at("num_enrolled").get<int>();
      for (const auto& jet : t.at("jets")) templ.jets.push_back({jet.get<std::vector<double>>()});
      if (templ.jets.size() != g.points.points.size())
        throw DataError("template " + templ.subject_id + " does not cover every feature point");
      for (const auto& jet : templ.jets)
        if (jet.values.size() != k) throw DataError("template " + templ.subject_id + " has wrong jet length");
      g.templates.push_back(std::move(templ));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed gallery: ") + e.what());
  }
  g.bank_params.validate();
  return g;
}

void save_gallery(const Gallery& gallery, const fs::path& path) {
  write_text_file(path, serialize_gallery(gallery));
}

Gallery load_gallery(const fs::path& path) { return parse_gallery(read_text_file(path)); }

std::string format_points(const FeaturePointSet& points) {
  std::string out;
  for (const auto& p : points.points)
    out += std::to_string(p.pixel.x) + " " + std::to_string(p.pixel.y) + " " + format_double(p.separability) + "\n";
  return out;
}

FeaturePointSet parse_points(std::string_view text) {
  FeaturePointSet set;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    FeaturePoint p;
    if (!(fields >> p.pixel.x >> p.pixel.y >> p.separability))
      throw DataError("points line " + std::to_string(line_no) + " is not \"x y J\"");
    set.points.push_back(p);
  }
  if (set.points.empty()) throw DataError("points file is empty");
  return set;
}

void save_points(const FeaturePointSet& points, const fs::path& path) {
  write_text_file(path, format_points(points));
}

FeaturePointSet load_points(const fs::path& path) { return parse_points(read_text_file(path)); }

void save_jmap(const RealPlane& map, const fs::path& path) {
  std::string bytes = "J-MAP " + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
  for (double v : map.data()) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
  }
  write_text_file(path, bytes);
}

RealPlane load_jmap(const fs::path& path) {
  const std::string bytes = read_text_file(path);
  const auto eol = bytes.find('\n');
  std::istringstream header(bytes.substr(0, eol));
  std::string tag;
  int w = 0, h = 0;
  if (eol == std::string::npos || !(header >> tag >> w >> h) || tag != "J-MAP" || w < 1 || h < 1)
    throw FormatError("bad J-MAP header in " + path.string());
  const std::size_t count = static_cast<std::size_t>(w) * h;
  if (bytes.size() != eol + 1 + 4 * count) throw FormatError("J-MAP payload size mismatch in " + path.string());
  RealPlane map(w, h);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b)
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[eol + 1 + 4 * i + b])) << (8 * b);
    map.data()[i] = std::bit_cast<float>(bits);
  }
  return map;
}

}  // namespace facejet
