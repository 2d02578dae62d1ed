#include "facejet/dataset.hpp"

#include <algorithm>
#include <map>

#include "facejet/error.hpp"

namespace facejet {

namespace fs = std::filesystem;

LabeledDataset::LabeledDataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  std::stable_sort(samples_.begin(), samples_.end(), [](const Sample& a, const Sample& b) {
    if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
    return a.source < b.source;
  });
  for (auto& s : samples_) {
    if (subjects_.empty() || subjects_.back() != s.subject_id) subjects_.push_back(s.subject_id);
    s.class_index = static_cast<int>(subjects_.size()) - 1;
  }
}

void LabeledDataset::require_classes(std::size_t count) const {
  if (num_classes() < count)
    throw DataError("dataset needs at least " + std::to_string(count) + " classes, found " +
                    std::to_string(num_classes()));
}

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || ext == ".png";
}

fs::path sidecar_for(const fs::path& image_path) {
  fs::path eyes = image_path;
  eyes += ".eyes";
  return eyes;
}

}  // namespace

GrayImage load_canonical(const fs::path& path) {
  GrayImage image = load_image(path);
  const fs::path eyes = sidecar_for(path);
  if (fs::exists(eyes)) return align_crop(image, load_eyes(eyes));
  if (!image.is_canonical())
    throw IncompatibleError(path.string() + " is " + std::to_string(image.width()) + "x" +
                            std::to_string(image.height()) +
                            " and has no eyes sidecar; expected 128x128");
  return image;
}

LabeledDataset load_dataset(const fs::path& root, std::size_t min_classes) {
  if (!fs::is_directory(root)) throw DataError("dataset root is not a directory: " + root.string());
  std::vector<Sample> samples;
  for (const auto& subject_dir : fs::directory_iterator(root)) {
    if (!subject_dir.is_directory()) continue;
    const std::string subject = subject_dir.path().filename().string();
    for (const auto& entry : fs::directory_iterator(subject_dir.path())) {
      if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
      GrayImage image;
      try {
        image = load_canonical(entry.path());
      } catch (const IncompatibleError& e) {
        throw DataError(std::string("missing eyes for non-canonical image: ") + e.what());
      }
      samples.push_back({std::move(image), subject, entry.path().filename().string(), 0});
    }
  }
  if (samples.empty()) throw DataError("dataset root contains no images: " + root.string());
  LabeledDataset dataset(std::move(samples));
  dataset.require_classes(min_classes);
  return dataset;
}

}  // namespace facejet
