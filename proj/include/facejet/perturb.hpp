#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "facejet/image.hpp"

namespace facejet {

/// I' = a + b I everywhere.
struct GlobalAffine {
  double a = 0.0;
  double b = 1.0;
  bool operator==(const GlobalAffine&) const = default;
};

/// Coarse rows x cols grid of (a, b) pairs anchored at cell centres and
/// bilinearly interpolated per pixel. An empty `cells` list is drawn
/// uniformly from the ranges using the perturbation seed.
struct SmoothField {
  int rows = 3;
  int cols = 3;
  std::vector<std::pair<double, double>> cells;  // row-major (a, b)
  std::pair<double, double> a_range{-30.0, 30.0};
  std::pair<double, double> b_range{0.7, 1.3};
  bool operator==(const SmoothField&) const = default;
};

enum class ShadowSide { left, right, top, bottom };

/// Multiplies one half of the image by `gain`.
struct HalfShadow {
  ShadowSide side = ShadowSide::left;
  double gain = 0.5;
  bool operator==(const HalfShadow&) const = default;
};

struct PerturbSpec {
  std::variant<GlobalAffine, SmoothField, HalfShadow> kind;
  bool clip = true;

  void validate() const;
  std::string label() const;
  bool operator==(const PerturbSpec&) const = default;
};

std::string_view to_string(ShadowSide side);
ShadowSide parse_side(std::string_view name);

/// (a, b) grid actually used by a smooth field for a given seed.
std::vector<std::pair<double, double>> field_cells(const SmoothField& field, std::uint64_t seed);

GrayImage perturb(const GrayImage& image, const PerturbSpec& spec, std::uint64_t seed = 0);

}  // namespace facejet
