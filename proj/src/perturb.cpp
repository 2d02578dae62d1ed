#include "facejet/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "facejet/error.hpp"

namespace facejet {

std::string_view to_string(ShadowSide side) {
  switch (side) {
    case ShadowSide::left: return "left";
    case ShadowSide::right: return "right";
    case ShadowSide::top: return "top";
    case ShadowSide::bottom: return "bottom";
  }
  return "left";
}

ShadowSide parse_side(std::string_view name) {
  for (ShadowSide s : {ShadowSide::left, ShadowSide::right, ShadowSide::top, ShadowSide::bottom})
    if (to_string(s) == name) return s;
  throw ConfigError("shadow side must be left|right|top|bottom, got \"" + std::string(name) + "\"");
}

void PerturbSpec::validate() const {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GlobalAffine>) {
          if (!(k.b > 0.0)) throw ConfigError("global_affine.b must be > 0");
          if (!std::isfinite(k.a)) throw ConfigError("global_affine.a must be finite");
        } else if constexpr (std::is_same_v<T, SmoothField>) {
          if (k.rows < 1 || k.cols < 1) throw ConfigError("smooth_field grid must be at least 1x1");
          if (!k.cells.empty()) {
            if (k.cells.size() != static_cast<std::size_t>(k.rows) * k.cols)
              throw ConfigError("smooth_field.cells must hold rows*cols entries");
            for (const auto& [a, b] : k.cells)
              if (!(b > 0.0) || !std::isfinite(a)) throw ConfigError("smooth_field cell gains must be > 0");
          } else if (!(k.b_range.first > 0.0) || k.b_range.second < k.b_range.first ||
                     k.a_range.second < k.a_range.first) {
            throw ConfigError("smooth_field ranges must be ordered with positive gains");
          }
        } else {
          if (!(k.gain > 0.0)) throw ConfigError("half_shadow.gain must be > 0");
        }
      },
      kind);
}

std::string PerturbSpec::label() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, GlobalAffine>) return "global_affine";
        else if constexpr (std::is_same_v<T, SmoothField>) return "smooth_field";
        else return "half_shadow_" + std::string(to_string(k.side));
      },
      kind);
}

namespace {

// Uniform double in [lo, hi] from the top 53 bits; independent of the
// standard library's distribution implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double lerp(double a, double b, double t) { return a + t * (b - a); }

// Continuous cell coordinate of a pixel along one axis, clamped to the
// outermost cell centres.
void locate(int p, int extent, int cells, int& i0, int& i1, double& t) {
  if (cells == 1) {
    i0 = i1 = 0;
    t = 0.0;
    return;
  }
  const double c = std::clamp((p + 0.5) * cells / extent - 0.5, 0.0, cells - 1.0);
  i0 = std::min(static_cast<int>(std::floor(c)), cells - 2);
  i1 = i0 + 1;
  t = c - i0;
}

}  // namespace

std::vector<std::pair<double, double>> field_cells(const SmoothField& field, std::uint64_t seed) {
  if (!field.cells.empty()) return field.cells;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<double, double>> cells;
  for (int i = 0; i < field.rows * field.cols; ++i) {
    const double a = uniform(rng, field.a_range.first, field.a_range.second);
    const double b = uniform(rng, field.b_range.first, field.b_range.second);
    cells.emplace_back(a, b);
  }
  return cells;
}

GrayImage perturb(const GrayImage& image, const PerturbSpec& spec, std::uint64_t seed) {
  spec.validate();
  GrayImage out = image;
  const int w = image.width();
  const int h = image.height();
  if (const auto* g = std::get_if<GlobalAffine>(&spec.kind)) {
    for (double& v : out.data()) v = g->a + g->b * v;
  } else if (const auto* f = std::get_if<SmoothField>(&spec.kind)) {
    const auto cells = field_cells(*f, seed);
    const auto cell = [&](int r, int c) { return cells[static_cast<std::size_t>(r) * f->cols + c]; };
    for (int y = 0; y < h; ++y) {
      int r0, r1;
      double ty;
      locate(y, h, f->rows, r0, r1, ty);
      for (int x = 0; x < w; ++x) {
        int c0, c1;
        double tx;
        locate(x, w, f->cols, c0, c1, tx);
        const double a = lerp(lerp(cell(r0, c0).first, cell(r0, c1).first, tx),
                              lerp(cell(r1, c0).first, cell(r1, c1).first, tx), ty);
        const double b = lerp(lerp(cell(r0, c0).second, cell(r0, c1).second, tx),
                              lerp(cell(r1, c0).second, cell(r1, c1).second, tx), ty);
        out(x, y) = a + b * image(x, y);
      }
    }
  } else {
    const auto& s = std::get<HalfShadow>(spec.kind);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        bool shaded = false;
        switch (s.side) {
          case ShadowSide::left: shaded = x < w / 2; break;
          case ShadowSide::right: shaded = x >= w / 2; break;
          case ShadowSide::top: shaded = y < h / 2; break;
          case ShadowSide::bottom: shaded = y >= h / 2; break;
        }
        if (shaded) out(x, y) = s.gain * image(x, y);
      }
  }
  if (spec.clip)
    for (double& v : out.data()) v = std::clamp(v, 0.0, 255.0);
  return out;
}

}  // namespace facejet
