#include "facejet/sat.hpp"

#include <algorithm>
#include <cmath>

#include "facejet/error.hpp"

namespace facejet {

SummedAreaTables::SummedAreaTables(const GrayImage& image)
    : width_(image.width()),
      height_(image.height()),
      sat_(width_ + 1, height_ + 1, 0.0),
      sq_sat_(width_ + 1, height_ + 1, 0.0) {
  for (int y = 0; y < height_; ++y) {
    double row = 0.0;
    double row_sq = 0.0;
    for (int x = 0; x < width_; ++x) {
      const double v = image(x, y);
      row += v;
      row_sq += v * v;
      sat_(x + 1, y + 1) = sat_(x + 1, y) + row;
      sq_sat_(x + 1, y + 1) = sq_sat_(x + 1, y) + row_sq;
    }
  }
}

double SummedAreaTables::sum(int x0, int y0, int x1, int y1) const {
  return sat_(x1 + 1, y1 + 1) - sat_(x0, y1 + 1) - sat_(x1 + 1, y0) + sat_(x0, y0);
}

double SummedAreaTables::sum_squares(int x0, int y0, int x1, int y1) const {
  return sq_sat_(x1 + 1, y1 + 1) - sq_sat_(x0, y1 + 1) - sq_sat_(x1 + 1, y0) + sq_sat_(x0, y0);
}

SummedAreaTables build_sat(const GrayImage& image) { return SummedAreaTables(image); }

WindowStats window_stats(const SummedAreaTables& tables, Pixel center, int half_width) {
  if (center.x < 0 || center.y < 0 || center.x >= tables.width() || center.y >= tables.height())
    throw DataError("window centre outside image");
  if (half_width < 1) throw ConfigError("window half-width must be at least 1");
  const int x0 = std::max(center.x - half_width, 0);
  const int y0 = std::max(center.y - half_width, 0);
  const int x1 = std::min(center.x + half_width, tables.width() - 1);
  const int y1 = std::min(center.y + half_width, tables.height() - 1);
  const double count = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);
  const double mean = tables.sum(x0, y0, x1, y1) / count;
  const double mean_sq = tables.sum_squares(x0, y0, x1, y1) / count;
  // Cancellation can leave a tiny negative variance on flat windows.
  const double variance = std::max(mean_sq - mean * mean, 0.0);
  return {mean, std::sqrt(variance)};
}

}  // namespace facejet
