#pragma once

#include "facejet/image.hpp"

namespace facejet {

/// Inclusive prefix sums of intensities and squared intensities.
/// Stored with a zero guard row/column so rectangle queries need no branches.
class SummedAreaTables {
 public:
  explicit SummedAreaTables(const GrayImage& image);

  int width() const { return width_; }
  int height() const { return height_; }

  /// Sum over the inclusive pixel rectangle [x0, x1] x [y0, y1].
  double sum(int x0, int y0, int x1, int y1) const;
  double sum_squares(int x0, int y0, int x1, int y1) const;

  /// Σ over (0,0)-(x,y) inclusive.
  double sat_at(int x, int y) const { return sat_(x + 1, y + 1); }
  double sq_sat_at(int x, int y) const { return sq_sat_(x + 1, y + 1); }

 private:
  int width_;
  int height_;
  RealPlane sat_;
  RealPlane sq_sat_;
};

SummedAreaTables build_sat(const GrayImage& image);

struct WindowStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Mean and population standard deviation over the square window of
/// the given half-width centred at `center`, clamped to the image.
WindowStats window_stats(const SummedAreaTables& tables, Pixel center, int half_width);

}  // namespace facejet
