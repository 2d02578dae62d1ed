#include "facejet/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "facejet/error.hpp"

namespace facejet {

GrayImage::GrayImage(int width, int height, double fill) {
  if (width < 1 || height < 1) throw DataError("image dimensions must be positive");
  pixels_ = RealPlane(width, height, fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data) : GrayImage(width, height) {
  if (data.size() != pixels_.size()) throw DataError("image data length does not match dimensions");
  for (double v : data)
    if (!std::isfinite(v)) throw DataError("image contains non-finite samples");
  pixels_.data() = std::move(data);
}

bool GrayImage::in_range() const {
  return std::all_of(pixels_.data().begin(), pixels_.data().end(),
                     [](double v) { return v >= 0.0 && v <= 255.0; });
}

namespace {

// Reads one whitespace/comment-delimited header token of a PNM file.
std::string pnm_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

int pnm_int(std::istream& in, const std::filesystem::path& path) {
  const std::string token = pnm_token(in);
  try {
    std::size_t used = 0;
    int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw FormatError("malformed PGM header in " + path.string());
  }
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  if (pnm_token(in) != "P5") throw FormatError("not a binary PGM (P5): " + path.string());
  const int width = pnm_int(in, path);
  const int height = pnm_int(in, path);
  const int maxval = pnm_int(in, path);
  if (width < 1 || height < 1) throw FormatError("invalid PGM dimensions in " + path.string());
  if (maxval < 1 || maxval > 255)
    throw FormatError("unsupported PGM bit depth (maxval " + std::to_string(maxval) +
                      "), only 8-bit is accepted: " + path.string());
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw FormatError("truncated PGM data in " + path.string());
  std::vector<double> data(bytes.begin(), bytes.end());
  return GrayImage(width, height, std::move(data));
}

struct PngReadDeleter {
  png_structp png;
  png_infop info;
  ~PngReadDeleter() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

GrayImage load_png(const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "rb"), &std::fclose);
  if (!file) throw DataError("cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("libpng initialisation failed");
  PngReadDeleter guard{png, png_create_info_struct(png)};
  if (!guard.info) throw DataError("libpng initialisation failed");

  std::vector<unsigned char> buffer;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) throw FormatError("corrupt PNG: " + path.string());
  png_init_io(png, file.get());
  png_read_info(png, guard.info);

  const png_uint_32 width = png_get_image_width(png, guard.info);
  const png_uint_32 height = png_get_image_height(png, guard.info);
  const int depth = png_get_bit_depth(png, guard.info);
  const int color = png_get_color_type(png, guard.info);
  if (depth != 8)
    throw FormatError("unsupported PNG bit depth " + std::to_string(depth) +
                      ", only 8-bit is accepted: " + path.string());
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  png_read_update_info(png, guard.info);

  const int channels = png_get_channels(png, guard.info);
  const std::size_t row_bytes = png_get_rowbytes(png, guard.info);
  buffer.resize(row_bytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * row_bytes;
  png_read_image(png, rows.data());

  std::vector<double> data(static_cast<std::size_t>(width) * height);
  for (png_uint_32 y = 0; y < height; ++y) {
    for (png_uint_32 x = 0; x < width; ++x) {
      const unsigned char* p = rows[y] + static_cast<std::size_t>(x) * channels;
      double v;
      if (channels >= 3)
        v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
      else
        v = p[0];
      data[static_cast<std::size_t>(y) * width + x] = v;
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw DataError("no such image file: " + path.string());
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return load_pgm(path);
  if (ext == ".png") return load_png(path);
  throw FormatError("unsupported image format: " + path.string());
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<unsigned char> bytes;
  bytes.reserve(image.data().size());
  for (double v : image.data())
    bytes.push_back(static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L)));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

EyeCoords load_eyes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open eyes file " + path.string());
  EyeCoords eyes;
  if (!(in >> eyes.left.x >> eyes.left.y >> eyes.right.x >> eyes.right.y))
    throw DataError("eyes file must hold four numbers \"lx ly rx ry\": " + path.string());
  return eyes;
}

namespace {

double sample_bilinear(const GrayImage& image, double sx, double sy) {
  constexpr double kSlack = 1e-6;
  const double max_x = image.width() - 1;
  const double max_y = image.height() - 1;
  if (sx < -kSlack || sy < -kSlack || sx > max_x + kSlack || sy > max_y + kSlack) return 0.0;
  sx = std::clamp(sx, 0.0, max_x);
  sy = std::clamp(sy, 0.0, max_y);
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const int x1 = std::min(x0 + 1, image.width() - 1);
  const int y1 = std::min(y0 + 1, image.height() - 1);
  const double fx = sx - x0;
  const double fy = sy - y0;
  const double top = image(x0, y0) + fx * (image(x1, y0) - image(x0, y0));
  const double bottom = image(x0, y1) + fx * (image(x1, y1) - image(x0, y1));
  return top + fy * (bottom - top);
}

}  // namespace

GrayImage align_crop(const GrayImage& image, const EyeCoords& eyes) {
  const auto inside = [&](const Point2& p) {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= image.width() - 1 && p.y <= image.height() - 1;
  };
  if (!(eyes.left.x < eyes.right.x)) throw GeometryError("left eye must have smaller x than right eye");
  if (!inside(eyes.left) || !inside(eyes.right)) throw GeometryError("eye coordinates outside image");
  const double sdx = eyes.right.x - eyes.left.x;
  const double sdy = eyes.right.y - eyes.left.y;
  const double src_dist = std::hypot(sdx, sdy);
  if (src_dist < 8.0) throw GeometryError("eye distance below 8 pixels");

  // Output -> source: p_src = L + (|s|/|d|) * R(theta) * (p - L'), theta = angle(s) - angle(d).
  // The canonical eye axis is horizontal, so R(theta) reduces to (s/|d|) as a complex factor.
  const double dst_dist = kCanonicalRightEye.x - kCanonicalLeftEye.x;
  const double c = sdx / dst_dist;
  const double s = sdy / dst_dist;

  GrayImage out(kCanonicalSize, kCanonicalSize);
  for (int y = 0; y < kCanonicalSize; ++y) {
    for (int x = 0; x < kCanonicalSize; ++x) {
      const double ox = x - kCanonicalLeftEye.x;
      const double oy = y - kCanonicalLeftEye.y;
      const double sx = eyes.left.x + c * ox - s * oy;
      const double sy = eyes.left.y + s * ox + c * oy;
      out(x, y) = sample_bilinear(image, sx, sy);
    }
  }
  return out;
}

}  // namespace facejet
