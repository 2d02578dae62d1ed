#include "facejet/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <string>

#include "facejet/error.hpp"

namespace facejet {

ConvolutionStrategy parse_strategy(std::string_view name) {
  if (name == "direct") return ConvolutionStrategy::direct;
  if (name == "fft") return ConvolutionStrategy::fft;
  throw ConfigError("strategy must be \"direct\" or \"fft\", got \"" + std::string(name) + "\"");
}

std::string_view to_string(ConvolutionStrategy strategy) {
  return strategy == ConvolutionStrategy::direct ? "direct" : "fft";
}

namespace {

ComplexPlane convolve_direct(const GrayImage& image, const GaborKernel& kernel) {
  const int w = image.width();
  const int h = image.height();
  const int r = kernel.radius;
  ComplexPlane out(w, h);
  for (int y = 0; y < h; ++y) {
    const int dy0 = std::max(-r, y - h + 1);
    const int dy1 = std::min(r, y);
    for (int x = 0; x < w; ++x) {
      const int dx0 = std::max(-r, x - w + 1);
      const int dx1 = std::min(r, x);
      double re = 0.0;
      double im = 0.0;
      for (int dy = dy0; dy <= dy1; ++dy) {
        const double* row = image.data().data() + static_cast<std::size_t>(y - dy) * w;
        const std::complex<double>* taps =
            kernel.taps.data() + static_cast<std::size_t>(dy + r) * kernel.side() + r;
        for (int dx = dx0; dx <= dx1; ++dx) {
          const double v = row[x - dx];
          re += v * taps[dx].real();
          im += v * taps[dx].imag();
        }
      }
      out(x, y) = {re, im};
    }
  }
  return out;
}

// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
int good_fft_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using FftwPlan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

// Linear convolution of one image with many kernels through a shared
// zero-padded transform of the image. Padding by the largest radius keeps
// circular wrap-around out of the image rectangle.
class FftConvolver {
 public:
  FftConvolver(const GrayImage& image, int max_radius)
      : width_(image.width()),
        height_(image.height()),
        pw_(good_fft_size(image.width() + max_radius)),
        ph_(good_fft_size(image.height() + max_radius)),
        spectrum_(allocate()),
        work_(allocate()) {
    forward_.reset(fftw_plan_dft_2d(ph_, pw_, work_.get(), work_.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    backward_.reset(fftw_plan_dft_2d(ph_, pw_, work_.get(), work_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!forward_ || !backward_) throw Error("FFTW planning failed");

    clear(work_.get());
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x) work_[at(x, y)][0] = image(x, y);
    fftw_execute(forward_.get());
    std::copy_n(&work_[0][0], 2 * count(), &spectrum_[0][0]);
  }

  ComplexPlane apply(const GaborKernel& kernel) {
    const int r = kernel.radius;
    clear(work_.get());
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        const auto& t = kernel.tap(dx, dy);
        auto& cell = work_[at((dx + pw_) % pw_, (dy + ph_) % ph_)];
        cell[0] = t.real();
        cell[1] = t.imag();
      }
    }
    fftw_execute(forward_.get());
    for (std::size_t i = 0; i < count(); ++i) {
      const double a = work_[i][0], b = work_[i][1];
      const double c = spectrum_[i][0], d = spectrum_[i][1];
      work_[i][0] = a * c - b * d;
      work_[i][1] = a * d + b * c;
    }
    fftw_execute(backward_.get());
    const double scale = 1.0 / static_cast<double>(count());
    ComplexPlane out(width_, height_);
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x) {
        const auto& cell = work_[at(x, y)];
        out(x, y) = {cell[0] * scale, cell[1] * scale};
      }
    return out;
  }

 private:
  std::size_t count() const { return static_cast<std::size_t>(pw_) * static_cast<std::size_t>(ph_); }
  std::size_t at(int x, int y) const { return static_cast<std::size_t>(y) * pw_ + x; }
  FftwBuffer allocate() const {
    auto* p = fftw_alloc_complex(count());
    if (!p) throw std::bad_alloc();
    return FftwBuffer(p);
  }
  void clear(fftw_complex* p) const { std::fill_n(&p[0][0], 2 * count(), 0.0); }

  int width_, height_, pw_, ph_;
  FftwBuffer spectrum_;
  FftwBuffer work_;
  FftwPlan forward_;
  FftwPlan backward_;
};

}  // namespace

ComplexPlane convolve(const GrayImage& image, const GaborKernel& kernel, ConvolutionStrategy strategy) {
  if (strategy == ConvolutionStrategy::direct) return convolve_direct(image, kernel);
  FftConvolver engine(image, kernel.radius);
  return engine.apply(kernel);
}

ComplexPlane effective_phi(const GaborKernel& kernel, int width, int height) {
  const int r = kernel.radius;
  const int side = kernel.side();
  // Prefix sums over taps with a zero guard row/column.
  Plane<std::complex<double>> prefix(side + 1, side + 1);
  for (int iy = 0; iy < side; ++iy)
    for (int ix = 0; ix < side; ++ix)
      prefix(ix + 1, iy + 1) = kernel.taps[static_cast<std::size_t>(iy) * side + ix] +
                               prefix(ix, iy + 1) + prefix(ix + 1, iy) - prefix(ix, iy);

  ComplexPlane out(width, height);
  for (int y = 0; y < height; ++y) {
    const int dy0 = std::max(-r, y - height + 1);
    const int dy1 = std::min(r, y);
    for (int x = 0; x < width; ++x) {
      const int dx0 = std::max(-r, x - width + 1);
      const int dx1 = std::min(r, x);
      if (dx0 == -r && dx1 == r && dy0 == -r && dy1 == r) {
        out(x, y) = kernel.phi;
        continue;
      }
      const int ax = dx0 + r, bx = dx1 + r + 1, ay = dy0 + r, by = dy1 + r + 1;
      out(x, y) = prefix(bx, by) - prefix(ax, by) - prefix(bx, ay) + prefix(ax, ay);
    }
  }
  return out;
}

ResponseStack transform(const GrayImage& image, const FilterBank& bank, ConvolutionStrategy strategy) {
  ResponseStack stack;
  stack.width = image.width();
  stack.height = image.height();
  stack.planes.reserve(bank.size());
  if (strategy == ConvolutionStrategy::direct) {
    for (const auto& kernel : bank.kernels()) stack.planes.push_back(convolve_direct(image, kernel));
    return stack;
  }
  FftConvolver engine(image, bank.max_radius());
  for (const auto& kernel : bank.kernels()) stack.planes.push_back(engine.apply(kernel));
  return stack;
}

}  // namespace facejet
