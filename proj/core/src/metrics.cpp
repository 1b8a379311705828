// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lerf/error.hpp"
#include "lerf/kernels.hpp"
#include "lerf/parallel.hpp"
#include "lerf/resampler.hpp"

namespace lerf {

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

void check_same(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
  if (!a.same_shape(b))
    throw ShapeError(std::string(what) + ": image shapes differ (" +
                     std::to_string(a.height()) + "x" + std::to_string(a.width()) + "x" +
                     std::to_string(a.channels()) + " vs " + std::to_string(b.height()) +
                     "x" + std::to_string(b.width()) + "x" + std::to_string(b.channels()) +
                     ")");
}

// Valid-mode separable filtering of one plane.
std::vector<double> filter_valid(const std::vector<double>& in, int h, int w,
                                 const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  const int oh = h - n + 1;
  const int ow = w - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += taps[k] * in[static_cast<std::size_t>(y) * w + x + k];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += taps[k] * tmp[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

std::vector<double> ssim_window() {
  std::vector<double> taps(kSsimWindow);
  double sum = 0.0;
  for (int k = 0; k < kSsimWindow; ++k) {
    const double d = k - kSsimWindow / 2;
    taps[k] = std::exp(-0.5 * d * d / (kSsimSigma * kSsimSigma));
    sum += taps[k];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Weights of one output sample along an axis for the (optionally
// stretched) Keys cubic kernel.
struct AxisTaps {
  int first = 0;
  std::vector<double> w;
};

std::vector<AxisTaps> cubic_axis_taps(int src_n, int dst_n, double r, bool antialias) {
  const KernelFamily cubic = KernelFamily::keys_cubic(-0.5);
  const double stretch = (antialias && r < 1.0) ? r : 1.0;
  const double half_width = 2.0 / stretch;
  std::vector<AxisTaps> axis(static_cast<std::size_t>(dst_n));
  for (int t = 0; t < dst_n; ++t) {
    const double s = back_project_scale(r, t);
    AxisTaps& a = axis[static_cast<std::size_t>(t)];
    a.first = static_cast<int>(std::floor(s - half_width)) + 1;
    const int last = static_cast<int>(std::ceil(s + half_width)) - 1;
    double sum = 0.0;
    for (int p = a.first; p <= last; ++p) {
      const double v = stretch * eval_fixed_1d(cubic, (s - p) * stretch);
      a.w.push_back(v);
      sum += v;
    }
    for (double& v : a.w) v /= sum;
  }
  (void)src_n;
  return axis;
}

}  // namespace

double psnr_from_mse(double mse) noexcept {
  if (!(mse > 0.0)) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double psnr_y(const ImageBuffer& a, const ImageBuffer& b, int shave) {
  check_same(a, b, "psnr_y");
  if (shave < 0) throw ParameterError("shave must be >= 0");
  if (2 * shave >= a.height() || 2 * shave >= a.width())
    throw EvaluationError("shave " + std::to_string(shave) + " leaves no pixels");
  const ImageBuffer ya = luma_plane(a);
  const ImageBuffer yb = luma_plane(b);
  double sse = 0.0;
  for (int y = shave; y < a.height() - shave; ++y)
    for (int x = shave; x < a.width() - shave; ++x) {
      const double d = ya.at(0, y, x) - yb.at(0, y, x);
      sse += d * d;
    }
  const double n = static_cast<double>(a.height() - 2 * shave) * (a.width() - 2 * shave);
  return psnr_from_mse(sse / n);
}

double mpsnr(const ImageBuffer& a, const ImageBuffer& b, const ValidMask& mask) {
  check_same(a, b, "mpsnr");
  if (mask.height != a.height() || mask.width != a.width())
    throw ShapeError("mpsnr: mask dimensions differ from the images");
  const std::size_t valid = mask.count();
  if (valid == 0) throw EvaluationError("mpsnr: mask selects no pixels");
  double sse = 0.0;
  for (int c = 0; c < a.channels(); ++c)
    for (int y = 0; y < a.height(); ++y)
      for (int x = 0; x < a.width(); ++x) {
        if (!mask.at(y, x)) continue;
        const double d = a.at(c, y, x) - b.at(c, y, x);
        sse += d * d;
      }
  return psnr_from_mse(sse / (static_cast<double>(valid) * a.channels()));
}

double ssim(const ImageBuffer& a, const ImageBuffer& b, const ValidMask* mask) {
  check_same(a, b, "ssim");
  if (a.height() < kSsimWindow || a.width() < kSsimWindow)
    throw EvaluationError("ssim needs images of at least 11x11 pixels");
  const ImageBuffer ya = luma_plane(a);
  const ImageBuffer yb = luma_plane(b);
  const int h = a.height();
  const int w = a.width();
  const std::size_t n = a.pixel_count();
  std::vector<double> pa(ya.plane(0).begin(), ya.plane(0).end());
  std::vector<double> pb(yb.plane(0).begin(), yb.plane(0).end());
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = pa[i] * pa[i];
    bb[i] = pb[i] * pb[i];
    ab[i] = pa[i] * pb[i];
  }
  const auto taps = ssim_window();
  const auto mu_a = filter_valid(pa, h, w, taps);
  const auto mu_b = filter_valid(pb, h, w, taps);
  const auto e_aa = filter_valid(aa, h, w, taps);
  const auto e_bb = filter_valid(bb, h, w, taps);
  const auto e_ab = filter_valid(ab, h, w, taps);
  if (mask && (mask->height != h || mask->width != w))
    throw ShapeError("ssim: mask dimensions differ from the images");

  // Windows containing an invalid pixel are skipped; an integral image of
  // the invalid count makes the test O(1) per window.
  const int ow = w - kSsimWindow + 1;
  std::vector<int> holes;
  if (mask) {
    holes.assign(static_cast<std::size_t>(h + 1) * (w + 1), 0);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        holes[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] =
            (mask->at(y, x) ? 0 : 1) + holes[static_cast<std::size_t>(y) * (w + 1) + x + 1] +
            holes[static_cast<std::size_t>(y + 1) * (w + 1) + x] -
            holes[static_cast<std::size_t>(y) * (w + 1) + x];
  }
  auto window_ok = [&](std::size_t i) {
    if (!mask) return true;
    const int y = static_cast<int>(i) / ow;
    const int x = static_cast<int>(i) % ow;
    const auto at = [&](int yy, int xx) { return holes[static_cast<std::size_t>(yy) * (w + 1) + xx]; };
    return at(y + kSsimWindow, x + kSsimWindow) - at(y, x + kSsimWindow) -
               at(y + kSsimWindow, x) + at(y, x) == 0;
  };

  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    if (!window_ok(i)) continue;
    ++used;
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2.0 * ma * mb + kSsimC1) * (2.0 * cov + kSsimC2)) /
             ((ma * ma + mb * mb + kSsimC1) * (va + vb + kSsimC2));
  }
  if (used == 0) throw EvaluationError("ssim: no window lies fully inside the mask");
  return total / static_cast<double>(used);
}

ImageBuffer degrade_bicubic(const ImageBuffer& hr, double r_h, double r_w, bool antialias) {
  if (!(r_h > 0.0 && r_h <= 1.0) || !(r_w > 0.0 && r_w <= 1.0))
    throw ParameterError("degradation factors must lie in (0, 1]");
  const auto [h, w] = scaled_dims(hr.height(), hr.width(), r_h, r_w);
  const auto ty = cubic_axis_taps(hr.height(), h, r_h, antialias);
  const auto tx = cubic_axis_taps(hr.width(), w, r_w, antialias);

  // Width first, then height, both with replicate padding.
  ImageBuffer mid(hr.height(), w, hr.channels(), hr.colorspace(), BitDepth::kFloat);
  for (int c = 0; c < hr.channels(); ++c)
    parallel_rows(hr.height(), [&](int y0, int y1) {
      for (int y = y0; y < y1; ++y)
        for (int x = 0; x < w; ++x) {
          const AxisTaps& t = tx[static_cast<std::size_t>(x)];
          double acc = 0.0;
          for (std::size_t k = 0; k < t.w.size(); ++k)
            acc += t.w[k] * sample_clamped(hr, c, y, t.first + static_cast<int>(k));
          mid.at(c, y, x) = acc;
        }
    });
  ImageBuffer out(h, w, hr.channels(), hr.colorspace(), BitDepth::kFloat);
  for (int c = 0; c < hr.channels(); ++c)
    parallel_rows(h, [&](int y0, int y1) {
      for (int y = y0; y < y1; ++y) {
        const AxisTaps& t = ty[static_cast<std::size_t>(y)];
        for (int x = 0; x < w; ++x) {
          double acc = 0.0;
          for (std::size_t k = 0; k < t.w.size(); ++k)
            acc += t.w[k] * sample_clamped(mid, c, t.first + static_cast<int>(k), x);
          out.at(c, y, x) = acc;
        }
      }
    });
  return out;
}

}  // namespace lerf
