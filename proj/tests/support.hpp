// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "lerf/image.hpp"

namespace lerf::test {

inline ImageBuffer random_image(int h, int w, int c, unsigned seed, bool quantized = false) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageBuffer img(h, w, c, c == 3 ? ColorSpace::kRgb : ColorSpace::kY);
  for (double& v : img.data()) v = quantized ? std::round(u(rng) * 255.0) / 255.0 : u(rng);
  return img;
}

inline ImageBuffer constant_image(int h, int w, int c, double v) {
  ImageBuffer img(h, w, c, c == 3 ? ColorSpace::kRgb : ColorSpace::kY);
  for (double& x : img.data()) x = v;
  return img;
}

// Band-limited test image: a few low-frequency sinusoids per channel.
inline ImageBuffer smooth_image(int h, int w, int c, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ImageBuffer img(h, w, c, c == 3 ? ColorSpace::kRgb : ColorSpace::kY);
  for (int ch = 0; ch < c; ++ch) {
    double fy[3], fx[3], ph[3];
    for (int k = 0; k < 3; ++k) {
      fy[k] = 0.02 + 0.06 * u(rng);
      fx[k] = 0.02 + 0.06 * u(rng);
      ph[k] = 6.28 * u(rng);
    }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double v = 0.5;
        for (int k = 0; k < 3; ++k) v += 0.13 * std::sin(fy[k] * y + fx[k] * x + ph[k]);
        img.at(ch, y, x) = v;
      }
  }
  return img;
}

inline double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() /
           ("lerf_test_" + name + "_" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace lerf::test
