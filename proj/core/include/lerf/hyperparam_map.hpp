// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lerf/kernels.hpp"

namespace lerf {

/// Per-source-pixel kernel hyper-parameters, interleaved per pixel:
/// values[(y * width + x) * channels + c]. For the Gaussian family the
/// channel order is (rho, inv_sigma_x, inv_sigma_y); for amplified linear
/// the single channel is alpha.
struct HyperParamMap {
  int height = 0;
  int width = 0;
  KernelKind family = KernelKind::kAnisoGaussian;
  int channels = 0;
  std::vector<double> values;

  HyperParamMap() = default;
  HyperParamMap(int h, int w, KernelKind fam);

  /// Spatially constant map, e.g. the frozen isotropic Gaussian.
  static HyperParamMap frozen(int h, int w, const GaussianParams& p);
  static HyperParamMap frozen(int h, int w, double alpha);

  std::size_t offset(int y, int x) const noexcept {
    return (static_cast<std::size_t>(y) * width + x) * channels;
  }
  double at(int y, int x, int c) const noexcept { return values[offset(y, x) + c]; }
  GaussianParams gaussian(int y, int x) const noexcept {
    const std::size_t o = offset(y, x);
    return {values[o], values[o + 1], values[o + 2]};
  }
  double alpha(int y, int x) const noexcept { return values[offset(y, x)]; }
};

}  // namespace lerf
