// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Resampling weight functions.
///
/// Fixed families (nearest, linear, Keys cubic, Lanczos) are evaluated
/// separably over a square support. Adaptive families (amplified linear,
/// anisotropic Gaussian) take per-support-pixel hyper-parameters over a 2x2
/// support. Every weight vector returned here sums to one.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace lerf {

enum class KernelKind : std::uint8_t {
  kNearest,
  kLinear,
  kKeysCubic,
  kLanczos,
  kAmplifiedLinear,
  kAnisoGaussian,
};

struct KernelFamily {
  KernelKind kind = KernelKind::kLinear;
  double cubic_a = -0.5;   // Keys cubic shape parameter
  int lanczos_lobes = 3;   // 2 or 3

  static KernelFamily nearest() { return {KernelKind::kNearest}; }
  static KernelFamily linear() { return {KernelKind::kLinear}; }
  static KernelFamily keys_cubic(double a = -0.5);
  static KernelFamily lanczos(int lobes);
  static KernelFamily amplified_linear() { return {KernelKind::kAmplifiedLinear}; }
  static KernelFamily aniso_gaussian() { return {KernelKind::kAnisoGaussian}; }

  /// Parses nearest|bilinear|bicubic|lanczos2|lanczos3|lerf-l|lerf-g.
  static KernelFamily parse(const std::string& name);
  std::string name() const;

  bool adaptive() const noexcept {
    return kind == KernelKind::kAmplifiedLinear || kind == KernelKind::kAnisoGaussian;
  }
  /// Taps per axis: 2 (nearest, linear, adaptive), 4 (cubic, lanczos2),
  /// 6 (lanczos3).
  int taps() const noexcept;
  /// Hyper-parameters per source pixel: 1 for amplified linear, 3 for the
  /// Gaussian, 0 for fixed families.
  int hyperparam_count() const noexcept;

  friend bool operator==(const KernelFamily&, const KernelFamily&) = default;
};

inline constexpr double kAlphaMax = 2.0;
inline constexpr double kRhoMax = 0.95;
inline constexpr double kInvSigmaMax = 4.0;
inline constexpr double kHyperParamFloor = 1e-3;

/// Stabilized anisotropic Gaussian parameters (rho, 1/sigma_x, 1/sigma_y).
struct GaussianParams {
  double rho = 0.0;
  double inv_sigma_x = 1.0;
  double inv_sigma_y = 1.0;

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// Offset D from a support pixel p to the target location q, in source
/// pixels: (q - p).
struct Offset2 {
  double dy = 0.0;
  double dx = 0.0;
};

/// Weights over a taps x taps support, row-major. Tap k along an axis sits
/// at source index base + k - (taps / 2 - 1).
struct FixedWeights {
  int taps = 0;
  std::array<double, 36> w{};

  double operator()(int ky, int kx) const noexcept { return w[ky * taps + kx]; }
  static int first_tap(int taps) noexcept { return -(taps / 2 - 1); }
};

/// 1-D fixed kernel. Throws ParameterError for adaptive families.
double eval_fixed_1d(const KernelFamily& family, double x);

/// Separable product of 1-D weights around the fractional offset, normalized
/// to sum one.
FixedWeights weights_fixed_2d(const KernelFamily& family, double frac_y,
                              double frac_x);

/// Support order for the 2x2 adaptive families: (0,0), (0,1), (1,0), (1,1)
/// relative to the anchor.
using Weights4 = std::array<double, 4>;

/// max(0, 1 - a|dx|) * max(0, 1 - a|dy|) per support pixel, normalized.
/// Falls back to weight 1 on the nearest pixel when every raw weight is 0.
Weights4 weights_amplified_linear(std::span<const double, 4> alpha,
                                  std::span<const Offset2, 4> offsets);

/// Raw weight exp(-Q/2) with
/// Q = (u^2 isx^2 - 2 rho isx isy u v + v^2 isy^2) / (1 - rho^2),
/// (u, v) = (dx, dy); normalized.
Weights4 weights_aniso_gaussian(std::span<const GaussianParams, 4> params,
                                std::span<const Offset2, 4> offsets);

/// Unnormalized Gaussian response, exposed for analysis and tests.
double gaussian_raw_weight(const GaussianParams& p, const Offset2& d) noexcept;

/// Bounds alpha to [1e-3, 2].
double clamp_hyperparams(double raw_alpha);
/// Bounds rho to [-0.95, 0.95] and inverse sigmas to [1e-3, 4].
GaussianParams clamp_hyperparams(const GaussianParams& raw);

/// Rotating the image by +-90 degrees maps a Gaussian's parameters this way
/// (swap inverse sigmas, negate rho).
inline GaussianParams rotate_quarter(const GaussianParams& p) noexcept {
  return {-p.rho, p.inv_sigma_y, p.inv_sigma_x};
}

}  // namespace lerf
