// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lerf/error.hpp"

namespace lerf {

namespace {

double sinc(double x) noexcept {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double keys_cubic(double x, double a) noexcept {
  const double t = std::abs(x);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= kAlphaMax))
    throw ParameterError("alpha out of bounds (0, 2]: " + std::to_string(alpha));
}

void check_gaussian(const GaussianParams& p) {
  if (!(std::abs(p.rho) < 1.0))
    throw ParameterError("|rho| must be < 1, got " + std::to_string(p.rho));
  if (!(p.inv_sigma_x > 0.0) || !(p.inv_sigma_y > 0.0) ||
      !std::isfinite(p.inv_sigma_x) || !std::isfinite(p.inv_sigma_y))
    throw ParameterError("inverse sigmas must be finite and > 0");
}

// Nearest support pixel for the all-zero fallback; ties go to the earlier
// (lower coordinate) entry.
std::size_t nearest_index(std::span<const Offset2, 4> offsets) noexcept {
  std::size_t best = 0;
  double best_d = offsets[0].dy * offsets[0].dy + offsets[0].dx * offsets[0].dx;
  for (std::size_t i = 1; i < 4; ++i) {
    const double d = offsets[i].dy * offsets[i].dy + offsets[i].dx * offsets[i].dx;
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

Weights4 normalize_or_nearest(Weights4 raw, std::span<const Offset2, 4> offsets) {
  const double sum = raw[0] + raw[1] + raw[2] + raw[3];
  if (!(sum > 0.0)) {
    Weights4 out{};
    out[nearest_index(offsets)] = 1.0;
    return out;
  }
  for (double& w : raw) w /= sum;
  return raw;
}

}  // namespace

KernelFamily KernelFamily::keys_cubic(double a) {
  if (!std::isfinite(a)) throw ParameterError("Keys cubic parameter must be finite");
  KernelFamily f{KernelKind::kKeysCubic};
  f.cubic_a = a;
  return f;
}

KernelFamily KernelFamily::lanczos(int lobes) {
  if (lobes != 2 && lobes != 3)
    throw ParameterError("Lanczos lobes must be 2 or 3, got " + std::to_string(lobes));
  KernelFamily f{KernelKind::kLanczos};
  f.lanczos_lobes = lobes;
  return f;
}

KernelFamily KernelFamily::parse(const std::string& name) {
  if (name == "nearest") return nearest();
  if (name == "bilinear" || name == "linear") return linear();
  if (name == "bicubic") return keys_cubic();
  if (name == "lanczos2") return lanczos(2);
  if (name == "lanczos3") return lanczos(3);
  if (name == "lerf-l") return amplified_linear();
  if (name == "lerf-g") return aniso_gaussian();
  throw ParameterError("unknown kernel '" + name + "'");
}

std::string KernelFamily::name() const {
  switch (kind) {
    case KernelKind::kNearest:
      return "nearest";
    case KernelKind::kLinear:
      return "bilinear";
    case KernelKind::kKeysCubic:
      return "bicubic";
    case KernelKind::kLanczos:
      return lanczos_lobes == 2 ? "lanczos2" : "lanczos3";
    case KernelKind::kAmplifiedLinear:
      return "lerf-l";
    case KernelKind::kAnisoGaussian:
      return "lerf-g";
  }
  return "unknown";
}

int KernelFamily::taps() const noexcept {
  switch (kind) {
    case KernelKind::kKeysCubic:
      return 4;
    case KernelKind::kLanczos:
      return 2 * lanczos_lobes;
    default:
      return 2;
  }
}

int KernelFamily::hyperparam_count() const noexcept {
  switch (kind) {
    case KernelKind::kAmplifiedLinear:
      return 1;
    case KernelKind::kAnisoGaussian:
      return 3;
    default:
      return 0;
  }
}

double eval_fixed_1d(const KernelFamily& family, double x) {
  switch (family.kind) {
    case KernelKind::kNearest:
      // x = sample - tap; the tie at |x| = 0.5 goes to the lower tap.
      return (x > -0.5 && x <= 0.5) ? 1.0 : 0.0;
    case KernelKind::kLinear:
      return std::max(0.0, 1.0 - std::abs(x));
    case KernelKind::kKeysCubic:
      return keys_cubic(x, family.cubic_a);
    case KernelKind::kLanczos: {
      const double n = family.lanczos_lobes;
      if (std::abs(x) >= n) return 0.0;
      return sinc(x) * sinc(x / n);
    }
    case KernelKind::kAmplifiedLinear:
    case KernelKind::kAnisoGaussian:
      break;
  }
  throw ParameterError("eval_fixed_1d called with adaptive family " + family.name());
}

FixedWeights weights_fixed_2d(const KernelFamily& family, double frac_y,
                              double frac_x) {
  if (family.adaptive())
    throw ParameterError("weights_fixed_2d called with adaptive family " +
                         family.name());
  FixedWeights out;
  out.taps = family.taps();
  const int first = FixedWeights::first_tap(out.taps);
  std::array<double, 6> wy{};
  std::array<double, 6> wx{};
  for (int k = 0; k < out.taps; ++k) {
    wy[k] = eval_fixed_1d(family, frac_y - (first + k));
    wx[k] = eval_fixed_1d(family, frac_x - (first + k));
  }
  double sum = 0.0;
  for (int ky = 0; ky < out.taps; ++ky)
    for (int kx = 0; kx < out.taps; ++kx) {
      const double w = wy[ky] * wx[kx];
      out.w[ky * out.taps + kx] = w;
      sum += w;
    }
  for (int i = 0; i < out.taps * out.taps; ++i) out.w[i] /= sum;
  return out;
}

Weights4 weights_amplified_linear(std::span<const double, 4> alpha,
                                  std::span<const Offset2, 4> offsets) {
  Weights4 raw{};
  for (std::size_t i = 0; i < 4; ++i) {
    check_alpha(alpha[i]);
    const double fx = std::max(0.0, 1.0 - alpha[i] * std::abs(offsets[i].dx));
    const double fy = std::max(0.0, 1.0 - alpha[i] * std::abs(offsets[i].dy));
    raw[i] = fx * fy;
  }
  return normalize_or_nearest(raw, offsets);
}

double gaussian_raw_weight(const GaussianParams& p, const Offset2& d) noexcept {
  const double u = d.dx * p.inv_sigma_x;
  const double v = d.dy * p.inv_sigma_y;
  const double q = (u * u - 2.0 * p.rho * u * v + v * v) / (1.0 - p.rho * p.rho);
  return std::exp(-0.5 * q);
}

Weights4 weights_aniso_gaussian(std::span<const GaussianParams, 4> params,
                                std::span<const Offset2, 4> offsets) {
  Weights4 raw{};
  for (std::size_t i = 0; i < 4; ++i) {
    check_gaussian(params[i]);
    raw[i] = gaussian_raw_weight(params[i], offsets[i]);
  }
  return normalize_or_nearest(raw, offsets);
}

double clamp_hyperparams(double raw_alpha) {
  if (std::isnan(raw_alpha)) throw ParameterError("alpha is NaN");
  return std::clamp(raw_alpha, kHyperParamFloor, kAlphaMax);
}

GaussianParams clamp_hyperparams(const GaussianParams& raw) {
  if (std::isnan(raw.rho) || std::isnan(raw.inv_sigma_x) || std::isnan(raw.inv_sigma_y))
    throw ParameterError("Gaussian hyper-parameter is NaN");
  return {std::clamp(raw.rho, -kRhoMax, kRhoMax),
          std::clamp(raw.inv_sigma_x, kHyperParamFloor, kInvSigmaMax),
          std::clamp(raw.inv_sigma_y, kHyperParamFloor, kInvSigmaMax)};
}

}  // namespace lerf
