// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/fixture_banks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lerf/error.hpp"

namespace lerf {

namespace {

constexpr std::array<PatternName, 3> kPatterns = {PatternName::kS, PatternName::kC,
                                                  PatternName::kX};

// Inverse sigma on flat content, and how far edges push it.
constexpr double kBaseInvSigma = 2.0;
constexpr double kAcrossBoost = 1.5;
constexpr double kAlongReduction = 0.8;
constexpr double kGradientRef = 0.08;
constexpr double kAlphaBoost = 0.6;
constexpr double kUnsharpGain = 0.2;

struct Gradient {
  double gx = 0.0;
  double gy = 0.0;
};

Gradient pattern_gradient(PatternName pattern, const std::array<double, 4>& p) {
  switch (pattern) {
    case PatternName::kS:
      return {((p[1] - p[0]) + (p[3] - p[2])) * 0.5, ((p[2] - p[0]) + (p[3] - p[1])) * 0.5};
    case PatternName::kC:
      return {(p[3] - p[0]) / 3.0, 0.0};
    case PatternName::kX: {
      // Minimum-norm gradient consistent with the derivative along (1,1).
      const double g = (p[3] - p[0]) / 3.0;
      return {g * 0.5, g * 0.5};
    }
  }
  return {};
}

double edge_strength(const Gradient& g) {
  return std::min(1.0, std::hypot(g.gx, g.gy) / kGradientRef);
}

template <typename Fill>
LutTable fill_table(PatternName pattern, RotationRole role, int c_out, Fill&& fill) {
  LutTable table(pattern, role, c_out);
  std::array<double, 4> px{};
  std::array<double, 3> values{};
  for (int i0 = 0; i0 < kLutSamples; ++i0)
    for (int i1 = 0; i1 < kLutSamples; ++i1)
      for (int i2 = 0; i2 < kLutSamples; ++i2)
        for (int i3 = 0; i3 < kLutSamples; ++i3) {
          px = {lut_sample_value(i0), lut_sample_value(i1), lut_sample_value(i2),
                lut_sample_value(i3)};
          fill(px, values);
          const std::size_t cell = LutTable::cell(i0, i1, i2, i3);
          for (int ch = 0; ch < c_out; ++ch) table.set(cell, ch, values[ch]);
        }
  return table;
}

void add_f_tables(LutBank& bank,
                  const std::function<void(PatternName, const std::array<double, 4>&,
                                           std::array<double, 3>&)>& rule) {
  const int c_out = KernelFamily{bank.family}.hyperparam_count();
  for (RotationRole role : {RotationRole::kDeg0_180, RotationRole::kDeg90_270})
    for (PatternName pattern : kPatterns)
      bank.f_tables.push_back(fill_table(
          pattern, role, c_out,
          [&](const std::array<double, 4>& px, std::array<double, 3>& out) {
            rule(pattern, px, out);
          }));
}

}  // namespace

LutBank make_isotropic_bank(KernelKind family) {
  LutBank bank;
  bank.family = family;
  const int c_out = KernelFamily{family}.hyperparam_count();
  if (c_out == 0) throw ConfigurationError("isotropic bank needs an adaptive family");
  for (RotationRole role : {RotationRole::kDeg0_180, RotationRole::kDeg90_270})
    for (PatternName pattern : kPatterns) {
      LutTable table(pattern, role, c_out);
      for (std::size_t cell = 0; cell < kLutCells; ++cell) {
        if (family == KernelKind::kAnisoGaussian) {
          table.set(cell, 0, 0.0);
          table.set(cell, 1, 1.0);
          table.set(cell, 2, 1.0);
        } else {
          table.set(cell, 0, 1.0);
        }
      }
      bank.f_tables.push_back(std::move(table));
    }
  return bank;
}

GaussianParams structure_gaussian(PatternName pattern, const std::array<double, 4>& px) {
  const Gradient g = pattern_gradient(pattern, px);
  const double s = edge_strength(g);
  if (s == 0.0) return {0.0, kBaseInvSigma, kBaseInvSigma};

  const double norm = std::hypot(g.gx, g.gy);
  const double nx = g.gx / norm;
  const double ny = g.gy / norm;
  const double sigma_across = 1.0 / (kBaseInvSigma + kAcrossBoost * s);
  const double sigma_along = 1.0 / (kBaseInvSigma - kAlongReduction * s);
  const double va = sigma_across * sigma_across;
  const double vt = sigma_along * sigma_along;
  // Covariance = vt * t t^T + va * n n^T with t = (-ny, nx).
  const double sxx = vt * ny * ny + va * nx * nx;
  const double syy = vt * nx * nx + va * ny * ny;
  const double sxy = (va - vt) * nx * ny;
  const double sx = std::sqrt(sxx);
  const double sy = std::sqrt(syy);
  return clamp_hyperparams(GaussianParams{sxy / (sx * sy), 1.0 / sx, 1.0 / sy});
}

double structure_alpha(PatternName pattern, const std::array<double, 4>& px) {
  return clamp_hyperparams(1.0 + kAlphaBoost * edge_strength(pattern_gradient(pattern, px)));
}

double structure_residual(const std::array<double, 4>& px) {
  const double mean = (px[0] + px[1] + px[2] + px[3]) * 0.25;
  return kUnsharpGain * (px[0] - mean);
}

LutBank make_structure_bank(KernelKind family, bool with_enhancer) {
  LutBank bank;
  bank.family = family;
  if (family == KernelKind::kAnisoGaussian) {
    add_f_tables(bank, [](PatternName pattern, const std::array<double, 4>& px,
                          std::array<double, 3>& out) {
      const GaussianParams p = structure_gaussian(pattern, px);
      out = {p.rho, p.inv_sigma_x, p.inv_sigma_y};
    });
  } else if (family == KernelKind::kAmplifiedLinear) {
    add_f_tables(bank, [](PatternName pattern, const std::array<double, 4>& px,
                          std::array<double, 3>& out) {
      out[0] = structure_alpha(pattern, px);
    });
  } else {
    throw ConfigurationError("structure bank needs an adaptive family");
  }
  if (with_enhancer) {
    for (PatternName pattern : kPatterns)
      bank.g_tables.push_back(fill_table(
          pattern, RotationRole::kDeg0_180, 1,
          [](const std::array<double, 4>& px, std::array<double, 3>& out) {
            out[0] = structure_residual(px);
          }));
  }
  return bank;
}

}  // namespace lerf
