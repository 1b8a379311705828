// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Fidelity metrics (luma PSNR, masked colour PSNR, SSIM) and the bicubic
/// degradation used to synthesize low-resolution inputs.

#pragma once

#include "lerf/geometry.hpp"
#include "lerf/image.hpp"

namespace lerf {

/// Reported instead of +inf for error-free pairs.
inline constexpr double kPsnrCap = 100.0;

/// 10 log10(1 / mse) in the [0,1] domain, capped at kPsnrCap.
double psnr_from_mse(double mse) noexcept;

/// PSNR of the luma planes after cropping `shave` pixels from every border.
double psnr_y(const ImageBuffer& a, const ImageBuffer& b, int shave = 0);

/// PSNR with the squared error pooled over all channels of the pixels set
/// in the mask. Throws EvaluationError for an empty mask.
double mpsnr(const ImageBuffer& a, const ImageBuffer& b, const ValidMask& mask);

/// Single-scale SSIM on luma: 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 1, averaged over all window
/// positions fully inside the image. Both sides must be >= 11 pixels.
/// With a mask only windows made entirely of valid pixels count.
double ssim(const ImageBuffer& a, const ImageBuffer& b, const ValidMask* mask = nullptr);

/// Bicubic (Keys, a = -0.5) downscaling by factors in (0, 1]. With
/// antialias the kernel is stretched by 1/r (the MATLAB imresize
/// convention); without it the plain 4x4 support is sampled. Output is
/// floor(src * r) per axis.
ImageBuffer degrade_bicubic(const ImageBuffer& hr, double r_h, double r_w,
                            bool antialias = true);

}  // namespace lerf
