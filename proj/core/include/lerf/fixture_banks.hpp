// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Analytically generated LUT banks. They need no training and are used as
/// test fixtures and as starting points for the CLI.

#pragma once

#include <array>

#include "lerf/lut.hpp"

namespace lerf {

/// Six f tables (S, C, X in both rotation roles) holding one constant:
/// (rho, 1/sx, 1/sy) = (0, 1, 1) for the Gaussian family, alpha = 1 for
/// amplified linear. No enhancer tables.
LutBank make_isotropic_bank(KernelKind family);

/// Edge-steered bank: each table estimates the local gradient from its four
/// pixels and narrows the kernel across the edge while widening it along
/// the edge. Optionally adds three unsharp-mask enhancer tables whose
/// residual is zero on flat input.
LutBank make_structure_bank(KernelKind family, bool with_enhancer);

/// The per-table rules behind make_structure_bank, evaluated on the four
/// pattern pixels in the table's own frame.
GaussianParams structure_gaussian(PatternName pattern, const std::array<double, 4>& px);
double structure_alpha(PatternName pattern, const std::array<double, 4>& px);
double structure_residual(const std::array<double, 4>& px);

}  // namespace lerf
