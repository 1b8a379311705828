// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/hyperparam_map.hpp"

#include <algorithm>

#include "lerf/error.hpp"

namespace lerf {

HyperParamMap::HyperParamMap(int h, int w, KernelKind fam)
    : height(h), width(w), family(fam), channels(KernelFamily{fam}.hyperparam_count()) {
  if (h <= 0 || w <= 0) throw ShapeError("hyper-parameter map dimensions must be positive");
  if (channels == 0)
    throw ConfigurationError("hyper-parameter maps exist only for adaptive families");
  values.assign(static_cast<std::size_t>(h) * w * channels, 0.0);
}

HyperParamMap HyperParamMap::frozen(int h, int w, const GaussianParams& p) {
  HyperParamMap map(h, w, KernelKind::kAnisoGaussian);
  for (std::size_t i = 0; i < map.values.size(); i += 3) {
    map.values[i] = p.rho;
    map.values[i + 1] = p.inv_sigma_x;
    map.values[i + 2] = p.inv_sigma_y;
  }
  return map;
}

HyperParamMap HyperParamMap::frozen(int h, int w, double alpha) {
  HyperParamMap map(h, w, KernelKind::kAmplifiedLinear);
  std::fill(map.values.begin(), map.values.end(), alpha);
  return map;
}

}  // namespace lerf
