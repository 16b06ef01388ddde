/* Copyright 2026 The GUN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <string>
#include <vector>

#include "gun/plane.hpp"

namespace gun {

/// Peak signal-to-noise ratio in dB on [0,1]-scaled planes after removing a
/// `shave`-pixel border on all sides. Identical inputs give +infinity.
double psnr(const PlaneImage& x, const PlaneImage& ref, int shave);

/// Mean local SSIM with the reference 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 1. Requires both planes >= 11x11.
double ssim(const PlaneImage& x, const PlaneImage& ref);

/// Plain bicubic magnification, clipped to [0,1]; the comparison baseline
/// for every evaluation.
PlaneImage bicubic_baseline(const PlaneImage& lr, int scale);

struct MetricsRow {
    std::string image, method;
    int scale = 0;
    double psnr = 0.0, ssim = 0.0;
};

/// Per-image rows plus their mean; to_csv emits
/// `image,method,scale,psnr,ssim` with a final mean row.
struct MetricsReport {
    std::vector<MetricsRow> rows;
    int shave = 0;

    double mean_psnr() const;
    double mean_ssim() const;
    std::string to_csv() const;
};

}  // namespace gun
