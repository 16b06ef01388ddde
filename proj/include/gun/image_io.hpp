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

#include <cstdint>
#include <string>
#include <vector>

#include "gun/plane.hpp"

namespace gun {

/// Interleaved 8-bit image, 1 (gray) or 3 (RGB) channels.
struct Rgb8Image {
    int width = 0, height = 0, channels = 0;
    std::vector<uint8_t> px;

    Rgb8Image() = default;
    Rgb8Image(int w, int h, int ch)
        : width(w), height(h), channels(ch),
          px(static_cast<size_t>(w) * h * ch, 0) {}

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

Rgb8Image load_png(const std::string& path);
void save_png(const std::string& path, const Rgb8Image& image);

struct YCbCrImage {
    PlaneImage y, cb, cr;
};

/// BT.601 full-range transform on [0,1]-normalized samples.
YCbCrImage rgb_to_ycbcr(const Rgb8Image& rgb);
Rgb8Image ycbcr_to_rgb(const PlaneImage& y, const PlaneImage& cb, const PlaneImage& cr);

/// Luminance plane of any supported input: Y of an RGB image or the single
/// channel of a grayscale one.
PlaneImage luminance(const Rgb8Image& image);

/// 8-bit quantization of one plane (gray PNG output).
Rgb8Image plane_to_gray(const PlaneImage& plane);

}  // namespace gun
