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

#include <stdexcept>
#include <string>
#include <vector>

namespace gun {

enum class ChannelTag { Y, Cb, Cr, Gray };

/// One image channel, samples in [0, 1], row-major.
struct PlaneImage {
    int width = 0, height = 0;
    ChannelTag tag = ChannelTag::Gray;
    std::vector<float> v;

    PlaneImage() = default;
    PlaneImage(int w, int h, ChannelTag t = ChannelTag::Gray)
        : width(w), height(h), tag(t), v(static_cast<size_t>(w) * h, 0.0f) {
        if (w < 0 || h < 0) throw std::invalid_argument("plane: negative size");
    }

    float& at(int y, int x) { return v[static_cast<size_t>(y) * width + x]; }
    float at(int y, int x) const { return v[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return v.size(); }
};

}  // namespace gun
