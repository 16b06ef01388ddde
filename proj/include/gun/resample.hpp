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

#include <array>
#include <vector>

#include "gun/plane.hpp"

namespace gun {

/// Keys cubic convolution kernel with a = -0.5, the standard "bicubic".
/// keys_kernel(0) == 1, keys_kernel(1) == keys_kernel(2) == 0.
double keys_kernel(double t);

/// Tap table for a 1-D bicubic resize along one axis. Coordinates are
/// half-pixel centered: src = (dst + 0.5) * (src_len / dst_len) - 0.5.
/// Out-of-range taps are clamped to the border sample (replicate policy);
/// the four weights of every output index sum to 1.
struct AxisPlan {
    int src_len = 0, dst_len = 0;
    std::vector<std::array<int, 4>> idx;
    std::vector<std::array<double, 4>> w;
};

AxisPlan make_axis_plan(int src_len, int dst_len);

/// Separable 2-D resize plan: rows maps height, cols maps width.
struct ResamplePlan {
    AxisPlan rows, cols;
    static ResamplePlan make(int src_h, int src_w, int dst_h, int dst_w);
};

/// Raw-buffer kernels behind bicubic_resize / bicubic_adjoint; dst must be
/// sized for the plan. Used directly by the network's upsampling layer.
template <typename T>
void resize_plane(const T* src, int src_h, int src_w, T* dst, const ResamplePlan& plan);
template <typename T>
void adjoint_plane(const T* grad, int src_h, int src_w, T* out, const ResamplePlan& plan);

/// Separable bicubic resize of one plane, width pass first. Output values
/// are not clipped. Rejects empty targets.
template <typename T>
std::vector<T> bicubic_resize(const std::vector<T>& src, int src_h, int src_w,
                              int dst_h, int dst_w);

/// Exact transpose of the linear map realized by bicubic_resize for the
/// same (src, dst) size pair: every source cell accumulates the tap-weighted
/// contributions of all destination cells it fed.
template <typename T>
std::vector<T> bicubic_adjoint(const std::vector<T>& grad, int dst_h, int dst_w,
                               int src_h, int src_w);

/// Bicubic downsample of an HR image plane by an integer factor >= 2.
/// The source is first cropped (top-left anchored) to a multiple of the
/// factor and the result is clipped to [0, 1].
PlaneImage degrade(const PlaneImage& hr, int scale);

PlaneImage resize_image(const PlaneImage& src, int dst_h, int dst_w, bool clip01);

}  // namespace gun
