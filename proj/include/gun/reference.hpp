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

#include <vector>

#include "gun/tensor.hpp"

// Deliberately naive serial implementations. They are the ground truth the
// optimized kernels are tested against and the baseline the benchmark
// compares with; they never run in the production pipeline.
namespace gun::ref {

/// Zero-padded cross-correlation, six nested loops, no tiling.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& in, const ConvParams<T>& params);

/// Direct (non-separable) bicubic resize: every output pixel evaluates the
/// full 4x4 tap window as an explicit double loop with clamped indices.
template <typename T>
std::vector<T> resize_brute(const std::vector<T>& src, int src_h, int src_w,
                            int dst_h, int dst_w);

}  // namespace gun::ref
