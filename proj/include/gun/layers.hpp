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

#include "gun/resample.hpp"
#include "gun/tensor.hpp"

namespace gun {

enum class Mode { Train, Infer };

/// How gradients travel back through an upsampling layer: the exact adjoint
/// of the forward interpolation, or a plain bicubic downsample of the error.
enum class BackwardResample { Adjoint, Plain };

/// Per-channel batch normalization: learned gamma/beta plus running
/// statistics for inference.
template <typename T>
struct BatchNormState {
    std::vector<T> gamma, beta;
    std::vector<T> running_mean, running_var;
    double eps = 1e-5;
    double stat_momentum = 0.9;  // retention of the old running value

    BatchNormState() = default;
    explicit BatchNormState(int channels)
        : gamma(channels, T(1)), beta(channels, T(0)),
          running_mean(channels, T(0)), running_var(channels, T(1)) {}

    int channels() const { return static_cast<int>(gamma.size()); }
};

/// Saved by a train-mode forward; bn_backward rejects infer-mode caches.
template <typename T>
struct BnCache {
    bool train_mode = false;
    Tensor<T> xhat;
    std::vector<T> inv_std;  // 1/sqrt(var + eps) per channel
};

template <typename T>
struct BnGrads {
    Tensor<T> input;
    std::vector<T> gamma, beta;
};

/// Train mode normalizes with per-batch statistics over (n, h, w) and
/// updates the running values; infer mode uses the running values only.
/// Rejects train-mode batches with n*h*w == 1 (variance undefined).
template <typename T>
Tensor<T> bn_forward(const Tensor<T>& input, BatchNormState<T>& state, Mode mode,
                     BnCache<T>* cache = nullptr);

/// Exact analytic gradients through the batch-statistics dependence.
template <typename T>
BnGrads<T> bn_backward(const BatchNormState<T>& state, const BnCache<T>& cache,
                       const Tensor<T>& grad_out);

/// Bicubic upsampling of every (batch, channel) plane to the target size.
/// Gradual growth only: the target may not shrink either dimension.
template <typename T>
Tensor<T> upsample_forward(const Tensor<T>& input, int target_h, int target_w);

/// Backward pass of the upsampling layer: the exact adjoint by default or a
/// plain bicubic downsample of the error under the ablation mode.
template <typename T>
Tensor<T> upsample_backward(const Tensor<T>& grad_out, int src_h, int src_w,
                            BackwardResample mode = BackwardResample::Adjoint);

}  // namespace gun
