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
#include <vector>

#include "gun/tensor.hpp"

namespace gun {

template <typename T>
struct ConvGrads {
    Tensor<T> input;          // same shape as the forward input
    Tensor<T> weights;        // [c_out, c_in, k, k], stored as a tensor
    std::vector<T> bias;      // c_out
};

/// Zero-padded cross-correlation plus bias. Spatial size is preserved
/// (pad = k/2). Parallel over (batch, output channel); every output cell is
/// accumulated in a fixed order, so results do not depend on thread count.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const ConvParams<T>& params);

/// Exact adjoints of conv2d_forward for input, weights and bias.
/// grad_bias[oc] is the plain sum of grad_out over batch and space.
template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const ConvParams<T>& params,
                             const Tensor<T>& grad_out);

/// Elementwise max(0, x).
template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input);

/// Passes grad_out where input > 0; subgradient at exactly 0 is 0.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_out);

/// Deterministic Gaussian weight init with variance 2/(c_in*k*k); biases
/// stay zero. Uses a self-contained Box-Muller generator so identical seeds
/// give bit-identical weights on every platform.
template <typename T>
void he_init(ConvParams<T>& params, uint64_t seed);

/// Zero-mean unit-variance Gaussian stream used by he_init.
class GaussianRng {
public:
    explicit GaussianRng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double next();

private:
    double next_uniform();  // in (0, 1)
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gun
