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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gun/conv.hpp"
#include "gun/layers.hpp"
#include "gun/tensor.hpp"

namespace gun {

/// Per-step target sizes of the gradual magnification. Steps 1..N-1 grow by
/// the rounded-down per-step increment; step N is pinned to the exact HR
/// size so the output always matches the target resolution.
struct ResolutionSchedule {
    int lr_h = 0, lr_w = 0;
    int hr_h = 0, hr_w = 0;
    std::vector<std::pair<int, int>> targets;  // (h, w) per step

    int steps() const { return static_cast<int>(targets.size()); }
};

ResolutionSchedule resolution_schedule(int lr_h, int lr_w, int hr_h, int hr_w, int steps);

/// Structure of the network: magnification factor, number of upsampling
/// steps, conv layers per step (depth-1 3x3 blocks then one 1x1 block) and
/// feature map count.
struct GunTopology {
    int scale = 2;   // in {2, 3, 4}
    int steps = -1;  // -1 picks the per-scale default (5/8/9)
    int depth = 4;
    int channels = 64;
    bool bn_on_input = true;
    BackwardResample backward_resample = BackwardResample::Adjoint;
    double bn_eps = 1e-5;
    double bn_momentum = 0.9;

    static int default_steps(int scale);
    int effective_steps() const { return steps >= 0 ? steps : default_steps(scale); }
    void validate() const;
};

/// One conv layer with its optional batch norm and activation.
template <typename T>
struct ConvBlock {
    ConvParams<T> conv;
    std::optional<BatchNormState<T>> bn;
    bool relu = false;
};

/// Mutable view of one named parameter (or running-stat) buffer.
template <typename T>
struct ParamView {
    std::string name;
    T* data = nullptr;
    size_t len = 0;
    bool decay = false;  // weight decay applies to conv weights only
};

template <typename T>
struct StateView {
    std::string name;
    T* data = nullptr;
    size_t len = 0;
    std::vector<uint32_t> dims;
};

/// The full network: input conv, N upsampling steps of conv stacks, output
/// conv. Upsampling layers are parameter-free; their targets come from the
/// resolution schedule passed to gun_forward.
template <typename T>
struct GunModel {
    GunTopology topology;
    ConvBlock<T> input;
    std::vector<std::vector<ConvBlock<T>>> step_blocks;  // [step][layer]
    ConvBlock<T> output;

    /// Learnable parameters in canonical (checkpoint) order.
    std::vector<ParamView<T>> parameters();
    /// Parameters plus BN running statistics, with shapes, for serialization.
    std::vector<StateView<T>> state();
};

/// Builds and He-initializes a model; deterministic for a fixed seed.
template <typename T>
GunModel<T> build_gun(const GunTopology& topology, uint64_t seed);

template <typename T>
struct BlockCache {
    Tensor<T> conv_in;
    BnCache<T> bn;
    Tensor<T> relu_in;
};

template <typename T>
struct ForwardCache {
    bool valid = false;
    ResolutionSchedule schedule;
    std::vector<std::pair<int, int>> upsample_src;  // per step
    BlockCache<T> input;
    std::vector<std::vector<BlockCache<T>>> step_blocks;
    BlockCache<T> output;
};

/// Multiply-accumulate counter filled from actual tensor shapes while the
/// forward pass runs.
struct ForwardStats {
    uint64_t conv_macs = 0;
};

/// Whole-network forward. The input spatial size must equal the schedule's
/// LR size; the output size equals the schedule's HR size exactly.
template <typename T>
Tensor<T> gun_forward(GunModel<T>& model, const Tensor<T>& input,
                      const ResolutionSchedule& schedule, Mode mode,
                      ForwardCache<T>* cache = nullptr, ForwardStats* stats = nullptr);

/// Gradients for every learnable parameter, mirroring the structure of the
/// model; flatten() is index-aligned with GunModel::parameters().
template <typename T>
struct BlockGrads {
    Tensor<T> weights;
    std::vector<T> bias, gamma, beta;
};

template <typename T>
struct GradientStore {
    BlockGrads<T> input;
    std::vector<std::vector<BlockGrads<T>>> step_blocks;
    BlockGrads<T> output;

    struct Flat {
        T* data;
        size_t len;
    };
    std::vector<Flat> flatten(const GunModel<T>& model);
};

template <typename T>
GradientStore<T> gun_backward(GunModel<T>& model, const ForwardCache<T>& cache,
                              const Tensor<T>& grad_out);

/// Eq.-style multiply-accumulate count of one forward pass: input conv at
/// LR resolution, each step's conv stack at that step's scheduled
/// resolution, output conv at HR resolution.
uint64_t flops_estimate(const GunTopology& topology, int lr_h, int lr_w, int hr_h, int hr_w);

/// Same layer list evaluated entirely at HR resolution, the cost model of a
/// network that magnifies first and then convolves.
uint64_t flops_estimate_direct(const GunTopology& topology, int lr_h, int lr_w, int hr_h,
                               int hr_w);

/// Binary little-endian checkpoint; round trips are bit-exact.
void save_checkpoint(GunModel<float>& model, const std::string& path);
GunModel<float> load_checkpoint(const std::string& path);

}  // namespace gun
