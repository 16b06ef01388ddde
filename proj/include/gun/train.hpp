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
#include <random>
#include <string>
#include <vector>

#include "gun/dataset.hpp"
#include "gun/network.hpp"

namespace gun {

/// Batch-averaged squared L2 loss: (1/N) * sum_n ||pred_n - target_n||^2,
/// with its gradient 2*(pred - target)/N.
template <typename T>
std::pair<double, Tensor<T>> mse_loss(const Tensor<T>& pred, const Tensor<T>& target);

/// Momentum SGD state; velocity buffers mirror the parameter list.
struct OptimState {
    double lr = 1e-4;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    uint64_t step = 0;
    std::vector<std::vector<float>> velocity;

    static OptimState make(GunModel<float>& model, double lr, double momentum,
                           double weight_decay);
};

/// v <- momentum*v - lr*(g + wd*p); p <- p + v. Weight decay applies only
/// to views flagged decay (conv weights), never biases or BN gamma/beta.
void sgd_momentum_step(const std::vector<ParamView<float>>& params,
                       const std::vector<GradientStore<float>::Flat>& grads, OptimState& optim);

struct TrainConfig {
    int batch_size = 64;
    double lr = 1e-4;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    double lr_decay_factor = 0.1;
    std::vector<int> lr_decay_stages = {3, 5};  // 1-based stages whose entry decays lr
    int epochs_per_stage = 3;
    uint64_t seed = 0;
    std::string loss_log_path;  // optional CSV: stage,lambda,epoch,mean_loss,val_psnr
};

struct StageReport {
    double lambda = 0.0;
    double lr = 0.0;
    std::vector<double> epoch_mean_loss;
    double val_psnr = 0.0;  // NaN when no validation set was supplied
};

struct TrainReport {
    std::vector<StageReport> stages;
};

/// One HR validation image; PSNR is measured on the Y plane against the
/// network reconstruction of its bicubic-degraded LR version.
struct ValImage {
    std::string name;
    PlaneImage y;
};

/// Runs `epochs` seeded-shuffle epochs of momentum SGD over the given
/// sample subset; the incomplete final batch of each epoch is dropped.
/// Throws NumericError naming the iteration if the loss goes non-finite.
StageReport train_stage(GunModel<float>& model, const std::vector<PatchPair>& pool,
                        const std::vector<int>& samples, int epochs, const TrainConfig& config,
                        OptimState& optim, std::mt19937_64& shuffle_rng);

/// Executes the curriculum stages in order on the same model, decaying the
/// learning rate at the configured stage entries, and (optionally)
/// measuring validation PSNR with inference-mode BN after each stage.
TrainReport train_curriculum(GunModel<float>& model, const std::vector<PatchPair>& pool,
                             const CurriculumPlan& plan, const TrainConfig& config,
                             OptimState& optim, const std::vector<ValImage>& validation = {},
                             int val_shave = -1);

/// Validation-set mean Y-PSNR of the model (inference mode).
double validation_psnr(GunModel<float>& model, const std::vector<ValImage>& validation,
                       int shave);

}  // namespace gun
