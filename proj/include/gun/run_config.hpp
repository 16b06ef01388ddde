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

#include "gun/network.hpp"

namespace gun {

/// Aggregated run settings. Every knob has a default, so `sr` and `eval`
/// work without a config file; -1/0/"auto" sentinels resolve per scale.
struct RunConfig {
    int scale = 2;
    int steps = -1;    // -1: per-scale default (5/8/9)
    int depth = 4;
    int channels = 64;
    int patch = 0;     // 0: per-scale default (20/16/12), LR grid
    int stride = 0;    // 0: patch / 2, LR grid
    int batch_size = 64;
    double lr = 1e-4;
    double momentum = 0.9;
    double weight_decay = 1e-4;
    std::vector<double> lambdas = {1.2, 1.0, 0.8, 0.5, 0.0};
    std::vector<int> lr_decay_stages = {3, 5};
    double lr_decay_factor = 0.1;
    int epochs_per_stage = 3;
    uint64_t seed = 0;
    bool bn_on_input = true;
    std::string backward_resample = "adjoint";  // adjoint | plain
    double bn_eps = 1e-5;
    double bn_momentum = 0.9;
    int shave = -1;  // -1: shave = scale
    std::string algd_on = "hr";  // hr | lr
    uint64_t max_patches = 200000;
    std::string train_dir, val_dir, test_dir;
    std::string checkpoint, out, log;

    int effective_patch() const;
    int effective_stride() const;
    int effective_shave() const { return shave >= 0 ? shave : scale; }
    GunTopology topology() const;
};

/// Flat `key = value` file with '#' comments; unknown keys are rejected.
RunConfig load_config(const std::string& path);

/// Applies one key/value pair (also used for flag overrides).
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Effective configuration in the same format load_config reads; doubles
/// are printed with round-trip precision so a dump reproduces the run.
std::string dump_config(const RunConfig& config);

}  // namespace gun
