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

#include "gun/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "gun/errors.hpp"
#include "gun/metrics.hpp"
#include "gun/resample.hpp"

namespace gun {

template <typename T>
std::pair<double, Tensor<T>> mse_loss(const Tensor<T>& pred, const Tensor<T>& target) {
    check_shape(pred.same_shape(target), "mse_loss: shape mismatch " + pred.shape_str() +
                                             " vs " + target.shape_str());
    const double inv_n = 1.0 / static_cast<double>(pred.n);
    double loss = 0.0;
    Tensor<T> grad(pred.n, pred.c, pred.h, pred.w);
    for (size_t i = 0; i < pred.v.size(); ++i) {
        const double d = static_cast<double>(pred.v[i]) - target.v[i];
        loss += d * d;
        grad.v[i] = static_cast<T>(2.0 * d * inv_n);
    }
    return {loss * inv_n, std::move(grad)};
}

OptimState OptimState::make(GunModel<float>& model, double lr, double momentum,
                            double weight_decay) {
    OptimState o;
    o.lr = lr;
    o.momentum = momentum;
    o.weight_decay = weight_decay;
    for (const auto& p : model.parameters()) o.velocity.emplace_back(p.len, 0.0f);
    return o;
}

void sgd_momentum_step(const std::vector<ParamView<float>>& params,
                       const std::vector<GradientStore<float>::Flat>& grads,
                       OptimState& optim) {
    check_shape(params.size() == grads.size() && params.size() == optim.velocity.size(),
                "sgd: parameter/gradient/velocity counts differ");
    for (size_t i = 0; i < params.size(); ++i) {
        check_shape(params[i].len == grads[i].len, "sgd: gradient shape mismatch at " +
                                                       params[i].name);
        float* p = params[i].data;
        const float* g = grads[i].data;
        float* v = optim.velocity[i].data();
        const float wd = params[i].decay ? static_cast<float>(optim.weight_decay) : 0.0f;
        const float mu = static_cast<float>(optim.momentum);
        const float lr = static_cast<float>(optim.lr);
        for (size_t s = 0; s < params[i].len; ++s) {
            v[s] = mu * v[s] - lr * (g[s] + wd * p[s]);
            p[s] += v[s];
        }
    }
    ++optim.step;
}

namespace {

// Batch tensors are filled in sample order; all pairs in a stage share one
// patch geometry, so the schedule is computed once.
void fill_batch(const std::vector<PatchPair>& pool, const std::vector<int>& order,
                size_t first, int batch, Tensor<float>& lr, Tensor<float>& hr) {
    for (int b = 0; b < batch; ++b) {
        const PatchPair& p = pool[order[first + b]];
        std::copy(p.lr.v.begin(), p.lr.v.end(), lr.plane(b, 0));
        std::copy(p.hr.v.begin(), p.hr.v.end(), hr.plane(b, 0));
    }
}

}  // namespace

StageReport train_stage(GunModel<float>& model, const std::vector<PatchPair>& pool,
                        const std::vector<int>& samples, int epochs, const TrainConfig& config,
                        OptimState& optim, std::mt19937_64& shuffle_rng) {
    if (samples.empty()) throw std::invalid_argument("train_stage: empty sample set");
    if (config.batch_size < 2)
        throw std::invalid_argument("train_stage: batch_size must be >= 2");
    if (static_cast<size_t>(config.batch_size) > samples.size())
        throw std::invalid_argument("train_stage: batch_size exceeds the sample count");

    const PatchPair& head = pool[samples.front()];
    const ResolutionSchedule sched =
        resolution_schedule(head.lr.height, head.lr.width, head.hr.height, head.hr.width,
                            model.topology.effective_steps());

    Tensor<float> lr_batch(config.batch_size, 1, head.lr.height, head.lr.width);
    Tensor<float> hr_batch(config.batch_size, 1, head.hr.height, head.hr.width);
    auto params = model.parameters();

    StageReport report;
    report.lr = optim.lr;
    std::vector<int> order(samples);
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        size_t batches = 0;
        for (size_t first = 0; first + config.batch_size <= order.size();
             first += config.batch_size) {
            fill_batch(pool, order, first, config.batch_size, lr_batch, hr_batch);
            ForwardCache<float> cache;
            Tensor<float> pred = gun_forward(model, lr_batch, sched, Mode::Train, &cache);
            auto [loss, grad] = mse_loss(pred, hr_batch);
            if (!std::isfinite(loss))
                throw NumericError("train_stage: non-finite loss at step " +
                                   std::to_string(optim.step + 1));
            GradientStore<float> grads = gun_backward(model, cache, grad);
            sgd_momentum_step(params, grads.flatten(model), optim);
            loss_sum += loss;
            ++batches;
        }
        report.epoch_mean_loss.push_back(batches ? loss_sum / static_cast<double>(batches)
                                                 : 0.0);
    }
    return report;
}

double validation_psnr(GunModel<float>& model, const std::vector<ValImage>& validation,
                       int shave) {
    if (validation.empty()) return std::numeric_limits<double>::quiet_NaN();
    const int scale = model.topology.scale;
    double sum = 0.0;
    for (const auto& img : validation) {
        PlaneImage lr = degrade(img.y, scale);
        // ground truth cropped the same way degrade cropped the input
        const int ch = lr.height * scale, cw = lr.width * scale;
        PlaneImage ref(cw, ch, img.y.tag);
        for (int y = 0; y < ch; ++y)
            std::copy_n(img.y.v.data() + static_cast<size_t>(y) * img.y.width, cw,
                        ref.v.data() + static_cast<size_t>(y) * cw);

        const ResolutionSchedule sched =
            resolution_schedule(lr.height, lr.width, ch, cw, model.topology.effective_steps());
        Tensor<float> in(1, 1, lr.height, lr.width);
        std::copy(lr.v.begin(), lr.v.end(), in.v.begin());
        Tensor<float> out = gun_forward(model, in, sched, Mode::Infer);
        PlaneImage sr(cw, ch, img.y.tag);
        for (size_t i = 0; i < sr.v.size(); ++i)
            sr.v[i] = std::clamp(out.v[i], 0.0f, 1.0f);
        sum += psnr(sr, ref, shave);
    }
    return sum / static_cast<double>(validation.size());
}

TrainReport train_curriculum(GunModel<float>& model, const std::vector<PatchPair>& pool,
                             const CurriculumPlan& plan, const TrainConfig& config,
                             OptimState& optim, const std::vector<ValImage>& validation,
                             int val_shave) {
    if (plan.stages.empty()) throw std::invalid_argument("train_curriculum: empty plan");
    const int shave = val_shave >= 0 ? val_shave : model.topology.scale;

    std::ofstream log;
    if (!config.loss_log_path.empty()) {
        log.open(config.loss_log_path, std::ios::trunc);
        if (!log) throw DataError("train: cannot open loss log '" + config.loss_log_path + "'");
        log << "stage,lambda,epoch,mean_loss,val_psnr\n";
    }

    std::mt19937_64 shuffle_rng(config.seed);
    TrainReport report;
    for (size_t si = 0; si < plan.stages.size(); ++si) {
        const CurriculumStage& stage = plan.stages[si];
        if (std::find(config.lr_decay_stages.begin(), config.lr_decay_stages.end(),
                      static_cast<int>(si) + 1) != config.lr_decay_stages.end())
            optim.lr *= config.lr_decay_factor;

        StageReport r = train_stage(model, pool, stage.samples, stage.epochs, config, optim,
                                    shuffle_rng);
        r.lambda = stage.lambda;
        r.val_psnr = validation_psnr(model, validation, shave);
        if (log.is_open()) {
            log.precision(9);
            for (size_t e = 0; e < r.epoch_mean_loss.size(); ++e) {
                log << si + 1 << "," << stage.lambda << "," << e + 1 << ",";
                log << std::scientific << r.epoch_mean_loss[e] << std::defaultfloat;
                log << ",";
                if (e + 1 == r.epoch_mean_loss.size() && !std::isnan(r.val_psnr))
                    log << r.val_psnr;
                log << "\n";
            }
        }
        report.stages.push_back(std::move(r));
    }
    return report;
}

template std::pair<double, Tensor<float>> mse_loss(const Tensor<float>&, const Tensor<float>&);
template std::pair<double, Tensor<double>> mse_loss(const Tensor<double>&, const Tensor<double>&);

}  // namespace gun
