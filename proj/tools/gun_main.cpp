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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "gun/dataset.hpp"
#include "gun/errors.hpp"
#include "gun/image_io.hpp"
#include "gun/metrics.hpp"
#include "gun/network.hpp"
#include "gun/resample.hpp"
#include "gun/run_config.hpp"
#include "gun/threading.hpp"
#include "gun/train.hpp"

namespace fs = std::filesystem;
using namespace gun;

namespace {

std::vector<fs::path> list_pngs(const std::string& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: '" + dir + "'");
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (ext == ".png") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct LoadedImage {
    std::string name;
    PlaneImage y;
};

std::vector<LoadedImage> load_luminance_dir(const std::string& dir) {
    std::vector<LoadedImage> out;
    for (const auto& p : list_pngs(dir)) {
        try {
            out.push_back({p.filename().string(), luminance(load_png(p.string()))});
        } catch (const DataError& e) {
            std::cerr << "skipping unreadable image: " << e.what() << "\n";
        }
    }
    if (out.empty()) throw DataError("no usable PNG images in '" + dir + "'");
    return out;
}

// key=value overrides collected from flags, applied after the config file
struct Overrides {
    std::vector<std::pair<std::string, std::string>> kv;
    void set(const std::string& key, const std::string& value) { kv.emplace_back(key, value); }
};

RunConfig resolve_config(const std::string& config_path, const Overrides& overrides) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& [k, v] : overrides.kv) apply_config_entry(cfg, k, v);
    return cfg;
}

void echo_config(const RunConfig& cfg, const std::string& dump_path) {
    const std::string text = dump_config(cfg);
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) std::cout << "# " << line << "\n";
    if (!dump_path.empty()) {
        std::ofstream out(dump_path, std::ios::trunc);
        if (!out) throw DataError("cannot write config dump '" + dump_path + "'");
        out << text;
    }
}

std::pair<int, int> parse_size(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("size must be HxW, got '" + text + "'");
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

PlaneImage run_gun_plane(GunModel<float>& model, const PlaneImage& lr) {
    const int scale = model.topology.scale;
    const ResolutionSchedule sched =
        resolution_schedule(lr.height, lr.width, lr.height * scale, lr.width * scale,
                            model.topology.effective_steps());
    Tensor<float> in(1, 1, lr.height, lr.width);
    std::copy(lr.v.begin(), lr.v.end(), in.v.begin());
    const Tensor<float> out = gun_forward(model, in, sched, Mode::Infer);
    PlaneImage sr(out.w, out.h, lr.tag);
    for (size_t i = 0; i < sr.v.size(); ++i) sr.v[i] = std::clamp(out.v[i], 0.0f, 1.0f);
    return sr;
}

int cmd_train(const RunConfig& cfg) {
    if (cfg.train_dir.empty()) throw std::invalid_argument("train: --train-dir is required");
    const std::string ckpt_path =
        cfg.checkpoint.empty() ? "gun_x" + std::to_string(cfg.scale) + ".gunw" : cfg.checkpoint;

    const auto images = load_luminance_dir(cfg.train_dir);
    std::cout << "loaded " << images.size() << " training images\n";

    const int hr_patch = cfg.effective_patch() * cfg.scale;
    int omitted45 = 0;
    std::vector<PlaneImage> planes;
    for (const auto& img : images) {
        AugmentResult a = augment(img.y, hr_patch);
        omitted45 += a.rot45_omitted ? 1 : 0;
        for (auto& v : a.variants) planes.push_back(std::move(v));
    }
    if (omitted45 > 0)
        std::cerr << "45-degree variant omitted for " << omitted45 << " images (too small)\n";

    ExtractOptions eo;
    eo.scale = cfg.scale;
    eo.lr_patch = cfg.effective_patch();
    eo.stride = cfg.effective_stride();
    eo.max_count = cfg.max_patches;
    eo.seed = cfg.seed;
    eo.algd_on_hr = cfg.algd_on == "hr";
    const ExtractResult ex = extract_patches(planes, eo);
    if (ex.skipped_images)
        std::cerr << ex.skipped_images << " augmented planes were below one patch\n";
    std::cout << "extracted " << ex.pairs.size() << " patch pairs\n";

    const CurriculumPlan plan = build_curriculum(ex.pairs, cfg.lambdas, cfg.epochs_per_stage);
    for (const auto& s : plan.stages)
        std::cout << "stage lambda " << s.lambda << ": " << s.samples.size() << " samples\n";

    std::vector<ValImage> validation;
    if (!cfg.val_dir.empty())
        for (auto& img : load_luminance_dir(cfg.val_dir))
            validation.push_back({img.name, std::move(img.y)});

    GunModel<float> model = build_gun<float>(cfg.topology(), cfg.seed);
    OptimState optim = OptimState::make(model, cfg.lr, cfg.momentum, cfg.weight_decay);
    TrainConfig tc;
    tc.batch_size = cfg.batch_size;
    tc.lr = cfg.lr;
    tc.momentum = cfg.momentum;
    tc.weight_decay = cfg.weight_decay;
    tc.lr_decay_factor = cfg.lr_decay_factor;
    tc.lr_decay_stages = cfg.lr_decay_stages;
    tc.epochs_per_stage = cfg.epochs_per_stage;
    tc.seed = cfg.seed;
    tc.loss_log_path = cfg.log;

    const TrainReport report =
        train_curriculum(model, ex.pairs, plan, tc, optim, validation, cfg.effective_shave());
    for (size_t s = 0; s < report.stages.size(); ++s) {
        const auto& r = report.stages[s];
        std::cout << "stage " << s + 1 << " (lambda " << r.lambda << ", lr " << r.lr << ")";
        if (!r.epoch_mean_loss.empty())
            std::cout << " final loss " << r.epoch_mean_loss.back();
        if (!std::isnan(r.val_psnr)) std::cout << " val psnr " << r.val_psnr;
        std::cout << "\n";
    }

    save_checkpoint(model, ckpt_path);
    std::cout << "checkpoint written to " << ckpt_path << "\n";
    return 0;
}

int cmd_sr(const RunConfig& cfg, const std::string& input_path) {
    if (cfg.checkpoint.empty()) throw std::invalid_argument("sr: --checkpoint is required");
    if (cfg.out.empty()) throw std::invalid_argument("sr: --out is required");

    GunModel<float> model = load_checkpoint(cfg.checkpoint);
    if (model.topology.scale != cfg.scale)
        throw DataError("sr: checkpoint was trained for scale " +
                        std::to_string(model.topology.scale) + " but scale " +
                        std::to_string(cfg.scale) + " was requested");

    const Rgb8Image input = load_png(input_path);
    if (input.channels == 1) {
        const PlaneImage y = luminance(input);
        save_png(cfg.out, plane_to_gray(run_gun_plane(model, y)));
    } else {
        const YCbCrImage yc = rgb_to_ycbcr(input);
        const PlaneImage y = run_gun_plane(model, yc.y);
        const PlaneImage cb = resize_image(yc.cb, y.height, y.width, /*clip01=*/true);
        const PlaneImage cr = resize_image(yc.cr, y.height, y.width, /*clip01=*/true);
        save_png(cfg.out, ycbcr_to_rgb(y, cb, cr));
    }
    std::cout << "wrote " << cfg.out << " (" << input.width * cfg.scale << "x"
              << input.height * cfg.scale << ")\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg) {
    if (cfg.test_dir.empty()) throw std::invalid_argument("eval: --test-dir is required");
    std::optional<GunModel<float>> model;
    if (!cfg.checkpoint.empty()) {
        model = load_checkpoint(cfg.checkpoint);
        if (model->topology.scale != cfg.scale)
            throw DataError("eval: checkpoint scale " +
                            std::to_string(model->topology.scale) + " != requested scale " +
                            std::to_string(cfg.scale));
    }

    const auto images = load_luminance_dir(cfg.test_dir);
    const int shave = cfg.effective_shave();
    MetricsReport bicubic_report, gun_report;
    bicubic_report.shave = gun_report.shave = shave;

    for (const auto& img : images) {
        const PlaneImage lr = degrade(img.y, cfg.scale);
        const int ch = lr.height * cfg.scale, cw = lr.width * cfg.scale;
        PlaneImage ref(cw, ch, img.y.tag);
        for (int y = 0; y < ch; ++y)
            std::copy_n(img.y.v.data() + static_cast<size_t>(y) * img.y.width, cw,
                        ref.v.data() + static_cast<size_t>(y) * cw);

        const PlaneImage bi = bicubic_baseline(lr, cfg.scale);
        bicubic_report.rows.push_back(
            {img.name, "bicubic", cfg.scale, psnr(bi, ref, shave), ssim(bi, ref)});
        if (model) {
            const PlaneImage sr = run_gun_plane(*model, lr);
            gun_report.rows.push_back(
                {img.name, "gun", cfg.scale, psnr(sr, ref, shave), ssim(sr, ref)});
        }
    }

    std::string csv = bicubic_report.to_csv();
    if (model) {
        const std::string g = gun_report.to_csv();
        csv += g.substr(g.find('\n') + 1);  // drop the duplicate header
    }
    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(cfg.out, std::ios::trunc);
        if (!out) throw DataError("eval: cannot write '" + cfg.out + "'");
        out << csv;
        std::cout << "wrote " << cfg.out << "\n";
    }
    return 0;
}

int cmd_schedule(const std::string& lr_text, const std::string& hr_text, int steps) {
    const auto [lh, lw] = parse_size(lr_text);
    const auto [hh, hw] = parse_size(hr_text);
    const ResolutionSchedule s = resolution_schedule(lh, lw, hh, hw, steps);
    std::cout << "lr " << lh << "x" << lw << " -> hr " << hh << "x" << hw << " in "
              << s.steps() << " steps\n";
    for (int i = 0; i < s.steps(); ++i) {
        std::cout << "step " << i + 1 << ": " << s.targets[i].first << "x"
                  << s.targets[i].second;
        if (i + 1 == s.steps()) std::cout << " (fixed to hr)";
        std::cout << "\n";
    }
    return 0;
}

int cmd_flops(const RunConfig& cfg, const std::string& lr_text) {
    const auto [lh, lw] = parse_size(lr_text);
    const GunTopology topo = cfg.topology();
    const uint64_t gun = flops_estimate(topo, lh, lw, lh * cfg.scale, lw * cfg.scale);
    const uint64_t direct = flops_estimate_direct(topo, lh, lw, lh * cfg.scale, lw * cfg.scale);
    std::cout << "scale " << cfg.scale << ", lr " << lh << "x" << lw << ", steps "
              << topo.effective_steps() << ", depth " << topo.depth << ", channels "
              << topo.channels << "\n";
    std::cout << "gun MACs:    " << gun << "\n";
    std::cout << "direct MACs: " << direct << "\n";
    std::cout << "ratio: " << static_cast<double>(direct) / static_cast<double>(gun) << "x\n";
    return 0;
}

int cmd_curriculum_stats(const RunConfig& cfg) {
    if (cfg.train_dir.empty())
        throw std::invalid_argument("curriculum-stats: --train-dir is required");
    const auto images = load_luminance_dir(cfg.train_dir);
    const int hr_patch = cfg.effective_patch() * cfg.scale;
    std::vector<PlaneImage> planes;
    for (const auto& img : images) {
        AugmentResult a = augment(img.y, hr_patch);
        for (auto& v : a.variants) planes.push_back(std::move(v));
    }
    ExtractOptions eo;
    eo.scale = cfg.scale;
    eo.lr_patch = cfg.effective_patch();
    eo.stride = cfg.effective_stride();
    eo.algd_on_hr = cfg.algd_on == "hr";
    const std::vector<double> scores = patch_algd_scan(planes, eo);
    if (scores.empty()) throw DataError("curriculum-stats: no patches extracted");
    std::cout << curriculum_stats_table(scores, cfg.lambdas);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();

    CLI::App app{"gradual-upsampling single-image super-resolution"};
    app.require_subcommand(1);

    std::string config_path, dump_path;
    Overrides ov;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value configuration file");
        cmd->add_option("--dump-config", dump_path, "write the effective config here");
        cmd->add_option_function<std::string>(
            "--seed", [&](const std::string& v) { ov.set("seed", v); }, "RNG seed");
        cmd->add_option_function<std::string>(
               "--scale", [&](const std::string& v) { ov.set("scale", v); },
               "magnification factor")
            ->check(CLI::IsMember({"2", "3", "4"}));
        cmd->add_option_function<std::string>(
            "--checkpoint", [&](const std::string& v) { ov.set("checkpoint", v); },
            "model checkpoint path");
        cmd->add_option_function<std::string>(
            "--out", [&](const std::string& v) { ov.set("out", v); }, "output path");
    };

    CLI::App* train = app.add_subcommand("train", "gradual curriculum training");
    add_common(train);
    for (const char* key : {"train_dir", "val_dir", "lambdas", "epochs_per_stage",
                            "batch_size", "lr", "patch", "stride", "max_patches", "steps",
                            "depth", "channels", "log", "momentum", "weight_decay",
                            "lr_decay_stages", "bn_on_input", "backward_resample", "algd_on"}) {
        std::string flag = "--" + std::string(key);
        std::replace(flag.begin(), flag.end(), '_', '-');
        train->add_option_function<std::string>(
            flag, [&ov, key](const std::string& v) { ov.set(key, v); }, key);
    }

    CLI::App* sr = app.add_subcommand("sr", "super-resolve one PNG");
    add_common(sr);
    std::string sr_input;
    sr->add_option("input", sr_input, "input PNG")->required();

    CLI::App* eval = app.add_subcommand("eval", "degrade/reconstruct/measure a directory");
    add_common(eval);
    for (const char* key : {"test_dir", "shave"}) {
        std::string flag = "--" + std::string(key);
        std::replace(flag.begin(), flag.end(), '_', '-');
        eval->add_option_function<std::string>(
            flag, [&ov, key](const std::string& v) { ov.set(key, v); }, key);
    }

    CLI::App* schedule = app.add_subcommand("schedule", "print the per-step resolutions");
    std::string sched_lr, sched_hr;
    int sched_steps = 0;
    schedule->add_option("--lr", sched_lr, "LR size HxW")->required();
    schedule->add_option("--hr", sched_hr, "HR size HxW")->required();
    schedule->add_option("--steps", sched_steps, "number of steps")->required();

    CLI::App* flops = app.add_subcommand("flops", "cost model vs the direct-HR comparator");
    add_common(flops);
    std::string flops_lr = "64x64";
    flops->add_option("--lr", flops_lr, "LR size HxW");
    for (const char* key : {"steps", "depth", "channels"}) {
        flops->add_option_function<std::string>(
            "--" + std::string(key), [&ov, key](const std::string& v) { ov.set(key, v); }, key);
    }

    CLI::App* stats = app.add_subcommand("curriculum-stats", "per-lambda stage size table");
    add_common(stats);
    for (const char* key : {"train_dir", "patch", "stride", "lambdas", "algd_on"}) {
        std::string flag = "--" + std::string(key);
        std::replace(flag.begin(), flag.end(), '_', '-');
        stats->add_option_function<std::string>(
            flag, [&ov, key](const std::string& v) { ov.set(key, v); }, key);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = resolve_config(config_path, ov);
        if (app.got_subcommand(train) || app.got_subcommand(eval) ||
            app.got_subcommand(flops) || app.got_subcommand(stats) || app.got_subcommand(sr))
            echo_config(cfg, dump_path);

        if (app.got_subcommand(train)) return cmd_train(cfg);
        if (app.got_subcommand(sr)) return cmd_sr(cfg, sr_input);
        if (app.got_subcommand(eval)) return cmd_eval(cfg);
        if (app.got_subcommand(schedule)) return cmd_schedule(sched_lr, sched_hr, sched_steps);
        if (app.got_subcommand(flops)) return cmd_flops(cfg, flops_lr);
        if (app.got_subcommand(stats)) return cmd_curriculum_stats(cfg);
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
