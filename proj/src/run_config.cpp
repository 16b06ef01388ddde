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

#include "gun/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gun/dataset.hpp"
#include "gun/errors.hpp"

namespace gun {

int RunConfig::effective_patch() const { return patch > 0 ? patch : default_lr_patch(scale); }

int RunConfig::effective_stride() const {
    return stride > 0 ? stride : std::max(1, effective_patch() / 2);
}

GunTopology RunConfig::topology() const {
    GunTopology t;
    t.scale = scale;
    t.steps = steps;
    t.depth = depth;
    t.channels = channels;
    t.bn_on_input = bn_on_input;
    t.bn_eps = bn_eps;
    t.bn_momentum = bn_momentum;
    if (backward_resample == "adjoint")
        t.backward_resample = BackwardResample::Adjoint;
    else if (backward_resample == "plain")
        t.backward_resample = BackwardResample::Plain;
    else
        throw std::invalid_argument("config: backward_resample must be 'adjoint' or 'plain'");
    return t;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
    }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad boolean for '" + key + "': " + v);
}

template <typename T, typename Fn>
std::vector<T> parse_list(const std::string& key, const std::string& v, Fn&& one) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(one(key, item));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
    return out;
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "scale") c.scale = parse_int(key, value);
    else if (key == "steps") c.steps = parse_int(key, value);
    else if (key == "depth") c.depth = parse_int(key, value);
    else if (key == "channels") c.channels = parse_int(key, value);
    else if (key == "patch") c.patch = parse_int(key, value);
    else if (key == "stride") c.stride = parse_int(key, value);
    else if (key == "batch_size") c.batch_size = parse_int(key, value);
    else if (key == "lr") c.lr = parse_double(key, value);
    else if (key == "momentum") c.momentum = parse_double(key, value);
    else if (key == "weight_decay") c.weight_decay = parse_double(key, value);
    else if (key == "lambdas") c.lambdas = parse_list<double>(key, value, parse_double);
    else if (key == "lr_decay_stages")
        c.lr_decay_stages = value == "none" ? std::vector<int>{}
                                            : parse_list<int>(key, value, parse_int);
    else if (key == "lr_decay_factor") c.lr_decay_factor = parse_double(key, value);
    else if (key == "epochs_per_stage") c.epochs_per_stage = parse_int(key, value);
    else if (key == "seed") c.seed = parse_u64(key, value);
    else if (key == "bn_on_input") c.bn_on_input = parse_bool(key, value);
    else if (key == "backward_resample") c.backward_resample = value;
    else if (key == "bn_eps") c.bn_eps = parse_double(key, value);
    else if (key == "bn_momentum") c.bn_momentum = parse_double(key, value);
    else if (key == "shave") c.shave = parse_int(key, value);
    else if (key == "algd_on") c.algd_on = value;
    else if (key == "max_patches") c.max_patches = parse_u64(key, value);
    else if (key == "train_dir") c.train_dir = value;
    else if (key == "val_dir") c.val_dir = value;
    else if (key == "test_dir") c.test_dir = value;
    else if (key == "checkpoint") c.checkpoint = value;
    else if (key == "out") c.out = value;
    else if (key == "log") c.log = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");

    if (key == "backward_resample" && value != "adjoint" && value != "plain")
        throw std::invalid_argument("config: backward_resample must be 'adjoint' or 'plain'");
    if (key == "algd_on" && value != "hr" && value != "lr")
        throw std::invalid_argument("config: algd_on must be 'hr' or 'lr'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("config: cannot open '" + path + "'");
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        apply_config_entry(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

std::string dump_config(const RunConfig& c) {
    std::ostringstream os;
    os << "scale = " << c.scale << "\n";
    os << "steps = " << c.steps << "\n";
    os << "depth = " << c.depth << "\n";
    os << "channels = " << c.channels << "\n";
    os << "patch = " << c.patch << "\n";
    os << "stride = " << c.stride << "\n";
    os << "batch_size = " << c.batch_size << "\n";
    os << "lr = " << fmt_double(c.lr) << "\n";
    os << "momentum = " << fmt_double(c.momentum) << "\n";
    os << "weight_decay = " << fmt_double(c.weight_decay) << "\n";
    os << "lambdas = ";
    for (size_t i = 0; i < c.lambdas.size(); ++i)
        os << (i ? "," : "") << fmt_double(c.lambdas[i]);
    os << "\n";
    os << "lr_decay_stages = ";
    if (c.lr_decay_stages.empty()) os << "none";
    for (size_t i = 0; i < c.lr_decay_stages.size(); ++i)
        os << (i ? "," : "") << c.lr_decay_stages[i];
    os << "\n";
    os << "lr_decay_factor = " << fmt_double(c.lr_decay_factor) << "\n";
    os << "epochs_per_stage = " << c.epochs_per_stage << "\n";
    os << "seed = " << c.seed << "\n";
    os << "bn_on_input = " << (c.bn_on_input ? "true" : "false") << "\n";
    os << "backward_resample = " << c.backward_resample << "\n";
    os << "bn_eps = " << fmt_double(c.bn_eps) << "\n";
    os << "bn_momentum = " << fmt_double(c.bn_momentum) << "\n";
    os << "shave = " << c.shave << "\n";
    os << "algd_on = " << c.algd_on << "\n";
    os << "max_patches = " << c.max_patches << "\n";
    if (!c.train_dir.empty()) os << "train_dir = " << c.train_dir << "\n";
    if (!c.val_dir.empty()) os << "val_dir = " << c.val_dir << "\n";
    if (!c.test_dir.empty()) os << "test_dir = " << c.test_dir << "\n";
    if (!c.checkpoint.empty()) os << "checkpoint = " << c.checkpoint << "\n";
    if (!c.out.empty()) os << "out = " << c.out << "\n";
    if (!c.log.empty()) os << "log = " << c.log << "\n";
    return os.str();
}

}  // namespace gun
