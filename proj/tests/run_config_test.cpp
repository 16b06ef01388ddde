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

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "gun/run_config.hpp"

using namespace gun;

TEST_CASE("defaults resolve per scale") {
    RunConfig c;
    CHECK(c.effective_patch() == 20);
    CHECK(c.effective_stride() == 10);
    CHECK(c.effective_shave() == 2);
    CHECK(c.topology().effective_steps() == 5);

    c.scale = 4;
    CHECK(c.effective_patch() == 12);
    CHECK(c.effective_shave() == 4);
    CHECK(c.topology().effective_steps() == 9);

    c.patch = 9;
    c.stride = 3;
    c.shave = 1;
    CHECK(c.effective_patch() == 9);
    CHECK(c.effective_stride() == 3);
    CHECK(c.effective_shave() == 1);
}

TEST_CASE("config files parse values, comments and lists") {
    const char* path = "run_config_test.cfg";
    {
        std::ofstream f(path);
        f << "# a comment line\n";
        f << "scale = 3\n";
        f << "lr = 0.002   # trailing comment\n";
        f << "lambdas = 1.2, 1, 0.5\n";
        f << "bn_on_input = false\n";
        f << "lr_decay_stages = none\n";
        f << "train_dir = /tmp/somewhere\n";
    }
    const RunConfig c = load_config(path);
    CHECK(c.scale == 3);
    CHECK(c.lr == 0.002);
    REQUIRE(c.lambdas.size() == 3);
    CHECK(c.lambdas[2] == 0.5);
    CHECK_FALSE(c.bn_on_input);
    CHECK(c.lr_decay_stages.empty());
    CHECK(c.train_dir == "/tmp/somewhere");
    std::remove(path);
}

TEST_CASE("unknown keys and malformed values are rejected") {
    RunConfig c;
    CHECK_THROWS_AS(apply_config_entry(c, "no_such_key", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_entry(c, "scale", "two"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_entry(c, "bn_on_input", "maybe"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_entry(c, "backward_resample", "sideways"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_config_entry(c, "algd_on", "both"), std::invalid_argument);
}

TEST_CASE("dump/parse round trip reproduces every field exactly") {
    RunConfig c;
    c.scale = 3;
    c.lr = 0.000123456789012345;
    c.momentum = 0.875;
    c.lambdas = {1.1, 0.7, 0.0};
    c.lr_decay_stages = {2};
    c.seed = 987654321;
    c.bn_on_input = false;
    c.backward_resample = "plain";
    c.train_dir = "data/train";
    c.checkpoint = "model.gunw";

    const char* path = "run_config_roundtrip.cfg";
    {
        std::ofstream f(path);
        f << dump_config(c);
    }
    const RunConfig r = load_config(path);
    CHECK(r.scale == c.scale);
    CHECK(r.lr == c.lr);  // bit-exact via %.17g
    CHECK(r.momentum == c.momentum);
    CHECK(r.lambdas == c.lambdas);
    CHECK(r.lr_decay_stages == c.lr_decay_stages);
    CHECK(r.seed == c.seed);
    CHECK(r.bn_on_input == c.bn_on_input);
    CHECK(r.backward_resample == c.backward_resample);
    CHECK(r.train_dir == c.train_dir);
    CHECK(r.checkpoint == c.checkpoint);
    CHECK(dump_config(r) == dump_config(c));
    std::remove(path);
}
