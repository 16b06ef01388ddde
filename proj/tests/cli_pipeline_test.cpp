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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gun/image_io.hpp"
#include "image_gen.hpp"

namespace fs = std::filesystem;
using namespace gun;
using namespace gun::test;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(GUN_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct Workspace {
    fs::path root;
    Workspace() {
        root = fs::temp_directory_path() / "gun_cli_test";
        fs::remove_all(root);
        fs::create_directories(root / "train");
        fs::create_directories(root / "test");
        for (int i = 0; i < 3; ++i) {
            save_png((root / "train" / ("t" + std::to_string(i) + ".png")).string(),
                     plane_to_gray(synth_image(48, 48, 1000 + i)));
        }
        for (int i = 0; i < 2; ++i)
            save_png((root / "test" / ("v" + std::to_string(i) + ".png")).string(),
                     plane_to_gray(synth_image(32, 32, 2000 + i)));
    }
    ~Workspace() { fs::remove_all(root); }
    std::string p(const std::string& rel) const { return (root / rel).string(); }
};

const char* kTinyTrainArgs =
    " --scale 2 --steps 2 --depth 2 --channels 4 --patch 8 --stride 4"
    " --lambdas 1,0 --epochs-per-stage 1 --batch-size 16 --lr 2e-4"
    " --lr-decay-stages none --seed 42";

}  // namespace

TEST_CASE("every subcommand answers --help with exit 0") {
    for (const char* sub :
         {"", "train", "sr", "eval", "schedule", "flops", "curriculum-stats"})
        CHECK(run(std::string(sub) + " --help > /dev/null") == 0);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("schedule --lr 10x10 > /dev/null 2>&1") != 0);           // missing required
    CHECK(run("nonsense-command > /dev/null 2>&1") != 0);
    CHECK(run("train --train-dir / --scale 7 > /dev/null 2>&1") != 0);  // bad scale
}

TEST_CASE("schedule prints the worked example") {
    const int rc = run("schedule --lr 100x100 --hr 400x400 --steps 9 > schedule_out.txt");
    CHECK(rc == 0);
    const std::string text = slurp("schedule_out.txt");
    for (const char* needle : {"133x133", "166x166", "364x364", "step 9: 400x400"})
        CHECK(text.find(needle) != std::string::npos);
    fs::remove("schedule_out.txt");
}

TEST_CASE("full pipeline: train, sr, eval") {
    Workspace ws;
    const std::string ckpt = ws.p("model.gunw");

    SUBCASE("training writes a loadable checkpoint and a loss log") {
        const int rc = run("train --train-dir " + ws.p("train") + " --checkpoint " + ckpt +
                           " --log " + ws.p("loss.csv") + kTinyTrainArgs + " > /dev/null");
        REQUIRE(rc == 0);
        CHECK(fs::exists(ckpt));
        const std::string log = slurp(ws.p("loss.csv"));
        CHECK(log.find("stage,lambda,epoch,mean_loss,val_psnr") == 0);

        SUBCASE("sr magnifies a PNG to exactly scale x input") {
            save_png(ws.p("input.png"), plane_to_gray(synth_image(24, 24, 77)));
            const int rc2 = run("sr " + ws.p("input.png") + " --checkpoint " + ckpt +
                                " --scale 2 --out " + ws.p("sr.png") + " > /dev/null");
            REQUIRE(rc2 == 0);
            const Rgb8Image out = load_png(ws.p("sr.png"));
            CHECK(out.width == 48);
            CHECK(out.height == 48);
            CHECK(out.channels == 1);

            // scale mismatch is a data error (exit 2)
            CHECK(run("sr " + ws.p("input.png") + " --checkpoint " + ckpt +
                      " --scale 3 --out " + ws.p("bad.png") + " > /dev/null 2>&1") == 2);
        }

        SUBCASE("eval without a checkpoint reports the bicubic baseline only") {
            const int rc2 = run("eval --test-dir " + ws.p("test") + " --scale 2 --out " +
                                ws.p("eval.csv") + " > /dev/null");
            REQUIRE(rc2 == 0);
            const std::string csv = slurp(ws.p("eval.csv"));
            int lines = 0;
            for (char c : csv)
                if (c == '\n') ++lines;
            CHECK(lines == 4);  // header + 2 images + mean
            CHECK(csv.find("bicubic") != std::string::npos);
            CHECK(csv.find("gun") == std::string::npos);
        }

        SUBCASE("eval with a checkpoint adds gun rows") {
            const int rc2 = run("eval --test-dir " + ws.p("test") + " --scale 2" +
                                " --checkpoint " + ckpt + " --out " + ws.p("eval2.csv") +
                                " > /dev/null");
            REQUIRE(rc2 == 0);
            const std::string csv = slurp(ws.p("eval2.csv"));
            int lines = 0;
            for (char c : csv)
                if (c == '\n') ++lines;
            CHECK(lines == 7);  // header + 2x(2 images + mean)
            CHECK(csv.find(",gun,") != std::string::npos);
        }
    }

    SUBCASE("seed replay and config round trip reproduce the checkpoint bit-exactly") {
        const int rc1 = run("train --train-dir " + ws.p("train") + " --checkpoint " +
                            ws.p("a.gunw") + " --dump-config " + ws.p("effective.cfg") +
                            kTinyTrainArgs + " > /dev/null");
        REQUIRE(rc1 == 0);
        const int rc2 = run("train --config " + ws.p("effective.cfg") + " --checkpoint " +
                            ws.p("b.gunw") + " > /dev/null");
        REQUIRE(rc2 == 0);
        const std::string a = slurp(ws.p("a.gunw"));
        const std::string b = slurp(ws.p("b.gunw"));
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
}

TEST_CASE("curriculum-stats prints one row per lambda") {
    Workspace ws;
    const int rc = run("curriculum-stats --train-dir " + ws.p("train") +
                       " --scale 2 --patch 8 --stride 4 > stats_out.txt");
    REQUIRE(rc == 0);
    const std::string text = slurp("stats_out.txt");
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines >= 6);  // config echo + header + 5 default lambdas
    CHECK(text.find("lambda\tcount") != std::string::npos);
    fs::remove("stats_out.txt");
}

TEST_CASE("eval on an unreadable directory is a data error") {
    CHECK(run("eval --test-dir /no/such/dir --scale 2 > /dev/null 2>&1") == 2);
}
