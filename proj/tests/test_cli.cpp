// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "repcount/session_report.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("repcount_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
    const std::string cmd = std::string(REPCOUNT_CLI) + " " + args + " >>" + path("log.txt") + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const std::string& file, const std::string& text) {
    std::ofstream(file, std::ios::binary) << text;
}

const std::string& model() {
    static const std::string m = [] {
        const std::string p = path("model.json");
        REQUIRE(run("train --synthetic-per-class 600 --hidden 32,32 --epochs 25 --corpus-seed 11 --out " + p) == 0);
        return p;
    }();
    return m;
}

}  // namespace

TEST_CASE("train is reproducible and writes a curve") {
    const std::string a = path("a.json"), b = path("b.json"), curve = path("curve.csv");
    const std::string args = "train --synthetic-per-class 100 --hidden 8 --epochs 5 --seed 3 ";
    REQUIRE(run(args + "--out " + a + " --curve " + curve) == 0);
    REQUIRE(run(args + "--out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(curve).rfind("epoch,", 0) == 0);
}

TEST_CASE("simulate then analyze recovers the ground truth") {
    write(path("spec.json"), R"({"seed": 5, "persons": [
        {"exercise": "push-up", "full_cycles": 6, "partial_cycles": 2, "offset_x": -300},
        {"exercise": "squat", "full_cycles": 3, "offset_x": 300}]})");
    REQUIRE(run("simulate --spec " + path("spec.json") + " --out " + path("two.ndjson") + " --truth " +
                path("two.truth.json")) == 0);
    REQUIRE(run("analyze " + path("two.ndjson") + " --model " + model() + " --out-json " + path("two.report.json") +
                " --out-text " + path("two.report.txt") + " --out-csv " + path("two.events.csv")) == 0);
    const auto truth = nlohmann::json::parse(slurp(path("two.truth.json")));
    const repcount::SessionSummary s = repcount::parse_json_report(slurp(path("two.report.json")));
    REQUIRE(s.persons.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(s.persons[i].predicted_exercise == truth["persons"][i]["exercise"].get<std::string>());
        CHECK(s.persons[i].counts.correct == truth["persons"][i]["correct"].get<std::uint64_t>());
        CHECK(s.persons[i].counts.incorrect == truth["persons"][i]["incorrect"].get<std::uint64_t>());
    }
    CHECK(slurp(path("two.report.txt")) == repcount::render_text(s));
    CHECK(slurp(path("two.events.csv")) == repcount::render_events_csv(s));
}

TEST_CASE("stdin streaming matches file input, and inputs run in parallel") {
    REQUIRE(run("simulate --exercise pull-up --full 4 --partial 1 --noise 3 --gaps 0.05 --seed 8 --out " +
                path("p.ndjson")) == 0);
    REQUIRE(run("simulate --exercise squat --full 2 --seed 9 --out " + path("q.csv")) == 0);
    REQUIRE(run("analyze " + path("p.ndjson") + " --model " + model() + " --out-text " + path("p.txt")) == 0);
    REQUIRE(run("analyze - --model " + model() + " --out-text " + path("stdin.txt") + " < " + path("p.ndjson")) == 0);
    CHECK(slurp(path("p.txt")) == slurp(path("stdin.txt")));

    REQUIRE(run("analyze " + path("p.ndjson") + " " + path("q.csv") + " --jobs 2 --model " + model() +
                " --out-text " + path("many")) == 0);
    CHECK(slurp(path("many/p.txt")) == slurp(path("p.txt")));
    REQUIRE(run("analyze " + path("q.csv") + " --model " + model() + " --out-text " + path("q.txt")) == 0);
    CHECK(slurp(path("many/q.txt")) == slurp(path("q.txt")));
}

TEST_CASE("empty input gives an empty report") {
    write(path("empty.ndjson"), "");
    REQUIRE(run("analyze " + path("empty.ndjson") + " --model " + model() + " --out-text " + path("empty.txt")) == 0);
    CHECK(slurp(path("empty.txt")) == "Total Reps:  0\nCorrect Reps:  0\nIncorrect Reps:  0\n");
}

TEST_CASE("exit codes") {
    CHECK(run("analyze " + path("missing.ndjson") + " --model " + model()) == 2);
    write(path("broken.ndjson"), "{\"people\": [\n");
    CHECK(run("analyze " + path("broken.ndjson") + " --model " + model()) == 2);

    REQUIRE(run("simulate --exercise squat --full 1 --out " + path("one.ndjson")) == 0);
    write(path("corrupt.json"), slurp(model()).substr(0, 200));
    CHECK(run("analyze " + path("one.ndjson") + " --model " + path("corrupt.json")) == 3);
    CHECK(run("analyze " + path("one.ndjson") + " --model " + path("no-such-model.json")) == 3);

    CHECK(run("analyze " + path("one.ndjson") + " --model " + model() + " --fps 0") == 4);
    CHECK(run("analyze " + path("one.ndjson") + " --model " + model() + " --reject sometimes") == 4);
    write(path("only_squat.ini"), "[squat]\njoints = 9, 10, 11\nrom_low = 80\nrom_high = 170\nmotion = push\n");
    CHECK(run("analyze " + path("one.ndjson") + " --model " + model() + " --profiles " + path("only_squat.ini")) == 4);
    CHECK(run("analyze " + path("one.ndjson") + " --model " + model() + " --tolerance -3") == 4);

    REQUIRE(run("simulate --corpus-per-class 20 --classes squat --out " + path("sq.ndjson") + " --labels " +
                path("sq.csv")) == 0);
    CHECK(run("train --data " + path("sq.ndjson") + " --labels " + path("sq.csv") + " --out " + path("x.json")) == 5);
    CHECK(run("bench --model " + model() + " --repetitions 0") == 4);
}

TEST_CASE("calibrate adds thresholds; the reject option needs them") {
    const std::string bare = path("bare.json");
    REQUIRE(run("train --synthetic-per-class 100 --hidden 8 --epochs 5 --no-calibrate --out " + bare) == 0);
    CHECK(nlohmann::json::parse(slurp(bare)).dump().find("ci_low") == std::string::npos);
    REQUIRE(run("simulate --exercise push-up --full 2 --out " + path("c.ndjson")) == 0);
    CHECK(run("analyze " + path("c.ndjson") + " --model " + bare) == 3);
    CHECK(run("analyze " + path("c.ndjson") + " --model " + bare + " --reject off") == 0);
    REQUIRE(run("calibrate --model " + bare + " --synthetic-per-class 100 --corpus-seed 70 --out " +
                path("calibrated.json")) == 0);
    CHECK(slurp(path("calibrated.json")).find("ci_low") != std::string::npos);
    CHECK(run("analyze " + path("c.ndjson") + " --model " + path("calibrated.json")) == 0);
}

TEST_CASE("bench reports the median and the stages") {
    REQUIRE(run("bench --model " + model() + " --frames 600 --repetitions 3 --out-json " + path("bench.json")) == 0);
    const auto j = nlohmann::json::parse(slurp(path("bench.json")));
    CHECK(j["frames"] == 600);
    CHECK(j["run_fps"].size() == 3);
    CHECK(j["median_fps"].get<double>() > 0.0);
    CHECK(j["stage_ns_per_frame"].contains("conditioning"));
}
