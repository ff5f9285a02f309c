/*
 *   Copyright 2026 The prince authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Runs the prince binary as a subprocess.
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(PRINCE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Small corpus shared by the cases below.
fs::path corpus() {
    static const fs::path path = [] {
        const fs::path p = fs::temp_directory_path() / "prince_cli_corpus.tsv";
        const Run r = run("generate --out " + p.string() +
                          " --users 10 --items 80 --categories 5 --reviews 20"
                          " --min-actions 4 --max-actions 12 --rng-seed 3");
        REQUIRE(r.code == 0);
        return p;
    }();
    return path;
}

}  // namespace

TEST_CASE("generate writes the graph and its statistics") {
    const fs::path p = corpus();
    CHECK(fs::exists(p));
    const std::string stats = slurp(p.string() + ".stats");
    CHECK(stats.find("nodes.user: 10\n") != std::string::npos);
    CHECK(stats.find("nodes.review: 20\n") != std::string::npos);

    const fs::path again = fs::temp_directory_path() / "prince_cli_again.tsv";
    REQUIRE(run("generate --out " + again.string() +
                " --users 10 --items 80 --categories 5 --reviews 20"
                " --min-actions 4 --max-actions 12 --rng-seed 3")
                .code == 0);
    CHECK(slurp(again) == slurp(p));
    fs::remove(again);
    fs::remove(again.string() + ".stats");
}

TEST_CASE("recommend prints ranked items") {
    const Run r = run("recommend --graph " + corpus().string() + " --seed-user 0 --k 4");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    int rank = 0;
    double last = 2.0;
    while (std::getline(in, line)) {
        ++rank;
        int got = 0;
        unsigned long long item = 0;
        double score = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%d\t%llu\t%lf", &got, &item, &score) == 3);
        CHECK(got == rank);
        CHECK(score <= last);
        last = score;
    }
    CHECK(rank == 4);
}

TEST_CASE("explain prints a stable JSON record") {
    const std::string base = "explain --graph " + corpus().string() + " --seed-user 1 --no-timing";
    const Run a = run(base);
    REQUIRE(a.code == 0);
    CHECK(run(base).out == a.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["user"] == 1);
    CHECK(j["method"] == "prince");
    CHECK(j["score_mode"] == "precomputed");
    CHECK(j["wall_time_ms"] == 0.0);
    if (j["status"] == "found") {
        CHECK(j["size"] == j["actions"].size());
        CHECK(!j["replacement"].is_null());
        for (const auto& act : j["actions"]) CHECK(!act["edge_types"].empty());
    } else {
        CHECK(j["status"] == "no_counterfactual");
        CHECK(j["replacement"].is_null());
    }
    const auto dyn = nlohmann::json::parse(run(base + " --mode dynamic").out);
    CHECK(dyn["actions"] == j["actions"]);
    CHECK(dyn["score_mode"] == "dynamic");

    for (const char* m : {"hc", "sp", "oracle"}) {
        const Run r = run(base + " --method " + m);
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["method"] == m);
    }
}

TEST_CASE("benchmark writes a TSV report") {
    const fs::path out = fs::temp_directory_path() / "prince_cli_bench.tsv";
    const Run r = run("benchmark --graph " + corpus().string() +
                      " --ks 3,5 --methods prince,hc --modes precomputed --no-timing --jobs 2"
                      " --out " + out.string());
    REQUIRE(r.code == 0);
    const std::string tsv = slurp(out);
    fs::remove(out);
    CHECK(tsv.rfind("# schema_version\t1\nmethod\tk\tmode\t", 0) == 0);
    CHECK(tsv.find("prince\t3\tprecomputed\t10\t") != std::string::npos);
    CHECK(tsv.find("hc\t5\tna\t10\t") != std::string::npos);
}

TEST_CASE("bad input exits with 2") {
    CHECK(run("explain --graph /nonexistent.tsv --seed-user 0").code == 2);
    CHECK(run("explain --graph " + corpus().string() + " --seed-user 999999").code == 2);
    CHECK(run("explain --graph " + corpus().string() + " --seed-user 0 --method nope").code == 2);
    CHECK(run("explain --graph " + corpus().string() + " --seed-user 0 --k 1").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("generate --out /tmp/x.tsv --users 0").code == 2);
}
