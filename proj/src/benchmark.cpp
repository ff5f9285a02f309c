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

#include "prince/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "prince/baselines.hpp"
#include "prince/error.hpp"
#include "prince/oracle.hpp"

namespace prince {

namespace {

struct Slot {
    Method method;
    std::size_t k;
    std::optional<ScoreMode> mode;
};

std::vector<Slot> slots_for(const BenchmarkSpec& spec) {
    std::vector<Slot> out;
    for (Method m : spec.methods) {
        for (std::size_t k : spec.ks) {
            if (m == Method::Prince) {
                for (ScoreMode mode : spec.modes) out.push_back({m, k, mode});
            } else {
                out.push_back({m, k, std::nullopt});
            }
        }
    }
    return out;
}

InstanceResult run_one(const HinGraph& g, NodeId user, const Slot& slot,
                       const ExplainConfig& base) {
    ExplainConfig cfg = base;
    cfg.k = slot.k;
    if (slot.mode) cfg.score_mode = *slot.mode;
    InstanceResult r{slot.method, slot.k, slot.mode, user, {}, {}};
    try {
        switch (slot.method) {
            case Method::Prince: r.explanation = explain(g, user, cfg); break;
            case Method::HighestContributions: r.explanation = explain_hc(g, user, cfg); break;
            case Method::ShortestPaths: r.explanation = explain_sp(g, user, cfg); break;
            case Method::Oracle: r.explanation = brute_force_explain(g, user, cfg); break;
        }
    } catch (const Error& e) {
        r.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    return r;
}

// All ks of one (method, mode) share a single sweep. If the sweep throws
// (some k is infeasible) every k is rerun on its own so errors stay per k.
void run_group(const HinGraph& g, NodeId user, const std::vector<Slot>& slots,
               const std::vector<std::size_t>& members, const ExplainConfig& base,
               std::vector<InstanceResult>& out) {
    const Slot& first = slots[members.front()];
    ExplainConfig cfg = base;
    if (first.mode) cfg.score_mode = *first.mode;
    std::vector<std::size_t> ks;
    for (std::size_t s : members) ks.push_back(slots[s].k);
    std::vector<Explanation> swept;
    try {
        switch (first.method) {
            case Method::Prince: swept = explain_sweep(g, user, cfg, ks); break;
            case Method::HighestContributions: swept = explain_hc_sweep(g, user, cfg, ks); break;
            case Method::ShortestPaths: swept = explain_sp_sweep(g, user, cfg, ks); break;
            case Method::Oracle: break;
        }
    } catch (const Error&) {
        swept.clear();
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
        const Slot& slot = slots[members[j]];
        if (swept.size() == members.size()) {
            out[members[j]] = {slot.method, slot.k, slot.mode, user, std::move(swept[j]), {}};
        } else {
            out[members[j]] = run_one(g, user, slot, base);
        }
    }
}

}  // namespace

BenchmarkReport run_benchmark(const HinGraph& g, const BenchmarkSpec& spec) {
    spec.base.validate();
    std::vector<NodeId> users;
    for (NodeId u : g.users()) {
        if (spec.max_users != 0 && users.size() == spec.max_users) break;
        if (!user_actions(g, u).empty()) users.push_back(u);
    }
    const auto slots = slots_for(spec);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        auto same = [&](const std::vector<std::size_t>& grp) {
            return slots[grp.front()].method == slots[s].method &&
                   slots[grp.front()].mode == slots[s].mode;
        };
        auto it = std::find_if(groups.begin(), groups.end(), same);
        if (it == groups.end()) {
            groups.push_back({s});
        } else {
            it->push_back(s);
        }
    }

    // Each worker owns whole users; results land in fixed positions.
    std::vector<std::vector<InstanceResult>> per_user(users.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (std::size_t i = next++; i < users.size(); i = next++) {
            try {
                per_user[i].resize(slots.size());
                for (const auto& members : groups) {
                    run_group(g, users[i], slots, members, spec.base, per_user[i]);
                }
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(spec.jobs, users.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    BenchmarkReport report;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        BenchmarkRow row{slots[s].method, slots[s].k, slots[s].mode, 0, 0.0, 0.0, 0.0, 0.0};
        std::vector<double> sizes;
        std::size_t found = 0;
        double wall = 0.0;
        for (const auto& results : per_user) {
            const auto& r = results[s];
            if (!r.error.empty()) continue;
            sizes.push_back(static_cast<double>(r.explanation.sentinel_size()));
            if (r.explanation.status == ExplanationStatus::Found) ++found;
            wall += r.explanation.wall_time_ms;
        }
        row.instances = sizes.size();
        if (!sizes.empty()) {
            const double n = static_cast<double>(sizes.size());
            double sum = 0.0;
            for (double x : sizes) sum += x;
            row.mean_size = sum / n;
            double sq = 0.0;
            for (double x : sizes) sq += (x - row.mean_size) * (x - row.mean_size);
            row.std_size = sizes.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
            row.success_rate = static_cast<double>(found) / n;
            row.mean_wall_ms = wall / n;
        }
        report.rows.push_back(row);
    }
    for (auto& results : per_user) {
        for (auto& r : results) report.instances.push_back(std::move(r));
    }
    return report;
}

std::string format_tsv(const BenchmarkReport& report, bool with_timing) {
    std::ostringstream os;
    os << "# schema_version\t1\n";
    os << "method\tk\tmode\tinstances\tmean_size\tstd_size\tsuccess_rate\tmean_wall_ms\n";
    char buf[256];
    for (const auto& r : report.rows) {
        const std::string_view mode = r.mode ? to_string(*r.mode) : std::string_view("na");
        std::snprintf(buf, sizeof buf, "%s\t%zu\t%.*s\t%zu\t%.6f\t%.6f\t%.6f\t%.6f\n",
                      std::string(to_string(r.method)).c_str(), r.k,
                      static_cast<int>(mode.size()), mode.data(), r.instances, r.mean_size,
                      r.std_size, r.success_rate, with_timing ? r.mean_wall_ms : 0.0);
        os << buf;
    }
    return os.str();
}

}  // namespace prince
