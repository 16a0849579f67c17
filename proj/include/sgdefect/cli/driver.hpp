#pragma once

// Batch driver: runs the selected suites on a worker pool and writes one report per suite.
// Exit codes: 0 all cases pass, 1 some case fails, 2 usage or config error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <fstream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sgdefect/cli/report.hpp"
#include "sgdefect/cli/scenario.hpp"
#include "sgdefect/cli/suites.hpp"

namespace sgdefect::cli {

enum class Format { csv, json };

inline constexpr int exit_pass = 0;
inline constexpr int exit_fail = 1;
inline constexpr int exit_usage = 2;

inline void list_suites(std::ostream& os) {
    for (const auto& s : suite_catalogue()) os << s.name << ": " << s.description << " (verifies: " << s.anchor << ")\n";
}

inline const SuiteInfo& suite_info(const std::string& name) {
    for (const auto& s : suite_catalogue())
        if (name == s.name) return s;
    throw ConfigError("unknown suite '" + name + "'");
}

/// Runs one suite; an exception becomes a single failing case.
inline Report run_suite(const std::string& name, const ScenarioConfig& c, const Scenario& s) {
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
        r = suite_function(name)(c, s);
    } catch (const std::exception& e) {
        r = Report{};
        r.note(std::string("suite aborted: ") + e.what());
        r.add("exception", {}, 0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0);
    }
    const auto& info = suite_info(name);
    r.suite = info.name;
    r.anchor = info.anchor;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Runs every configured suite with `jobs` workers; reports come back in config order.
inline std::vector<Report> run_suites(const ScenarioConfig& c, const Scenario& s, unsigned jobs) {
    std::vector<Report> out(c.suites.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < out.size();) out[k] = run_suite(c.suites[k], c, s);
    };
    jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(std::max<std::size_t>(out.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

inline void write_report(const std::filesystem::path& dir, const Report& r, Format f) {
    const auto path = dir / (r.suite + (f == Format::csv ? ".csv" : ".json"));
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    if (f == Format::csv)
        write_csv(os, r);
    else
        write_json(os, r);
}

/// Wall times go to their own file so the reports stay byte-stable.
inline void write_timings(const std::filesystem::path& dir, const std::vector<Report>& rs) {
    std::ofstream os(dir / "timings.csv");
    os << "suite,seconds\n";
    for (const auto& r : rs) os << r.suite << ',' << detail::fmt(r.seconds) << '\n';
}

inline int run(const ScenarioConfig& c, const std::filesystem::path& out_dir, Format format, unsigned jobs,
               std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    Scenario s;
    try {
        s = build_scenario(c);
    } catch (const std::exception& e) {
        log << "error: cannot build the scenario: " << e.what() << '\n';
        return exit_usage;
    }
    const auto reports = run_suites(c, s, jobs);
    bool ok = true;
    for (const auto& r : reports) {
        write_report(out_dir, r, format);
        std::size_t failed = 0;
        for (const auto& k : r.cases) failed += !k.pass;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2fs", r.seconds);
        log << (failed ? "FAIL " : "pass ") << r.suite << "  " << r.cases.size() - failed << "/" << r.cases.size()
            << "  " << buf << '\n';
        for (const auto& k : r.cases)
            if (!k.pass)
                log << "  failing: " << k.key << " [" << detail::inputs_string(k) << "] gap " << detail::fmt(k.gap)
                    << " > tol " << detail::fmt(k.tolerance) << '\n';
        ok = ok && failed == 0;
    }
    write_timings(out_dir, reports);
    return ok ? exit_pass : exit_fail;
}

} // namespace sgdefect::cli
