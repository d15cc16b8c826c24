#include <algorithm>
#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "report.hpp"
#include "siirv/error.hpp"

namespace {

using lab::Status;

Status run_one(const lab::Scenario& s, const std::string& out) {
    switch (s.kind) {
        case lab::Kind::Cover: return lab::run_cover(s, out);
        case lab::Kind::Learn: return lab::run_learn(s, out);
        case lab::Kind::Verify: return lab::run_verify(s, out);
        default: return lab::run_bench(s, out);
    }
}

// Exceptions to exit codes: configuration 2, assumptions 3, budgets and grids 4.
template <class F>
Status guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const siirv::ConfigError& e) {
        std::cerr << what << ": config error: " << e.what() << "\n";
        return lab::kConfig;
    } catch (const siirv::InvalidInput& e) {
        std::cerr << what << ": invalid input: " << e.what() << "\n";
        return lab::kConfig;
    } catch (const siirv::AssumptionViolation& e) {
        std::cerr << what << ": assumption violated: " << e.what() << "\n";
        return lab::kVerify;
    } catch (const siirv::BudgetExceeded& e) {
        std::cerr << what << ": budget exceeded: " << e.what() << "\n";
        return lab::kOverflow;
    } catch (const siirv::GridOverflow& e) {
        std::cerr << what << ": grid overflow: " << e.what() << "\n";
        return lab::kOverflow;
    } catch (const siirv::WindowOverflow& e) {
        std::cerr << what << ": window overflow: " << e.what() << "\n";
        return lab::kOverflow;
    } catch (const std::exception& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return lab::kFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covers, learners and validators for sums of integer random variables"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".";
    unsigned workers = 1;
    std::optional<std::uint64_t> seed_override;

    for (const char* kind : {"cover", "learn", "verify", "bench"}) {
        auto* sub = app.add_subcommand(kind, std::string("run ") + kind + " scenarios");
        sub->add_option("--scenario", scenario_path, "scenario JSON (object or array)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "scenarios run in parallel")->check(CLI::PositiveNumber);
        sub->add_option("--seed-override", seed_override, "replace every scenario seed");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lab::kConfig;
    }
    const std::string kind = app.get_subcommands().front()->get_name();

    std::vector<lab::Scenario> scenarios;
    const Status loaded = guarded(scenario_path, [&] {
        scenarios = lab::load_scenarios(scenario_path, seed_override, siirv::constants_from_env());
        for (const auto& s : scenarios)
            if (lab::kind_name(s.kind) != kind)
                throw siirv::ConfigError("scenario '" + s.name + "' has kind " + lab::kind_name(s.kind) + ", not " + kind);
        return lab::kOk;
    });
    if (loaded != lab::kOk) return loaded;

    std::vector<Status> status(scenarios.size(), lab::kOk);
    std::atomic<std::size_t> next{0};
    std::mutex log;
    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            status[i] = guarded(scenarios[i].name, [&] { return run_one(scenarios[i], out_dir); });
            std::lock_guard<std::mutex> lock(log);
            std::cout << scenarios[i].name << ": " << (status[i] == lab::kOk ? "ok" : "exit " + std::to_string(status[i]))
                      << "\n";
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(scenarios.size()));
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (Status s : status)
        if (s != lab::kOk) return s;
    return 0;
}
