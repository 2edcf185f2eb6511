#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sfs/assign.hpp"
#include "sfs/generator.hpp"
#include "sfs/io.hpp"
#include "sfs/simulate.hpp"
#include "sfs/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

sfs::TestMode parse_mode(const std::string& s)
{
    if (s == "fast") return sfs::TestMode::Fast;
    if (s == "exact") return sfs::TestMode::Exact;
    throw UsageError("--mode must be fast or exact");
}

std::vector<sfs::Algorithm> parse_algos(const std::string& s)
{
    if (s == "sfs") return {sfs::Algorithm::Sfs};
    if (s == "fs") return {sfs::Algorithm::Federated};
    if (s == "both" || s == "sfs,fs") return {sfs::Algorithm::Sfs, sfs::Algorithm::Federated};
    throw UsageError("--algo must be sfs, fs or both");
}

void emit_json(const std::string& path, const nlohmann::json& j)
{
    if (path.empty() || path == "-")
        std::cout << j.dump(2) << '\n';
    else
        sfs::write_json_file(path, j);
}

template <typename F>
void with_output(const std::string& path, F&& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw sfs::FormatError("cannot write " + path);
    write(out);
}

void report_invalid(const std::vector<sfs::DagTask>& tasks)
{
    bool bad = false;
    for (const auto& t : tasks)
        for (const auto& v : sfs::validate(t)) {
            std::cerr << "task " << t.task_id << ": " << v.rule << ": " << v.detail << '\n';
            bad = true;
        }
    if (bad) throw sfs::FormatError("task set failed validation");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Scheduling DAG tasks on multiprocessors: segmented, flattened and split (sfs) "
                 "versus federated (fs) assignment"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    std::string out_path;
    std::string mode_name = "fast";

    // generate
    auto* gen = app.add_subcommand("generate", "Write a random task set as JSON");
    sfs::GenConfig gcfg;
    gen->add_option("--m", gcfg.m, "Processor count")->check(CLI::PositiveNumber);
    gen->add_option("--n", gcfg.n, "DAG count")->check(CLI::PositiveNumber);
    gen->add_option("--util", gcfg.normalised_util, "Normalised utilisation in (0, 1]");
    gen->add_option("--edge-prob", gcfg.edge_probability, "Edge probability between layers")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", seed, "RNG seed")->envname("SFS_SEED");
    gen->add_option("--out", out_path, "Output file (default stdout)");

    // check
    auto* chk = app.add_subcommand("check", "Run an assignment algorithm on a task set");
    std::string taskset_path;
    std::optional<int> check_m;
    std::string algo_name = "sfs";
    chk->add_option("taskset", taskset_path, "Task set JSON")->required();
    chk->add_option("--m", check_m, "Processor count (overrides the file)")->check(CLI::PositiveNumber);
    chk->add_option("--algo", algo_name, "sfs or fs");
    chk->add_option("--mode", mode_name, "Uniprocessor EDF test: fast or exact");
    chk->add_option("--out", out_path, "Plan JSON output (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate a plan and check the trace");
    std::string plan_path;
    std::optional<sfs::Ticks> horizon;
    std::string trace_csv;
    sim->add_option("plan", plan_path, "Plan JSON")->required();
    sim->add_option("--horizon", horizon, "Ticks to simulate (default one hyperperiod)")
        ->check(CLI::PositiveNumber);
    sim->add_option("--trace-csv", trace_csv, "Write per-tick ownership CSV");

    // sweep
    auto* swp = app.add_subcommand("sweep", "Acceptance ratios over a utilisation grid");
    sfs::SweepConfig scfg;
    std::string grid_text;
    std::string sweep_algos = "both";
    swp->add_option("--m", scfg.m_list, "Processor counts")->delimiter(',');
    swp->add_option("--n", scfg.n_list, "DAG counts")->delimiter(',');
    swp->add_option("--util-grid", grid_text, "lo:hi:step or comma list (default 0.05:1:0.05)");
    swp->add_option("--sets", scfg.sets_per_point, "Task sets per point")->check(CLI::PositiveNumber);
    swp->add_option("--seed", seed, "RNG seed")->envname("SFS_SEED");
    swp->add_option("--algo", sweep_algos, "sfs, fs or both");
    swp->add_option("--mode", mode_name, "Uniprocessor EDF test: fast or exact");
    swp->add_option("--threads", scfg.threads, "Worker threads (default: all cores)");
    swp->add_option("--out", out_path, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            gcfg.seed = seed;
            sfs::TaskSet set{gcfg.m, sfs::gen_taskset(gcfg)};
            emit_json(out_path, sfs::to_json(set));
            return kExitOk;
        }
        if (*chk) {
            auto set = sfs::taskset_from_json(sfs::read_json_file(taskset_path));
            const int m = check_m.value_or(set.m);
            if (m <= 0) throw UsageError("processor count missing: pass --m or set \"m\" in the file");
            report_invalid(set.tasks);
            const auto algos = parse_algos(algo_name);
            if (algos.size() != 1) throw UsageError("check takes a single --algo");
            const auto plan = sfs::assign(algos.front(), set.tasks, m, parse_mode(mode_name));
            emit_json(out_path, sfs::to_json(plan));
            if (plan.success()) {
                std::cerr << "schedulable (" << sfs::to_string(plan.algorithm) << ", "
                          << plan.processors_used() << " of " << m << " processors)\n";
                return kExitOk;
            }
            std::cerr << "unschedulable: task " << plan.outcome.task_id << " "
                      << sfs::to_string(plan.outcome.reason) << '\n';
            return kExitRejected;
        }
        if (*sim) {
            const auto plan = sfs::plan_from_json(sfs::read_json_file(plan_path));
            if (!plan.success()) {
                std::cerr << "plan is not schedulable; nothing to simulate\n";
                return kExitRejected;
            }
            report_invalid(plan.tasks);
            const auto h = horizon.value_or(sfs::hyperperiod(plan.tasks));
            const auto trace = sfs::simulate_plan(plan, h);
            if (!trace_csv.empty()) with_output(trace_csv, [&](std::ostream& o) { sfs::write_trace_csv(trace, o); });
            const auto violations = sfs::check_trace(trace, plan.tasks, plan);
            for (const auto& v : violations) std::cout << v.rule << ": " << v.detail << '\n';
            std::cout << trace.jobs.size() << " jobs over " << h << " ticks, " << violations.size()
                      << " violations\n";
            return violations.empty() ? kExitOk : kExitRejected;
        }
        if (*swp) {
            scfg.seed = seed;
            scfg.mode = parse_mode(mode_name);
            scfg.algorithms = parse_algos(sweep_algos);
            if (!grid_text.empty()) scfg.util_grid = sfs::parse_util_grid(grid_text);
            for (int m : scfg.m_list)
                if (m <= 0) throw UsageError("--m values must be positive");
            for (int n : scfg.n_list)
                if (n <= 0) throw UsageError("--n values must be positive");
            const auto rows = sfs::run_sweep(scfg);
            with_output(out_path, [&](std::ostream& o) { sfs::write_sweep_csv(rows, o); });
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const sfs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const sfs::FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
