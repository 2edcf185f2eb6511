#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sfs/analysis.hpp"
#include "sfs/assign.hpp"
#include "sfs/generator.hpp"

namespace sfs {

struct SweepConfig {
    std::vector<int> m_list{8, 16};
    std::vector<int> n_list{10, 20};
    std::vector<double> util_grid;  // empty: 5% .. 100% in 5% steps
    int sets_per_point = 100;
    std::uint64_t seed = 1;
    TestMode mode = TestMode::Fast;
    std::vector<Algorithm> algorithms{Algorithm::Sfs, Algorithm::Federated};
    unsigned threads = 0;  // 0: hardware concurrency
    GenConfig generator;   // m, n, util and seed are overridden per set
};

struct SweepRow {
    int m = 0;
    int n = 0;
    double util = 0;
    Algorithm algorithm = Algorithm::Sfs;
    int accepted = 0;
    int total = 0;
    double mean_heavy = 0;  // heavy DAGs per set at this point

    double ratio() const { return total == 0 ? 0.0 : static_cast<double>(accepted) / total; }
};

std::vector<double> default_util_grid();

// "a:b:step" or a comma-separated list.
std::vector<double> parse_util_grid(const std::string& text);

// Generator seed of one task set; a pure function of its coordinates.
std::uint64_t set_seed(std::uint64_t seed, int m, int n, std::size_t util_index, int set_index);

GenConfig set_config(const SweepConfig& cfg, int m, int n, std::size_t util_index, int set_index);

/// Every algorithm sees the same task sets (paired). Rows come back in
/// (m, n, util, algorithm) order whatever the thread count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace sfs
