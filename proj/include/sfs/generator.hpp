#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sfs/taskmodel.hpp"

namespace sfs {

using Rng = std::mt19937_64;

struct GenConfig {
    int m = 8;
    int n = 10;
    double normalised_util = 0.5;  // fraction of platform capacity, in (0, 1]
    std::vector<Ticks> period_list{100, 200, 500, 1000, 2000, 5000};
    int min_layers = 4;
    int max_layers = 10;
    int min_layer_width = 2;
    int max_layer_width = 5;
    double edge_probability = 0.5;
    std::uint64_t seed = 1;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// UUniFast with rejection of any vector holding a value above `cap`.
/// Throws ConfigError if total > n * cap or after `max_attempts` rejections.
std::vector<double> uunifast_discard(int n, double total, double cap, Rng& rng,
                                     int max_attempts = 100000);

struct GeneratedDag {
    DagTask dag;
    int layers = 0;
};

/// Layered random DAG with W = round(period * util) ticks spread over the
/// nodes (every node at least one tick; when W is below the node count it is
/// raised to the node count). Deadline equals period.
GeneratedDag gen_dag(int task_id, double util, Ticks period, const GenConfig& cfg, Rng& rng);

std::vector<DagTask> gen_taskset(const GenConfig& cfg);

// Stream for one task set of a sweep: depends only on the inputs.
Rng make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0);

}  // namespace sfs
