#include "sfs/generator.hpp"

#include <cmath>
#include <numeric>

namespace sfs {

Rng make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
    auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(a), hi(a), lo(b), hi(b), lo(c), hi(c)};
    return Rng(seq);
}

std::vector<double> uunifast_discard(int n, double total, double cap, Rng& rng, int max_attempts)
{
    if (n < 1) throw ConfigError("uunifast_discard: need at least one task");
    if (total < 0 || total > n * cap + 1e-12)
        throw ConfigError("uunifast_discard: total utilisation exceeds n * cap");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        double sum = total;
        for (int i = 1; i < n; ++i) {
            double next = sum * std::pow(unit(rng), 1.0 / (n - i));
            u[i - 1] = sum - next;
            sum = next;
        }
        u[n - 1] = sum;
        bool ok = true;
        for (double x : u)
            if (x > cap) ok = false;
        if (ok) return u;
    }
    throw ConfigError("uunifast_discard: gave up after too many discarded vectors");
}

GeneratedDag gen_dag(int task_id, double util, Ticks period, const GenConfig& cfg, Rng& rng)
{
    auto uniform_int = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::bernoulli_distribution coin(cfg.edge_probability);

    GeneratedDag out;
    out.layers = uniform_int(cfg.min_layers, cfg.max_layers);

    // layers[l] holds node ids; real nodes are numbered from 1 in layer order.
    std::vector<std::vector<int>> layers(static_cast<std::size_t>(out.layers));
    int next_id = 1;
    for (auto& layer : layers) {
        int width = uniform_int(cfg.min_layer_width, cfg.max_layer_width);
        for (int k = 0; k < width; ++k) layer.push_back(next_id++);
    }
    const int node_count = next_id - 1;
    const int source = 0;
    const int sink = next_id;

    DagTask& dag = out.dag;
    dag.task_id = task_id;
    dag.period = period;
    dag.deadline = period;

    std::vector<bool> has_pred(static_cast<std::size_t>(sink + 1), false);
    std::vector<bool> has_succ(static_cast<std::size_t>(sink + 1), false);
    auto connect = [&](int u, int v) {
        dag.edges.push_back({u, v});
        has_succ[u] = true;
        has_pred[v] = true;
    };

    for (std::size_t l = 0; l + 1 < layers.size(); ++l)
        for (int u : layers[l])
            for (int v : layers[l + 1])
                if (coin(rng)) connect(u, v);

    // Patch: every node below the first layer gets a predecessor in the layer
    // above, every node above the last layer a successor in the layer below.
    for (std::size_t l = 1; l < layers.size(); ++l)
        for (int v : layers[l])
            if (!has_pred[v]) {
                const auto& above = layers[l - 1];
                connect(above[uniform_int(0, static_cast<int>(above.size()) - 1)], v);
            }
    for (std::size_t l = 0; l + 1 < layers.size(); ++l)
        for (int u : layers[l])
            if (!has_succ[u]) {
                const auto& below = layers[l + 1];
                connect(u, below[uniform_int(0, static_cast<int>(below.size()) - 1)]);
            }
    for (int v : layers.front()) connect(source, v);
    for (int u : layers.back()) connect(u, sink);

    // Workload: one tick per node, the rest split by random weights, and the
    // rounding remainder handed out one tick at a time.
    Ticks total = std::llround(static_cast<double>(period) * util);
    total = std::max<Ticks>(total, node_count);
    std::vector<Ticks> wcet(static_cast<std::size_t>(node_count), 1);
    Ticks rest = total - node_count;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> weight(wcet.size());
    for (auto& w : weight) w = unit(rng);
    const double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
    Ticks handed = 0;
    for (std::size_t i = 0; i < wcet.size() && wsum > 0; ++i) {
        auto share = static_cast<Ticks>(std::floor(static_cast<double>(rest) * weight[i] / wsum));
        share = std::min(share, rest - handed);
        wcet[i] += share;
        handed += share;
    }
    for (; handed < rest; ++handed) wcet[static_cast<std::size_t>(uniform_int(0, node_count - 1))] += 1;

    dag.nodes.push_back({source, 0});
    for (int i = 0; i < node_count; ++i) dag.nodes.push_back({i + 1, wcet[static_cast<std::size_t>(i)]});
    dag.nodes.push_back({sink, 0});
    return out;
}

std::vector<DagTask> gen_taskset(const GenConfig& cfg)
{
    if (cfg.m < 1 || cfg.n < 1) throw ConfigError("gen_taskset: m and n must be positive");
    if (!(cfg.normalised_util > 0.0 && cfg.normalised_util <= 1.0))
        throw ConfigError("gen_taskset: normalised utilisation must lie in (0, 1]");
    if (cfg.period_list.empty()) throw ConfigError("gen_taskset: empty period list");

    Rng rng = make_rng(cfg.seed);
    auto utils = uunifast_discard(cfg.n, cfg.normalised_util * cfg.m, static_cast<double>(cfg.m), rng);
    std::uniform_int_distribution<std::size_t> pick(0, cfg.period_list.size() - 1);

    std::vector<DagTask> tasks;
    tasks.reserve(utils.size());
    for (std::size_t i = 0; i < utils.size(); ++i) {
        Ticks period = cfg.period_list[pick(rng)];
        tasks.push_back(gen_dag(static_cast<int>(i + 1), utils[i], period, cfg, rng).dag);
    }
    return tasks;
}

}  // namespace sfs
