#include "sfs/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "sfs/io.hpp"

namespace sfs {

std::vector<double> default_util_grid()
{
    std::vector<double> g;
    for (int k = 1; k <= 20; ++k) g.push_back(k / 20.0);
    return g;
}

std::vector<double> parse_util_grid(const std::string& text)
{
    std::vector<double> g;
    if (text.find(':') != std::string::npos) {
        double lo = 0, hi = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0 || lo > hi)
            throw ConfigError("bad utilisation grid '" + text + "', expected lo:hi:step");
        const auto count = static_cast<int>((hi - lo) / step + 1e-9);
        for (int k = 0; k <= count; ++k) g.push_back(lo + k * step);
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            try {
                g.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ConfigError("bad utilisation '" + item + "'");
            }
        }
    }
    for (double u : g)
        if (!(u > 0.0 && u <= 1.0 + 1e-12)) throw ConfigError("utilisation grid values must lie in (0, 1]");
    if (g.empty()) throw ConfigError("empty utilisation grid");
    return g;
}

std::uint64_t set_seed(std::uint64_t seed, int m, int n, std::size_t util_index, int set_index)
{
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(m) << 32 | static_cast<std::uint32_t>(n), util_index,
                       static_cast<std::uint64_t>(set_index));
    return rng();
}

GenConfig set_config(const SweepConfig& cfg, int m, int n, std::size_t util_index, int set_index)
{
    const auto grid = cfg.util_grid.empty() ? default_util_grid() : cfg.util_grid;
    GenConfig g = cfg.generator;
    g.m = m;
    g.n = n;
    g.normalised_util = grid.at(util_index);
    g.seed = set_seed(cfg.seed, m, n, util_index, set_index);
    return g;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg)
{
    const auto grid = cfg.util_grid.empty() ? default_util_grid() : cfg.util_grid;
    struct Point {
        int m, n;
        std::size_t ui;
    };
    std::vector<Point> points;
    for (int m : cfg.m_list)
        for (int n : cfg.n_list)
            for (std::size_t ui = 0; ui < grid.size(); ++ui) points.push_back({m, n, ui});

    const std::size_t per_point = static_cast<std::size_t>(cfg.sets_per_point);
    const std::size_t algos = cfg.algorithms.size();
    const std::size_t items = points.size() * per_point;
    // accepted[item * algos + a], heavy[item]
    std::vector<char> accepted(items * algos, 0);
    std::vector<int> heavy(items, 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items; i = next++) {
            const Point& pt = points[i / per_point];
            const int set = static_cast<int>(i % per_point);
            const auto tasks = gen_taskset(set_config(cfg, pt.m, pt.n, pt.ui, set));
            for (const auto& t : tasks) heavy[i] += is_heavy(t) ? 1 : 0;
            for (std::size_t a = 0; a < algos; ++a)
                accepted[i * algos + a] = assign(cfg.algorithms[a], tasks, pt.m, cfg.mode).success() ? 1 : 0;
        }
    };
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < points.size(); ++p) {
        int heavy_total = 0;
        for (std::size_t s = 0; s < per_point; ++s) heavy_total += heavy[p * per_point + s];
        for (std::size_t a = 0; a < algos; ++a) {
            SweepRow r;
            r.m = points[p].m;
            r.n = points[p].n;
            r.util = grid[points[p].ui];
            r.algorithm = cfg.algorithms[a];
            r.total = cfg.sets_per_point;
            for (std::size_t s = 0; s < per_point; ++s) r.accepted += accepted[(p * per_point + s) * algos + a];
            r.mean_heavy = per_point ? static_cast<double>(heavy_total) / static_cast<double>(per_point) : 0.0;
            rows.push_back(r);
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out)
{
    out << "m,n,U,algorithm,accepted,total,ratio,mean_heavy,format_version\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.4f,%s,%d,%d,%.4f,%.3f,%d\n", r.m, r.n, r.util,
                      to_string(r.algorithm).c_str(), r.accepted, r.total, r.ratio(), r.mean_heavy,
                      kFormatVersion);
        out << buf;
    }
}

}  // namespace sfs
