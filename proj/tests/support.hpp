#pragma once

// Test-side helpers: DAG builders, hand-rolled random instances and oracles
// that recompute results without touching the library's algorithms.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "sfs/analysis.hpp"
#include "sfs/flatten.hpp"
#include "sfs/taskmodel.hpp"

namespace testing {

using sfs::Ticks;
using Rng = std::mt19937_64;

// Real nodes with the given WCETs and edges; a dummy source 0 feeds every
// node without predecessors and a dummy sink (max id + 1) drains every node
// without successors.
inline sfs::DagTask make_dag(const std::map<int, Ticks>& real, const std::vector<sfs::Edge>& edges,
                             Ticks period, Ticks deadline, int task_id = 1)
{
    sfs::DagTask d;
    d.task_id = task_id;
    d.period = period;
    d.deadline = deadline;
    const int sink = real.empty() ? 1 : real.rbegin()->first + 1;
    d.nodes.push_back({0, 0});
    for (const auto& [id, c] : real) d.nodes.push_back({id, c});
    d.nodes.push_back({sink, 0});
    std::set<int> has_pred, has_succ;
    for (const auto& e : edges) {
        d.edges.push_back(e);
        has_succ.insert(e.from);
        has_pred.insert(e.to);
    }
    for (const auto& [id, c] : real) {
        if (!has_pred.count(id)) d.edges.push_back({0, id});
        if (!has_succ.count(id)) d.edges.push_back({id, sink});
    }
    if (real.empty()) d.edges.push_back({0, sink});
    return d;
}

inline sfs::DagTask chain(const std::vector<Ticks>& wcets, Ticks period, Ticks deadline, int task_id = 1)
{
    std::map<int, Ticks> real;
    std::vector<sfs::Edge> edges;
    for (std::size_t i = 0; i < wcets.size(); ++i) {
        real[static_cast<int>(i) + 1] = wcets[i];
        if (i) edges.push_back({static_cast<int>(i), static_cast<int>(i) + 1});
    }
    return make_dag(real, edges, period, deadline, task_id);
}

// Independent nodes only: a single segment.
inline sfs::DagTask parallel(const std::vector<Ticks>& wcets, Ticks period, Ticks deadline, int task_id = 1)
{
    std::map<int, Ticks> real;
    for (std::size_t i = 0; i < wcets.size(); ++i) real[static_cast<int>(i) + 1] = wcets[i];
    return make_dag(real, {}, period, deadline, task_id);
}

// Two segments {1:1, 2:49} then {3:49, 4:1}, edges 1->3 and 2->4, so the
// longest path is 50 and the flattened width-2 length is 98.
inline sfs::DagTask two_segment_dag(Ticks deadline, Ticks period = 100)
{
    return make_dag({{1, 1}, {2, 49}, {3, 49}, {4, 1}}, {{1, 3}, {2, 4}}, period, deadline);
}

// Random DAG over n real nodes: each forward pair (i < j) gets an edge with
// probability p. Unlike the library generator there is no layering.
inline sfs::DagTask random_dag(Rng& rng, int n, double p, Ticks max_wcet, Ticks period, Ticks deadline,
                               int task_id = 1)
{
    std::uniform_int_distribution<Ticks> w(1, max_wcet);
    std::bernoulli_distribution coin(p);
    std::map<int, Ticks> real;
    std::vector<sfs::Edge> edges;
    for (int i = 1; i <= n; ++i) real[i] = w(rng);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (coin(rng)) edges.push_back({i, j});
    return make_dag(real, edges, period, deadline, task_id);
}

inline std::vector<sfs::NodeWork> random_segment(Rng& rng, int max_nodes, Ticks max_wcet)
{
    std::uniform_int_distribution<int> count(1, max_nodes);
    std::uniform_int_distribution<Ticks> w(1, max_wcet);
    std::vector<sfs::NodeWork> seg;
    const int n = count(rng);
    for (int i = 1; i <= n; ++i) seg.push_back({i, w(rng)});
    return seg;
}

// ---- oracles ----

// Longest path by exhaustive path enumeration (small DAGs only).
inline Ticks oracle_longest_path(const sfs::DagTask& d)
{
    std::map<int, Ticks> w;
    std::map<int, std::vector<int>> succ;
    std::set<int> has_pred;
    for (const auto& n : d.nodes) w[n.id] = n.wcet;
    for (const auto& e : d.edges) {
        succ[e.from].push_back(e.to);
        has_pred.insert(e.to);
    }
    Ticks best = 0;
    std::function<void(int, Ticks)> walk = [&](int v, Ticks acc) {
        acc += w[v];
        best = std::max(best, acc);
        for (int s : succ[v]) walk(s, acc);
    };
    for (const auto& n : d.nodes)
        if (!has_pred.count(n.id)) walk(n.id, 0);
    return best;
}

// Maximum hop count from the source, by repeated relaxation (Bellman-Ford
// style) rather than a topological pass.
inline std::map<int, int> oracle_max_hops(const sfs::DagTask& d)
{
    std::map<int, int> hop;
    for (const auto& n : d.nodes) hop[n.id] = 0;
    for (std::size_t round = 0; round < d.nodes.size(); ++round)
        for (const auto& e : d.edges) hop[e.to] = std::max(hop[e.to], hop[e.from] + 1);
    return hop;
}

// Per-tick grid of a flattened schedule: grid[p][t] = node id or 0.
// Returns false on any overlap on one processor.
inline bool paint(const sfs::FlattenedSchedule& fs, std::vector<std::vector<int>>& grid)
{
    grid.assign(static_cast<std::size_t>(fs.width), std::vector<int>(static_cast<std::size_t>(fs.length), 0));
    for (const auto& iv : fs.intervals) {
        if (iv.processor < 0 || iv.processor >= fs.width || iv.start < 0 || iv.end > fs.length ||
            iv.start >= iv.end)
            return false;
        for (Ticks t = iv.start; t < iv.end; ++t) {
            auto& cell = grid[static_cast<std::size_t>(iv.processor)][static_cast<std::size_t>(t)];
            if (cell != 0) return false;
            cell = iv.node_id;
        }
    }
    return true;
}

// Ticks each node receives in [0, cut), counted cell by cell.
inline std::map<int, Ticks> tick_count(const sfs::FlattenedSchedule& fs, Ticks cut)
{
    std::map<int, Ticks> got;
    std::vector<std::vector<int>> grid;
    paint(fs, grid);
    for (const auto& row : grid)
        for (Ticks t = 0; t < std::min(cut, fs.length); ++t)
            if (int id = row[static_cast<std::size_t>(t)]) ++got[id];
    return got;
}

// No node runs on two processors in one tick.
inline bool no_self_parallel(const sfs::FlattenedSchedule& fs)
{
    std::vector<std::vector<int>> grid;
    if (!paint(fs, grid)) return false;
    for (Ticks t = 0; t < fs.length; ++t) {
        std::set<int> seen;
        for (const auto& row : grid) {
            int id = row[static_cast<std::size_t>(t)];
            if (id && !seen.insert(id).second) return false;
        }
    }
    return true;
}

inline Ticks oracle_dbf(const sfs::SeqTask& s, Ticks t)
{
    Ticks demand = 0;
    for (Ticks release = 0; release + s.deadline <= t; release += s.period) demand += s.exec;
    return demand;
}

// Tick-level EDF over one hyperperiod with synchronous release; ties by
// lower index. Written independently of the library's simulator.
inline bool oracle_edf(const std::vector<sfs::SeqTask>& tasks)
{
    Ticks h = 1;
    for (const auto& s : tasks) h = std::lcm(h, s.period);
    struct Job {
        Ticks deadline, left;
        std::size_t task;
    };
    std::vector<Job> ready;
    for (Ticks t = 0; t < h; ++t) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (t % tasks[i].period == 0) ready.push_back({t + tasks[i].deadline, tasks[i].exec, i});
        for (const auto& j : ready)
            if (j.left > 0 && j.deadline <= t) return false;
        auto it = std::min_element(ready.begin(), ready.end(), [](const Job& a, const Job& b) {
            if ((a.left > 0) != (b.left > 0)) return a.left > 0;
            return a.deadline != b.deadline ? a.deadline < b.deadline : a.task < b.task;
        });
        if (it != ready.end() && it->left > 0) --it->left;
        std::erase_if(ready, [](const Job& j) { return j.left == 0; });
    }
    // With D <= T every job released before h is due by h.
    return ready.empty();
}

inline std::vector<sfs::SeqTask> random_seq_tasks(Rng& rng, int max_tasks, Ticks max_period)
{
    std::uniform_int_distribution<int> count(1, max_tasks);
    std::uniform_int_distribution<Ticks> period(2, max_period);
    std::vector<sfs::SeqTask> out;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const Ticks t = period(rng);
        const Ticks d = std::uniform_int_distribution<Ticks>(1, t)(rng);
        const Ticks c = std::uniform_int_distribution<Ticks>(1, d)(rng);
        out.push_back({c, d, t});
    }
    return out;
}

}  // namespace testing
