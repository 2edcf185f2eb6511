#include "sfs/taskmodel.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sfs {

DagIndex::DagIndex(const DagTask& dag)
{
    std::vector<NodeSpec> nodes = dag.nodes;
    std::sort(nodes.begin(), nodes.end(),
              [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
    for (const auto& n : nodes) {
        if (!index_.emplace(n.id, ids_.size()).second)
            throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
        ids_.push_back(n.id);
        wcets_.push_back(n.wcet);
    }
    succ_.resize(ids_.size());
    pred_.resize(ids_.size());
    for (const auto& e : dag.edges) {
        std::size_t u = index_of(e.from);
        std::size_t v = index_of(e.to);
        succ_[u].push_back(v);
        pred_[v].push_back(u);
    }
    for (auto& s : succ_) std::sort(s.begin(), s.end());
    for (auto& p : pred_) std::sort(p.begin(), p.end());

    // Kahn's algorithm, smallest index first so the order is deterministic.
    std::vector<std::size_t> indeg(ids_.size());
    for (std::size_t v = 0; v < ids_.size(); ++v) indeg[v] = pred_[v].size();
    std::set<std::size_t> ready;
    for (std::size_t v = 0; v < ids_.size(); ++v)
        if (indeg[v] == 0) ready.insert(v);
    while (!ready.empty()) {
        std::size_t u = *ready.begin();
        ready.erase(ready.begin());
        topo_.push_back(u);
        for (std::size_t v : succ_[u])
            if (--indeg[v] == 0) ready.insert(v);
    }
}

std::size_t DagIndex::index_of(int node_id) const
{
    auto it = index_.find(node_id);
    if (it == index_.end())
        throw std::invalid_argument("unknown node id " + std::to_string(node_id));
    return it->second;
}

std::vector<Violation> validate(const DagTask& dag)
{
    std::vector<Violation> out;
    auto add = [&out](std::string rule, std::string detail) {
        out.push_back({std::move(rule), std::move(detail)});
    };

    if (dag.period <= 0) add("period", "period must be positive");
    if (dag.deadline <= 0) add("deadline", "deadline must be positive");
    if (dag.deadline > dag.period)
        add("deadline", "deadline " + std::to_string(dag.deadline) + " exceeds period " +
                            std::to_string(dag.period));

    std::set<int> ids;
    for (const auto& n : dag.nodes) {
        if (!ids.insert(n.id).second) add("node_id", "duplicate node " + std::to_string(n.id));
        if (n.wcet < 0) add("wcet", "node " + std::to_string(n.id) + " has negative wcet");
    }
    bool structural = true;
    for (const auto& e : dag.edges) {
        if (!ids.count(e.from) || !ids.count(e.to)) {
            add("edge", "edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                            " references an unknown node");
            structural = false;
        }
    }
    if (!out.empty() && !structural) return out;
    if (ids.size() != dag.nodes.size()) return out;
    if (dag.nodes.size() < 2) {
        add("source", "a task needs distinct dummy source and sink nodes");
        return out;
    }

    DagIndex g(dag);
    if (!g.acyclic()) {
        std::vector<bool> sorted(g.size(), false);
        for (auto v : g.topological_order()) sorted[v] = true;
        for (std::size_t v = 0; v < g.size(); ++v)
            if (!sorted[v]) {
                add("acyclic", "node " + std::to_string(g.id(v)) + " lies on or behind a cycle");
                break;
            }
        return out;
    }

    std::vector<std::size_t> sources, sinks;
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (g.predecessors(v).empty()) sources.push_back(v);
        if (g.successors(v).empty()) sinks.push_back(v);
    }
    if (sources.size() != 1)
        add("source", "expected exactly one node without predecessors, found " +
                          std::to_string(sources.size()));
    if (sinks.size() != 1)
        add("sink", "expected exactly one node without successors, found " +
                        std::to_string(sinks.size()));
    for (auto s : sources)
        if (g.wcet(s) != 0) add("source", "source node " + std::to_string(g.id(s)) + " has nonzero wcet");
    for (auto s : sinks)
        if (g.wcet(s) != 0) add("sink", "sink node " + std::to_string(g.id(s)) + " has nonzero wcet");
    if (sources.size() != 1 || sinks.size() != 1) return out;

    const std::size_t src = sources.front();
    const std::size_t snk = sinks.front();
    for (std::size_t v = 0; v < g.size(); ++v)
        if (v != src && v != snk && g.wcet(v) < 1)
            add("wcet", "real node " + std::to_string(g.id(v)) + " needs wcet >= 1");

    auto reach = [&g](std::size_t from, bool forward) {
        std::vector<bool> seen(g.size(), false);
        std::deque<std::size_t> q{from};
        seen[from] = true;
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            for (auto v : forward ? g.successors(u) : g.predecessors(u))
                if (!seen[v]) {
                    seen[v] = true;
                    q.push_back(v);
                }
        }
        return seen;
    };
    auto from_src = reach(src, true);
    auto to_snk = reach(snk, false);
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!from_src[v]) add("reachability", "node " + std::to_string(g.id(v)) + " unreachable from source");
        if (!to_snk[v]) add("reachability", "node " + std::to_string(g.id(v)) + " does not reach sink");
    }
    return out;
}

int source_id(const DagTask& dag)
{
    DagIndex g(dag);
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.predecessors(v).empty()) return g.id(v);
    throw std::invalid_argument("task has no source");
}

int sink_id(const DagTask& dag)
{
    DagIndex g(dag);
    for (std::size_t v = 0; v < g.size(); ++v)
        if (g.successors(v).empty()) return g.id(v);
    throw std::invalid_argument("task has no sink");
}

bool is_dummy(const DagTask& dag, int node_id)
{
    return node_id == source_id(dag) || node_id == sink_id(dag);
}

Ticks volume(const DagTask& dag)
{
    return std::accumulate(dag.nodes.begin(), dag.nodes.end(), Ticks{0},
                           [](Ticks acc, const NodeSpec& n) { return acc + n.wcet; });
}

Ticks longest_path(const DagTask& dag)
{
    DagIndex g(dag);
    std::vector<Ticks> finish(g.size(), 0);
    Ticks best = 0;
    for (auto u : g.topological_order()) {
        Ticks start = 0;
        for (auto p : g.predecessors(u)) start = std::max(start, finish[p]);
        finish[u] = start + g.wcet(u);
        best = std::max(best, finish[u]);
    }
    return best;
}

double utilisation(const DagTask& dag)
{
    return static_cast<double>(volume(dag)) / static_cast<double>(dag.period);
}

bool is_heavy(const DagTask& dag) { return volume(dag) > dag.period; }

SegmentedDag segment(const DagTask& dag)
{
    DagIndex g(dag);
    std::vector<int> hops(g.size(), 0);
    for (auto u : g.topological_order())
        for (auto v : g.successors(u)) hops[v] = std::max(hops[v], hops[u] + 1);

    SegmentedDag out;
    out.task_id = dag.task_id;
    std::size_t src = g.size(), snk = g.size();
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (g.predecessors(v).empty()) src = v;
        if (g.successors(v).empty()) snk = v;
    }
    for (std::size_t v = 0; v < g.size(); ++v) {
        out.xi[g.id(v)] = hops[v];
        if (v == src || v == snk) continue;
        auto k = static_cast<std::size_t>(hops[v]);
        if (out.segments.size() < k) out.segments.resize(k);
        out.segments[k - 1].push_back(g.id(v));  // ascending: v iterates by id
    }
    return out;
}

SegmentedWork segment_work(const DagTask& dag, const SegmentedDag& sdag)
{
    std::map<int, Ticks> wcet;
    for (const auto& n : dag.nodes) wcet[n.id] = n.wcet;
    SegmentedWork out;
    out.reserve(sdag.segments.size());
    for (const auto& seg : sdag.segments) {
        std::vector<NodeWork> s;
        s.reserve(seg.size());
        for (int id : seg) s.push_back({id, wcet.at(id)});
        out.push_back(std::move(s));
    }
    return out;
}

SegmentedWork segment_work(const DagTask& dag) { return segment_work(dag, segment(dag)); }

Ticks total_work(const SegmentedWork& work)
{
    Ticks w = 0;
    for (const auto& seg : work)
        for (const auto& n : seg) w += n.wcet;
    return w;
}

Ticks serial_bound(const SegmentedWork& work)
{
    Ticks lb = 0;
    for (const auto& seg : work) {
        Ticks mx = 0;
        for (const auto& n : seg) mx = std::max(mx, n.wcet);
        lb += mx;
    }
    return lb;
}

}  // namespace sfs
