#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sfs {

// All time quantities are integral ticks.
using Ticks = std::int64_t;

struct NodeSpec {
    int id = 0;
    Ticks wcet = 0;

    bool operator==(const NodeSpec&) const = default;
};

struct Edge {
    int from = 0;
    int to = 0;

    bool operator==(const Edge&) const = default;
};

// A sporadic DAG task with constrained deadline. The dummy source and sink
// (WCET 0) are stored explicitly as ordinary nodes.
struct DagTask {
    int task_id = 0;
    std::vector<NodeSpec> nodes;
    std::vector<Edge> edges;
    Ticks period = 0;
    Ticks deadline = 0;

    bool operator==(const DagTask&) const = default;
};

struct TaskSet {
    int m = 0;
    std::vector<DagTask> tasks;
};

struct Violation {
    std::string rule;    // e.g. "acyclic", "deadline", "source"
    std::string detail;
};

// Work of one node inside a segment. Rump DAGs carry reduced WCETs here.
struct NodeWork {
    int node_id = 0;
    Ticks wcet = 0;

    bool operator==(const NodeWork&) const = default;
};

// Ordered segments, each holding nodes in ascending id.
using SegmentedWork = std::vector<std::vector<NodeWork>>;

struct SegmentedDag {
    int task_id = 0;
    // segments[k-1] holds every real node with xi == k, ascending id.
    std::vector<std::vector<int>> segments;
    // Maximum hop distance from the dummy source, for every node.
    std::map<int, int> xi;

    bool operator==(const SegmentedDag&) const = default;
};

/// Adjacency over node indices of a DagTask, sorted by ascending node id.
/// Built once per task; assumes unique node ids and known edge endpoints.
class DagIndex {
public:
    explicit DagIndex(const DagTask& dag);

    std::size_t size() const { return ids_.size(); }
    int id(std::size_t idx) const { return ids_[idx]; }
    Ticks wcet(std::size_t idx) const { return wcets_[idx]; }
    std::size_t index_of(int node_id) const;

    const std::vector<std::size_t>& successors(std::size_t idx) const { return succ_[idx]; }
    const std::vector<std::size_t>& predecessors(std::size_t idx) const { return pred_[idx]; }

    // Empty if the graph has a cycle.
    const std::vector<std::size_t>& topological_order() const { return topo_; }
    bool acyclic() const { return topo_.size() == ids_.size(); }

private:
    std::vector<int> ids_;
    std::vector<Ticks> wcets_;
    std::map<int, std::size_t> index_;
    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::vector<std::size_t>> pred_;
    std::vector<std::size_t> topo_;
};

std::vector<Violation> validate(const DagTask& dag);

// Source: the single node without predecessors. Sink: the single node
// without successors. Both require a valid DAG.
int source_id(const DagTask& dag);
int sink_id(const DagTask& dag);
bool is_dummy(const DagTask& dag, int node_id);

Ticks volume(const DagTask& dag);
Ticks longest_path(const DagTask& dag);

// Utilisation and density as doubles, for reporting and heavy/light split.
// Heavy-ness is decided exactly in integers by is_heavy().
double utilisation(const DagTask& dag);
bool is_heavy(const DagTask& dag);

SegmentedDag segment(const DagTask& dag);

// Pair segments with node WCETs, the input shape for flattening.
SegmentedWork segment_work(const DagTask& dag, const SegmentedDag& sdag);
SegmentedWork segment_work(const DagTask& dag);

Ticks total_work(const SegmentedWork& work);
// Sum over segments of the largest node WCET: a lower bound on any
// flattened makespan.
Ticks serial_bound(const SegmentedWork& work);

}  // namespace sfs
