#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sfs/taskmodel.hpp"

namespace sfs {

struct ScheduleInterval {
    int node_id = 0;
    int processor = 0;  // 0-based within the cluster
    Ticks start = 0;
    Ticks end = 0;

    Ticks duration() const { return end - start; }
    bool operator==(const ScheduleInterval&) const = default;
};

// A fixed offline schedule of one DAG (or rump DAG) over `width` processors,
// with times relative to the schedule start.
struct FlattenedSchedule {
    int width = 1;
    Ticks length = 0;
    std::vector<ScheduleInterval> intervals;

    // Intervals clipped to [0, cut).
    FlattenedSchedule prefix(Ticks cut) const;
    // Total time allotted to a node before `cut`.
    Ticks executed_before(int node_id, Ticks cut) const;

    bool operator==(const FlattenedSchedule&) const = default;
};

/// McNaughton's wraparound rule over one segment. Nodes are packed in the
/// order given (callers pass ascending node id). The length is
/// max(Cmax, ceil(W / width)). A node that would run past the end is split
/// into a tail on processor p and a head on processor p+1; the head always
/// ends no later than the tail starts, so the node never runs in parallel
/// with itself.
FlattenedSchedule flatten_segment(std::span<const NodeWork> segment, int width);

/// Concatenation of per-segment schedules in segment order.
FlattenedSchedule flatten_dag(const SegmentedWork& work, int width);

struct MaxFlattenResult {
    std::optional<FlattenedSchedule> schedule;
    Ticks serial_bound = 0;  // sum of per-segment maximum WCETs

    bool feasible() const { return schedule.has_value(); }
};

/// Smallest width whose flattened schedule meets `deadline`, searching
/// upward from ceil(W / min(D, T)). Infeasible when the serial lower bound
/// already exceeds the deadline.
MaxFlattenResult feasibly_max_flatten(const SegmentedWork& work, Ticks deadline, Ticks period);
MaxFlattenResult feasibly_max_flatten(const DagTask& dag);

// Graham's makespan bound for work-conserving scheduling: L + ceil((W-L)/width).
Ticks graham_makespan(Ticks volume, Ticks longest, int width);

// Smallest dedicated cluster size from Graham's bound, or nullopt if D <= L.
std::optional<int> graham_cluster_size(Ticks volume, Ticks longest, Ticks deadline);

enum class ClusterMode { Flattened, WorkConserving };

struct ClusterSizing {
    int width = 1;
    ClusterMode mode = ClusterMode::Flattened;
    // Gang budget on a dedicated cluster of `width` processors: the flattened
    // length or Graham's bound.
    Ticks budget = 0;
    // Present in Flattened mode.
    std::optional<FlattenedSchedule> schedule;
};

/// The smaller of the flattened and Graham cluster widths; ties go to the
/// flattened schedule. nullopt if neither yields a feasible cluster.
std::optional<ClusterSizing> cluster_size_requirements(const DagTask& dag);

/// Rump of `work` after the first `cut` ticks of `fs` have executed: every
/// node loses what `fs` gives it in [0, cut); finished nodes and empty
/// segments disappear. Throws std::invalid_argument unless 0 < cut < length.
SegmentedWork leftover_dag(const SegmentedWork& work, const FlattenedSchedule& fs, Ticks cut);

}  // namespace sfs
