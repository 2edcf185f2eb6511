#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfs/analysis.hpp"
#include "sfs/flatten.hpp"
#include "sfs/taskmodel.hpp"

namespace sfs {

// One schedulable unit on a cluster or bin: a whole DAG or one split piece.
// On a bin the payload is a width-1 schedule, i.e. the DAG's nodes run
// sequentially in segment order.
struct GangPiece {
    int task_id = 0;
    int piece_index = 0;       // position in the DAG's piece chain
    SeqTask task;              // budget C, reported deadline D, period T
    Ticks release_offset = 0;  // from the DAG's arrival
    ClusterMode mode = ClusterMode::Flattened;
    // Flattened: the time-indexed payload, length == task.exec.
    // WorkConserving: no intervals; width and length carry the sizing.
    FlattenedSchedule payload;

    bool zero_laxity() const { return task.exec == task.deadline; }
};

struct Cluster {
    int id = 0;
    int width = 0;
    std::vector<GangPiece> members;
    bool closed = false;

    std::vector<SeqTask> seq_tasks() const;
    // Sum of member densities divided by width.
    Rational normalised_gross_utilisation() const;
};

struct Bin {
    int id = 0;
    std::vector<GangPiece> members;
    bool closed = false;

    std::vector<SeqTask> seq_tasks() const;
    Rational density() const;
};

enum class HostKind { Cluster, Bin };

struct PieceLocation {
    HostKind kind = HostKind::Cluster;
    int host_id = 0;
    int member_index = 0;
};

enum class FailureReason { NoClusters, DeadlineExhausted, SerialBoundExceedsDeadline, NoProcessors };

std::string to_string(FailureReason r);

struct Outcome {
    bool success = true;
    int task_id = -1;
    FailureReason reason = FailureReason::NoClusters;

    static Outcome ok() { return {}; }
    static Outcome failure(int task, FailureReason why) { return {false, task, why}; }
};

enum class Algorithm { Sfs, Federated };

std::string to_string(Algorithm a);

struct SystemPlan {
    Algorithm algorithm = Algorithm::Sfs;
    TestMode mode = TestMode::Fast;
    int m = 0;
    std::vector<DagTask> tasks;
    std::vector<Cluster> clusters;
    std::vector<Bin> bins;
    // Piece chain per DAG, in execution order.
    std::map<int, std::vector<PieceLocation>> placements;
    Outcome outcome;

    bool success() const { return outcome.success; }
    const GangPiece& piece(const PieceLocation& loc) const;
    int host_width(const PieceLocation& loc) const;
    int processors_used() const;
};

// Mutable state shared by the two assignment passes.
struct AssignState {
    SystemPlan plan;
    int empty_processors = 0;
    std::vector<std::size_t> skipped;  // indices into plan.tasks, pass-1 order
};

// Non-increasing min(D, T), ties by ascending task id.
std::vector<std::size_t> assignment_order(const std::vector<DagTask>& tasks);

AssignState pass1(const std::vector<DagTask>& tasks, int m, TestMode mode);
SystemPlan pass2(AssignState state);

// Each returns the failure outcome, or nullopt once the DAG is fully placed.
std::optional<Outcome> split_heavy(const DagTask& dag, AssignState& state);
std::optional<Outcome> split_light(const DagTask& dag, AssignState& state);

SystemPlan sfs_assign(const std::vector<DagTask>& tasks, int m, TestMode mode = TestMode::Fast);

/// Baseline: heavy DAGs get dedicated clusters sized by Graham's bound,
/// light DAGs go first-fit onto the remaining processors. No splitting.
SystemPlan federated_assign(const std::vector<DagTask>& tasks, int m,
                            TestMode mode = TestMode::Fast);

SystemPlan assign(Algorithm algo, const std::vector<DagTask>& tasks, int m,
                  TestMode mode = TestMode::Fast);

}  // namespace sfs
