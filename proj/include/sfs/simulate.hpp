#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sfs/analysis.hpp"
#include "sfs/assign.hpp"
#include "sfs/taskmodel.hpp"

namespace sfs {

// Greedy work-conserving node scheduler: each tick, the ready nodes with the
// smallest ids run, at most `width` of them.
class ListScheduler {
public:
    ListScheduler(const DagTask& dag, int width);

    bool done() const { return unfinished_ == 0; }
    // Node ids chosen for the next tick; applies one tick of progress to each.
    std::vector<int> step();

private:
    DagIndex graph_;
    int width_;
    std::vector<Ticks> remaining_;
    std::vector<std::size_t> pending_preds_;
    std::size_t unfinished_ = 0;
};

// Makespan of ListScheduler on `width` processors.
Ticks list_schedule(const DagTask& dag, int width);

// Tick-level preemptive EDF with synchronous periodic release; true iff no
// deadline up to `horizon` is missed.
bool edf_brute_force(std::span<const SeqTask> tasks, Ticks horizon);

Ticks hyperperiod(const std::vector<DagTask>& tasks);

struct Owner {
    int task_id = -1;  // -1: idle
    int job = -1;
    int node_id = -1;

    bool idle() const { return task_id < 0; }
};

struct HostSlot {
    HostKind kind = HostKind::Cluster;
    int host_id = 0;
    int first_processor = 0;
    int width = 1;
};

struct JobRecord {
    int task_id = 0;
    int job = 0;
    Ticks release = 0;
    Ticks deadline = 0;      // absolute
    Ticks completion = -1;   // -1: not finished within the horizon
};

struct PieceJobRecord {
    int host = 0;  // index into SimTrace::hosts
    int task_id = 0;
    int piece_index = 0;
    int job = 0;
    Ticks release = 0;
    Ticks deadline = 0;  // absolute, as reported to EDF
    Ticks completion = -1;
};

struct SimTrace {
    Ticks horizon = 0;
    int processors = 0;
    std::vector<HostSlot> hosts;
    // ownership[p * horizon + t]
    std::vector<Owner> ownership;
    // running[h][t]: index into piece_jobs, or -1.
    std::vector<std::vector<int>> running;
    std::vector<JobRecord> jobs;
    std::vector<PieceJobRecord> piece_jobs;

    const Owner& owner(int processor, Ticks t) const
    {
        return ownership[static_cast<std::size_t>(processor) * static_cast<std::size_t>(horizon) +
                         static_cast<std::size_t>(t)];
    }
};

/// Execute a successful plan from a synchronous release over [0, horizon).
/// Each host runs uniprocessor EDF over its pieces (ties by task id, then
/// piece index); piece k of a DAG job is released at arrival + its offset.
SimTrace simulate_plan(const SystemPlan& plan, Ticks horizon);

/// Deadlines, exact node budgets, no self-parallelism, precedence, EDF order
/// and gang lockstep, all recomputed from the ownership grid.
std::vector<Violation> check_trace(const SimTrace& trace, const std::vector<DagTask>& tasks,
                                   const SystemPlan& plan);

// CSV rows: tick,processor,owner
void write_trace_csv(const SimTrace& trace, std::ostream& out);

}  // namespace sfs
