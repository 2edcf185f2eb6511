#include "sfs/assign.hpp"

#include <algorithm>
#include <stdexcept>

namespace sfs {

std::string to_string(FailureReason r)
{
    switch (r) {
    case FailureReason::NoClusters: return "NoClusters";
    case FailureReason::DeadlineExhausted: return "DeadlineExhausted";
    case FailureReason::SerialBoundExceedsDeadline: return "SerialBoundExceedsDeadline";
    case FailureReason::NoProcessors: return "NoProcessors";
    }
    return "?";
}

std::string to_string(Algorithm a) { return a == Algorithm::Sfs ? "sfs" : "fs"; }

namespace {

std::vector<SeqTask> seq_tasks_of(const std::vector<GangPiece>& members)
{
    std::vector<SeqTask> out;
    out.reserve(members.size());
    for (const auto& p : members) out.push_back(p.task);
    return out;
}

bool admits_with(std::vector<SeqTask> existing, const SeqTask& extra, TestMode mode)
{
    existing.push_back(extra);
    return edf_admits(existing, mode);
}

class Assigner {
public:
    explicit Assigner(AssignState& st) : st_(st), plan_(st.plan) {}

    int open_cluster(int width)
    {
        Cluster c;
        c.id = static_cast<int>(plan_.clusters.size());
        c.width = width;
        plan_.clusters.push_back(std::move(c));
        st_.empty_processors -= width;
        return plan_.clusters.back().id;
    }

    int open_bin()
    {
        Bin b;
        b.id = static_cast<int>(plan_.bins.size());
        plan_.bins.push_back(std::move(b));
        st_.empty_processors -= 1;
        return plan_.bins.back().id;
    }

    GangPiece make_piece(const DagTask& dag, SeqTask task, Ticks offset, ClusterMode mode,
                         FlattenedSchedule payload)
    {
        GangPiece p;
        p.task_id = dag.task_id;
        p.piece_index = static_cast<int>(plan_.placements[dag.task_id].size());
        p.task = task;
        p.release_offset = offset;
        p.mode = mode;
        p.payload = std::move(payload);
        return p;
    }

    void place_on_cluster(int cluster_id, GangPiece piece)
    {
        auto& c = plan_.clusters.at(cluster_id);
        if (piece.zero_laxity()) c.closed = true;
        plan_.placements[piece.task_id].push_back(
            {HostKind::Cluster, cluster_id, static_cast<int>(c.members.size())});
        c.members.push_back(std::move(piece));
    }

    void place_on_bin(int bin_id, GangPiece piece)
    {
        auto& b = plan_.bins.at(bin_id);
        if (piece.zero_laxity()) b.closed = true;
        plan_.placements[piece.task_id].push_back(
            {HostKind::Bin, bin_id, static_cast<int>(b.members.size())});
        b.members.push_back(std::move(piece));
    }

    // Open clusters, fullest first.
    std::vector<int> cluster_order() const
    {
        std::vector<std::pair<Rational, int>> keyed;
        for (const auto& c : plan_.clusters)
            if (!c.closed) keyed.emplace_back(c.normalised_gross_utilisation(), c.id);
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<int> out;
        for (const auto& k : keyed) out.push_back(k.second);
        return out;
    }

    std::vector<int> bin_order() const
    {
        std::vector<std::pair<Rational, int>> keyed;
        for (const auto& b : plan_.bins)
            if (!b.closed) keyed.emplace_back(b.density(), b.id);
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<int> out;
        for (const auto& k : keyed) out.push_back(k.second);
        return out;
    }

    // Spread the remaining work `rump` over open clusters as gang pieces.
    std::optional<Outcome> split_over_clusters(const DagTask& dag, SegmentedWork rump,
                                               Ticks deadline_left, Ticks offset)
    {
        const TestMode mode = plan_.mode;
        for (int qid : cluster_order()) {
            const auto& q = plan_.clusters[qid];
            const auto members = q.seq_tasks();
            FlattenedSchedule fs = flatten_dag(rump, q.width);
            const Ticks len = fs.length;

            if (len <= deadline_left &&
                admits_with(members, {len, deadline_left, dag.period}, mode)) {
                place_on_cluster(qid, make_piece(dag, {len, deadline_left, dag.period}, offset,
                                                 ClusterMode::Flattened, std::move(fs)));
                return std::nullopt;
            }

            const Ticks piece_c = cd_sensitivity(members, dag.period, len, mode);
            if (piece_c == 0) continue;
            if (piece_c >= len) {
                if (len > deadline_left)
                    return Outcome::failure(dag.task_id, FailureReason::DeadlineExhausted);
                place_on_cluster(qid, make_piece(dag, {len, len, dag.period}, offset,
                                                 ClusterMode::Flattened, std::move(fs)));
                return std::nullopt;
            }
            // Deadline reached without completion.
            if (piece_c >= deadline_left)
                return Outcome::failure(dag.task_id, FailureReason::DeadlineExhausted);

            place_on_cluster(qid, make_piece(dag, {piece_c, piece_c, dag.period}, offset,
                                             ClusterMode::Flattened, fs.prefix(piece_c)));
            rump = leftover_dag(rump, fs, piece_c);
            deadline_left -= piece_c;
            offset += piece_c;
        }
        return Outcome::failure(dag.task_id, FailureReason::NoClusters);
    }

    std::optional<Outcome> split_heavy(const DagTask& dag)
    {
        auto work = segment_work(dag);
        if (serial_bound(work) > dag.deadline)
            return Outcome::failure(dag.task_id, FailureReason::SerialBoundExceedsDeadline);
        return split_over_clusters(dag, std::move(work), dag.deadline, 0);
    }

    std::optional<Outcome> split_light(const DagTask& dag)
    {
        const TestMode mode = plan_.mode;
        SegmentedWork rump = segment_work(dag);
        Ticks exec_left = total_work(rump);
        Ticks deadline_left = dag.deadline;
        Ticks offset = 0;

        for (int bid : bin_order()) {
            const auto members = plan_.bins[bid].seq_tasks();
            FlattenedSchedule seq = flatten_dag(rump, 1);

            if (admits_with(members, {exec_left, deadline_left, dag.period}, mode)) {
                place_on_bin(bid, make_piece(dag, {exec_left, deadline_left, dag.period}, offset,
                                             ClusterMode::Flattened, std::move(seq)));
                return std::nullopt;
            }
            const Ticks piece_c = cd_sensitivity(members, dag.period, exec_left, mode);
            if (piece_c == 0) continue;
            if (piece_c >= exec_left) {
                if (exec_left > deadline_left)
                    return Outcome::failure(dag.task_id, FailureReason::DeadlineExhausted);
                place_on_bin(bid, make_piece(dag, {exec_left, exec_left, dag.period}, offset,
                                             ClusterMode::Flattened, std::move(seq)));
                return std::nullopt;
            }
            if (piece_c >= deadline_left)
                return Outcome::failure(dag.task_id, FailureReason::DeadlineExhausted);

            place_on_bin(bid, make_piece(dag, {piece_c, piece_c, dag.period}, offset,
                                         ClusterMode::Flattened, seq.prefix(piece_c)));
            rump = leftover_dag(rump, seq, piece_c);
            exec_left -= piece_c;
            deadline_left -= piece_c;
            offset += piece_c;
        }
        // Out of bins: continue as gang pieces on clusters.
        return split_over_clusters(dag, std::move(rump), deadline_left, offset);
    }

private:
    AssignState& st_;
    SystemPlan& plan_;
};

}  // namespace

std::vector<SeqTask> Cluster::seq_tasks() const { return seq_tasks_of(members); }

Rational Cluster::normalised_gross_utilisation() const
{
    Rational r = total_density(seq_tasks());
    r /= Rational(width);
    return r;
}

std::vector<SeqTask> Bin::seq_tasks() const { return seq_tasks_of(members); }

Rational Bin::density() const { return total_density(seq_tasks()); }

const GangPiece& SystemPlan::piece(const PieceLocation& loc) const
{
    if (loc.kind == HostKind::Cluster) return clusters.at(loc.host_id).members.at(loc.member_index);
    return bins.at(loc.host_id).members.at(loc.member_index);
}

int SystemPlan::host_width(const PieceLocation& loc) const
{
    return loc.kind == HostKind::Cluster ? clusters.at(loc.host_id).width : 1;
}

int SystemPlan::processors_used() const
{
    int used = static_cast<int>(bins.size());
    for (const auto& c : clusters) used += c.width;
    return used;
}

std::vector<std::size_t> assignment_order(const std::vector<DagTask>& tasks)
{
    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&tasks](std::size_t i, std::size_t j) {
        const DagTask& a = tasks[i];
        const DagTask& b = tasks[j];
        const Ticks ka = std::min(a.deadline, a.period);
        const Ticks kb = std::min(b.deadline, b.period);
        if (ka != kb) return ka > kb;
        return a.task_id < b.task_id;
    });
    return order;
}

AssignState pass1(const std::vector<DagTask>& tasks, int m, TestMode mode)
{
    AssignState st;
    st.plan.algorithm = Algorithm::Sfs;
    st.plan.mode = mode;
    st.plan.m = m;
    st.plan.tasks = tasks;
    st.empty_processors = m;
    Assigner a(st);

    for (std::size_t idx : assignment_order(st.plan.tasks)) {
        const DagTask* dag = &st.plan.tasks[idx];
        const Ticks w = volume(*dag);
        if (w == 0) {
            st.plan.placements[dag->task_id];
            continue;
        }
        if (is_heavy(*dag)) {
            auto sizing = cluster_size_requirements(*dag);
            if (!sizing || sizing->width > st.empty_processors) {
                st.skipped.push_back(idx);
                continue;
            }
            int cid = a.open_cluster(sizing->width);
            FlattenedSchedule payload;
            if (sizing->schedule) {
                payload = std::move(*sizing->schedule);
            } else {
                payload.width = sizing->width;
                payload.length = sizing->budget;
            }
            a.place_on_cluster(cid, a.make_piece(*dag, {sizing->budget, dag->deadline, dag->period},
                                                 0, sizing->mode, std::move(payload)));
            continue;
        }

        const SeqTask seq{w, dag->deadline, dag->period};
        auto sequential = [&] { return flatten_dag(segment_work(*dag), 1); };
        bool placed = false;
        for (auto& b : st.plan.bins) {
            if (b.closed) continue;
            if (admits_with(b.seq_tasks(), seq, mode)) {
                a.place_on_bin(b.id, a.make_piece(*dag, seq, 0, ClusterMode::Flattened, sequential()));
                placed = true;
                break;
            }
        }
        if (placed) continue;
        if (st.empty_processors > 0 && admits_with({}, seq, mode)) {
            int bid = a.open_bin();
            a.place_on_bin(bid, a.make_piece(*dag, seq, 0, ClusterMode::Flattened, sequential()));
            continue;
        }
        st.skipped.push_back(idx);
    }
    // Leftover processors become empty bins for pass 2.
    if (!st.skipped.empty())
        while (st.empty_processors > 0) a.open_bin();
    return st;
}

std::optional<Outcome> split_heavy(const DagTask& dag, AssignState& state)
{
    return Assigner(state).split_heavy(dag);
}

std::optional<Outcome> split_light(const DagTask& dag, AssignState& state)
{
    return Assigner(state).split_light(dag);
}

SystemPlan pass2(AssignState state)
{
    Assigner a(state);
    for (std::size_t idx : state.skipped) {
        const DagTask* dag = &state.plan.tasks[idx];
        auto failed = is_heavy(*dag) ? a.split_heavy(*dag) : a.split_light(*dag);
        if (failed) {
            state.plan.outcome = *failed;
            return std::move(state.plan);
        }
    }
    state.plan.outcome = Outcome::ok();
    return std::move(state.plan);
}

SystemPlan sfs_assign(const std::vector<DagTask>& tasks, int m, TestMode mode)
{
    return pass2(pass1(tasks, m, mode));
}

SystemPlan federated_assign(const std::vector<DagTask>& tasks, int m, TestMode mode)
{
    AssignState st;
    st.plan.algorithm = Algorithm::Federated;
    st.plan.mode = mode;
    st.plan.m = m;
    st.plan.tasks = tasks;
    st.empty_processors = m;
    Assigner a(st);
    auto& plan = st.plan;
    const auto order = assignment_order(plan.tasks);

    for (std::size_t idx : order) {
        const DagTask* dag = &plan.tasks[idx];
        if (!is_heavy(*dag)) continue;
        const Ticks w = volume(*dag);
        const Ticks l = longest_path(*dag);
        auto width = graham_cluster_size(w, l, dag->deadline);
        if (!width) {
            plan.outcome = Outcome::failure(dag->task_id, FailureReason::SerialBoundExceedsDeadline);
            return plan;
        }
        if (*width > st.empty_processors) {
            plan.outcome = Outcome::failure(dag->task_id, FailureReason::NoProcessors);
            return plan;
        }
        int cid = a.open_cluster(*width);
        FlattenedSchedule payload;
        payload.width = *width;
        payload.length = graham_makespan(w, l, *width);
        a.place_on_cluster(cid, a.make_piece(*dag, {payload.length, dag->deadline, dag->period}, 0,
                                             ClusterMode::WorkConserving, payload));
    }

    for (std::size_t idx : order) {
        const DagTask* dag = &plan.tasks[idx];
        if (is_heavy(*dag)) continue;
        const Ticks w = volume(*dag);
        if (w == 0) {
            plan.placements[dag->task_id];
            continue;
        }
        const SeqTask seq{w, dag->deadline, dag->period};
        int target = -1;
        for (const auto& b : plan.bins)
            if (admits_with(b.seq_tasks(), seq, mode)) {
                target = b.id;
                break;
            }
        if (target < 0 && st.empty_processors > 0 && admits_with({}, seq, mode)) target = a.open_bin();
        if (target < 0) {
            plan.outcome = Outcome::failure(dag->task_id, FailureReason::NoProcessors);
            return plan;
        }
        a.place_on_bin(target, a.make_piece(*dag, seq, 0, ClusterMode::Flattened,
                                            flatten_dag(segment_work(*dag), 1)));
    }
    plan.outcome = Outcome::ok();
    return plan;
}

SystemPlan assign(Algorithm algo, const std::vector<DagTask>& tasks, int m, TestMode mode)
{
    return algo == Algorithm::Sfs ? sfs_assign(tasks, m, mode) : federated_assign(tasks, m, mode);
}

}  // namespace sfs
