#include "sfs/simulate.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>

namespace sfs {

ListScheduler::ListScheduler(const DagTask& dag, int width)
    : graph_(dag), width_(width), remaining_(graph_.size()), pending_preds_(graph_.size()),
      unfinished_(graph_.size())
{
    if (width < 1) throw std::invalid_argument("ListScheduler: width must be >= 1");
    for (std::size_t v = 0; v < graph_.size(); ++v) {
        remaining_[v] = graph_.wcet(v);
        pending_preds_[v] = graph_.predecessors(v).size();
    }
    // Zero-WCET nodes complete as soon as their predecessors do.
    for (auto v : graph_.topological_order())
        if (remaining_[v] == 0 && pending_preds_[v] == 0) {
            --unfinished_;
            for (auto s : graph_.successors(v)) --pending_preds_[s];
        }
}

std::vector<int> ListScheduler::step()
{
    std::vector<std::size_t> chosen;
    for (std::size_t v = 0; v < graph_.size() && static_cast<int>(chosen.size()) < width_; ++v)
        if (pending_preds_[v] == 0 && remaining_[v] > 0) chosen.push_back(v);

    std::vector<int> ids;
    std::vector<std::size_t> finished;
    for (auto v : chosen) {
        ids.push_back(graph_.id(v));
        if (--remaining_[v] == 0) finished.push_back(v);
    }
    while (!finished.empty()) {
        auto v = finished.back();
        finished.pop_back();
        --unfinished_;
        for (auto s : graph_.successors(v))
            if (--pending_preds_[s] == 0 && remaining_[s] == 0) finished.push_back(s);
    }
    return ids;
}

Ticks list_schedule(const DagTask& dag, int width)
{
    ListScheduler ls(dag, width);
    Ticks t = 0;
    while (!ls.done()) {
        ls.step();
        ++t;
    }
    return t;
}

bool edf_brute_force(std::span<const SeqTask> tasks, Ticks horizon)
{
    struct Job {
        Ticks deadline;
        std::size_t task;
        Ticks left;
    };
    std::vector<Job> active;
    for (Ticks t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (t % tasks[i].period == 0 && tasks[i].exec > 0)
                active.push_back({t + tasks[i].deadline, i, tasks[i].exec});
        for (const auto& j : active)
            if (j.deadline <= t) return false;
        if (active.empty()) continue;
        auto run = std::min_element(active.begin(), active.end(), [](const Job& a, const Job& b) {
            return std::tie(a.deadline, a.task) < std::tie(b.deadline, b.task);
        });
        if (--run->left == 0) active.erase(run);
    }
    for (const auto& j : active)
        if (j.deadline <= horizon) return false;
    return true;
}

Ticks hyperperiod(const std::vector<DagTask>& tasks)
{
    Ticks h = 1;
    for (const auto& t : tasks) h = std::lcm(h, t.period);
    return h;
}

namespace {

struct PieceRef {
    const GangPiece* piece = nullptr;
    int host = 0;
    std::vector<int> table;  // cursor * width + processor -> node id or -1
};

std::vector<int> payload_table(const FlattenedSchedule& fs, Ticks exec)
{
    const auto w = static_cast<std::size_t>(fs.width);
    std::vector<int> table(static_cast<std::size_t>(exec) * w, -1);
    for (const auto& iv : fs.intervals)
        for (Ticks t = iv.start; t < std::min(iv.end, exec); ++t)
            table[static_cast<std::size_t>(t) * w + static_cast<std::size_t>(iv.processor)] = iv.node_id;
    return table;
}

}  // namespace

SimTrace simulate_plan(const SystemPlan& plan, Ticks horizon)
{
    if (!plan.success()) throw std::invalid_argument("simulate_plan: plan is not a success");
    if (horizon <= 0) throw std::invalid_argument("simulate_plan: horizon must be positive");

    SimTrace tr;
    tr.horizon = horizon;
    std::map<std::pair<HostKind, int>, int> host_of;
    int proc = 0;
    for (const auto& c : plan.clusters) {
        host_of[{HostKind::Cluster, c.id}] = static_cast<int>(tr.hosts.size());
        tr.hosts.push_back({HostKind::Cluster, c.id, proc, c.width});
        proc += c.width;
    }
    for (const auto& b : plan.bins) {
        host_of[{HostKind::Bin, b.id}] = static_cast<int>(tr.hosts.size());
        tr.hosts.push_back({HostKind::Bin, b.id, proc, 1});
        proc += 1;
    }
    tr.processors = proc;
    tr.ownership.assign(static_cast<std::size_t>(proc) * static_cast<std::size_t>(horizon), Owner{});
    tr.running.assign(tr.hosts.size(), std::vector<int>(static_cast<std::size_t>(horizon), -1));

    // Piece chains with their hosts and payload tables.
    std::map<int, std::vector<PieceRef>> chains;
    for (const auto& [task_id, locs] : plan.placements) {
        auto& chain = chains[task_id];
        for (const auto& loc : locs) {
            PieceRef ref;
            ref.piece = &plan.piece(loc);
            ref.host = host_of.at({loc.kind, loc.host_id});
            if (ref.piece->mode == ClusterMode::Flattened)
                ref.table = payload_table(ref.piece->payload, ref.piece->task.exec);
            chain.push_back(std::move(ref));
        }
    }

    // Jobs and piece jobs over the horizon.
    struct PieceRun {
        const PieceRef* ref = nullptr;
        std::size_t dag_job = 0;
        Ticks cursor = 0;
        std::unique_ptr<ListScheduler> ls;
    };
    std::vector<PieceRun> runs;
    struct DagJobState {
        const DagTask* dag = nullptr;
        std::map<int, Ticks> remaining;
        std::size_t open_nodes = 0;
    };
    std::vector<DagJobState> dag_jobs;

    for (const auto& task : plan.tasks) {
        for (int j = 0; static_cast<Ticks>(j) * task.period < horizon; ++j) {
            const Ticks arrival = static_cast<Ticks>(j) * task.period;
            tr.jobs.push_back({task.task_id, j, arrival, arrival + task.deadline, -1});
            DagJobState st;
            st.dag = &task;
            for (const auto& n : task.nodes)
                if (n.wcet > 0) {
                    st.remaining[n.id] = n.wcet;
                    ++st.open_nodes;
                }
            if (st.open_nodes == 0) tr.jobs.back().completion = arrival;
            dag_jobs.push_back(std::move(st));

            auto it = chains.find(task.task_id);
            if (it == chains.end()) continue;
            for (const auto& ref : it->second) {
                const Ticks release = arrival + ref.piece->release_offset;
                if (release >= horizon) continue;
                tr.piece_jobs.push_back({ref.host, task.task_id, ref.piece->piece_index, j, release,
                                         release + ref.piece->task.deadline, -1});
                PieceRun run;
                run.ref = &ref;
                run.dag_job = dag_jobs.size() - 1;
                if (ref.piece->mode == ClusterMode::WorkConserving)
                    run.ls = std::make_unique<ListScheduler>(task, tr.hosts[ref.host].width);
                runs.push_back(std::move(run));
            }
        }
    }

    // Per host: piece jobs in release order, and the ready queue in EDF order.
    using Key = std::tuple<Ticks, int, int, Ticks, int>;
    std::vector<std::vector<int>> by_release(tr.hosts.size());
    for (int i = 0; i < static_cast<int>(tr.piece_jobs.size()); ++i)
        by_release[tr.piece_jobs[i].host].push_back(i);
    for (auto& v : by_release)
        std::stable_sort(v.begin(), v.end(), [&tr](int a, int b) {
            return tr.piece_jobs[a].release < tr.piece_jobs[b].release;
        });
    std::vector<std::size_t> next(tr.hosts.size(), 0);
    std::vector<std::set<Key>> ready(tr.hosts.size());

    for (Ticks t = 0; t < horizon; ++t) {
        for (std::size_t h = 0; h < tr.hosts.size(); ++h) {
            auto& queue = by_release[h];
            while (next[h] < queue.size() && tr.piece_jobs[queue[next[h]]].release <= t) {
                const auto& pj = tr.piece_jobs[queue[next[h]]];
                ready[h].insert({pj.deadline, pj.task_id, pj.piece_index, pj.release, queue[next[h]]});
                ++next[h];
            }
            if (ready[h].empty()) continue;

            const int idx = std::get<4>(*ready[h].begin());
            auto& pj = tr.piece_jobs[idx];
            auto& run = runs[idx];
            auto& job = dag_jobs[run.dag_job];
            const HostSlot& slot = tr.hosts[h];
            tr.running[h][static_cast<std::size_t>(t)] = idx;

            std::vector<int> nodes(static_cast<std::size_t>(slot.width), -1);
            if (run.ls) {
                auto chosen = run.ls->step();
                std::copy(chosen.begin(), chosen.end(), nodes.begin());
            } else if (run.cursor < run.ref->piece->task.exec) {
                const auto base = static_cast<std::size_t>(run.cursor) * static_cast<std::size_t>(slot.width);
                for (int p = 0; p < slot.width; ++p) nodes[p] = run.ref->table[base + static_cast<std::size_t>(p)];
            }
            for (int p = 0; p < slot.width; ++p) {
                const int nid = nodes[static_cast<std::size_t>(p)];
                if (nid < 0) continue;
                tr.ownership[static_cast<std::size_t>(slot.first_processor + p) * static_cast<std::size_t>(horizon) +
                             static_cast<std::size_t>(t)] = {pj.task_id, pj.job, nid};
                auto r = job.remaining.find(nid);
                if (r != job.remaining.end() && r->second > 0 && --r->second == 0 && --job.open_nodes == 0)
                    tr.jobs[run.dag_job].completion = t + 1;
            }
            ++run.cursor;
            const bool finished = (run.ls && run.ls->done()) || run.cursor >= run.ref->piece->task.exec;
            if (finished) {
                pj.completion = t + 1;
                ready[h].erase(ready[h].begin());
            }
        }
    }
    return tr;
}

std::vector<Violation> check_trace(const SimTrace& trace, const std::vector<DagTask>& tasks,
                                   const SystemPlan& plan)
{
    std::vector<Violation> out;
    auto add = [&out](std::string rule, std::string detail) {
        out.push_back({std::move(rule), std::move(detail)});
    };
    auto job_name = [](int task, int job) {
        return "task " + std::to_string(task) + " job " + std::to_string(job);
    };

    struct Info {
        const DagTask* dag;
        DagIndex index;
    };
    std::map<int, Info> info;
    for (const auto& t : tasks) info.emplace(t.task_id, Info{&t, DagIndex(t)});

    struct NodeExec {
        Ticks count = 0;
        Ticks first = -1;
        Ticks last = -1;
    };
    std::map<std::pair<int, int>, std::vector<NodeExec>> exec;

    const Ticks horizon = trace.horizon;
    for (Ticks t = 0; t < horizon; ++t) {
        std::set<std::tuple<int, int, int>> seen;
        for (int p = 0; p < trace.processors; ++p) {
            const Owner& o = trace.owner(p, t);
            if (o.idle()) continue;
            auto it = info.find(o.task_id);
            if (it == info.end()) {
                add("owner", "processor " + std::to_string(p) + " runs unknown task " + std::to_string(o.task_id));
                continue;
            }
            if (!seen.insert({o.task_id, o.job, o.node_id}).second)
                add("self-parallel", job_name(o.task_id, o.job) + " node " + std::to_string(o.node_id) +
                                         " on two processors at tick " + std::to_string(t));
            auto& nodes = exec[{o.task_id, o.job}];
            if (nodes.empty()) nodes.resize(it->second.index.size());
            auto& ne = nodes[it->second.index.index_of(o.node_id)];
            if (ne.first < 0) ne.first = t;
            ne.last = t;
            ++ne.count;
        }
    }

    // Deadlines, budgets and precedence per DAG job.
    for (const auto& [task_id, in] : info) {
        const DagTask& dag = *in.dag;
        const DagIndex& g = in.index;
        for (int j = 0; static_cast<Ticks>(j) * dag.period < horizon; ++j) {
            const Ticks release = static_cast<Ticks>(j) * dag.period;
            const Ticks deadline = release + dag.deadline;
            if (deadline > horizon) continue;
            auto it = exec.find({task_id, j});
            std::vector<NodeExec> empty(g.size());
            const auto& nodes = it == exec.end() ? empty : it->second;

            Ticks completion = release;
            bool complete = true;
            for (std::size_t v = 0; v < g.size(); ++v) {
                if (nodes[v].count != g.wcet(v)) {
                    add("budget", job_name(task_id, j) + " node " + std::to_string(g.id(v)) + " received " +
                                      std::to_string(nodes[v].count) + " of " + std::to_string(g.wcet(v)));
                    complete = false;
                }
                if (nodes[v].count > 0) {
                    completion = std::max(completion, nodes[v].last + 1);
                    if (nodes[v].first < release)
                        add("release", job_name(task_id, j) + " ran before its release");
                }
                for (auto u : g.predecessors(v)) {
                    if (nodes[v].count == 0 || g.wcet(u) == 0) continue;
                    if (nodes[u].count != g.wcet(u) || nodes[u].last >= nodes[v].first)
                        add("precedence", job_name(task_id, j) + " node " + std::to_string(g.id(v)) +
                                              " started before predecessor " + std::to_string(g.id(u)) +
                                              " finished");
                }
            }
            if (!complete)
                add("deadline", job_name(task_id, j) + " did not complete");
            else if (completion > deadline)
                add("deadline", job_name(task_id, j) + " completed at " + std::to_string(completion) +
                                    " after deadline " + std::to_string(deadline));
        }
    }

    // Per-host EDF order, work conservation and gang lockstep.
    using Key = std::tuple<Ticks, int, int, Ticks>;
    auto key = [&trace](int i) {
        const auto& pj = trace.piece_jobs[static_cast<std::size_t>(i)];
        return Key{pj.deadline, pj.task_id, pj.piece_index, pj.release};
    };
    for (std::size_t h = 0; h < trace.hosts.size(); ++h) {
        std::vector<int> mine;
        for (int i = 0; i < static_cast<int>(trace.piece_jobs.size()); ++i)
            if (trace.piece_jobs[static_cast<std::size_t>(i)].host == static_cast<int>(h)) mine.push_back(i);
        const HostSlot& slot = trace.hosts[h];
        for (Ticks t = 0; t < horizon; ++t) {
            const int r = trace.running[h][static_cast<std::size_t>(t)];
            bool pending_any = false;
            for (int i : mine) {
                const auto& pj = trace.piece_jobs[static_cast<std::size_t>(i)];
                const bool pending = pj.release <= t && (pj.completion < 0 || pj.completion > t);
                if (!pending) continue;
                pending_any = true;
                if (r >= 0 && i != r && key(i) < key(r))
                    add("edf-order", "host " + std::to_string(h) + " tick " + std::to_string(t) +
                                         " ran a later-deadline piece");
            }
            if (r < 0 && pending_any)
                add("edf-idle", "host " + std::to_string(h) + " idle at tick " + std::to_string(t) +
                                    " with pending work");
            for (int p = 0; p < slot.width; ++p) {
                const Owner& o = trace.owner(slot.first_processor + p, t);
                if (o.idle()) continue;
                const auto* pj = r >= 0 ? &trace.piece_jobs[static_cast<std::size_t>(r)] : nullptr;
                if (!pj || o.task_id != pj->task_id || o.job != pj->job)
                    add("lockstep", "host " + std::to_string(h) + " processor " + std::to_string(p) +
                                        " strays from its gang at tick " + std::to_string(t));
            }
        }
    }

    // Piece chains: each piece meets its reported deadline and hands over in order.
    std::map<std::pair<int, int>, std::vector<const PieceJobRecord*>> chain;
    for (const auto& pj : trace.piece_jobs) chain[{pj.task_id, pj.job}].push_back(&pj);
    for (auto& [k, pieces] : chain) {
        std::sort(pieces.begin(), pieces.end(),
                  [](const auto* a, const auto* b) { return a->piece_index < b->piece_index; });
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            const auto& pj = *pieces[i];
            if (pj.deadline <= horizon && (pj.completion < 0 || pj.completion > pj.deadline))
                add("piece-deadline", job_name(k.first, k.second) + " piece " + std::to_string(pj.piece_index) +
                                          " missed its reported deadline");
            if (i > 0 && (pieces[i - 1]->completion < 0 || pieces[i - 1]->completion > pj.release))
                add("piece-order", job_name(k.first, k.second) + " piece " + std::to_string(pj.piece_index) +
                                       " released before its predecessor finished");
        }
    }
    if (plan.processors_used() > plan.m)
        add("platform", "plan uses " + std::to_string(plan.processors_used()) + " of " +
                            std::to_string(plan.m) + " processors");
    return out;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out)
{
    out << "tick,processor,owner\n";
    for (Ticks t = 0; t < trace.horizon; ++t)
        for (int p = 0; p < trace.processors; ++p) {
            const Owner& o = trace.owner(p, t);
            out << t << ',' << p << ',';
            if (o.idle())
                out << "idle";
            else
                out << 'T' << o.task_id << ".J" << o.job << ".N" << o.node_id;
            out << '\n';
        }
}

}  // namespace sfs
