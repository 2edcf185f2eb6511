#include "sfs/flatten.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace sfs {

namespace {

Ticks ceil_div(Ticks a, Ticks b) { return (a + b - 1) / b; }

}  // namespace

FlattenedSchedule FlattenedSchedule::prefix(Ticks cut) const
{
    FlattenedSchedule out;
    out.width = width;
    out.length = std::min(cut, length);
    for (const auto& iv : intervals) {
        if (iv.start >= cut) continue;
        auto clipped = iv;
        clipped.end = std::min(iv.end, cut);
        out.intervals.push_back(clipped);
    }
    return out;
}

Ticks FlattenedSchedule::executed_before(int node_id, Ticks cut) const
{
    Ticks done = 0;
    for (const auto& iv : intervals)
        if (iv.node_id == node_id && iv.start < cut) done += std::min(iv.end, cut) - iv.start;
    return done;
}

FlattenedSchedule flatten_segment(std::span<const NodeWork> segment, int width)
{
    if (width < 1) throw std::invalid_argument("flatten_segment: width must be >= 1");
    if (segment.empty()) throw std::invalid_argument("flatten_segment: empty segment");

    Ticks cmax = 0, total = 0;
    for (const auto& n : segment) {
        cmax = std::max(cmax, n.wcet);
        total += n.wcet;
    }
    FlattenedSchedule s;
    s.width = width;
    s.length = std::max(cmax, ceil_div(total, width));

    Ticks offset = 0;
    int proc = 0;
    for (const auto& n : segment) {
        if (n.wcet == 0) continue;
        if (offset + n.wcet <= s.length) {
            s.intervals.push_back({n.node_id, proc, offset, offset + n.wcet});
            offset += n.wcet;
            if (offset == s.length) {
                offset = 0;
                ++proc;
            }
        } else {
            const Ticks head_end = offset + n.wcet - s.length;
            // Wrapped head must finish before the tail begins.
            assert(head_end <= offset);
            s.intervals.push_back({n.node_id, proc, offset, s.length});
            s.intervals.push_back({n.node_id, proc + 1, 0, head_end});
            offset = head_end;
            ++proc;
        }
    }
    assert(proc <= width);
    return s;
}

FlattenedSchedule flatten_dag(const SegmentedWork& work, int width)
{
    if (width < 1) throw std::invalid_argument("flatten_dag: width must be >= 1");
    FlattenedSchedule out;
    out.width = width;
    for (const auto& seg : work) {
        if (seg.empty()) continue;
        auto part = flatten_segment(seg, width);
        for (auto iv : part.intervals) {
            iv.start += out.length;
            iv.end += out.length;
            out.intervals.push_back(iv);
        }
        out.length += part.length;
    }
    return out;
}

MaxFlattenResult feasibly_max_flatten(const SegmentedWork& work, Ticks deadline, Ticks period)
{
    MaxFlattenResult r;
    r.serial_bound = serial_bound(work);
    if (r.serial_bound > deadline) return r;

    const Ticks horizon = std::min(deadline, period);
    int width = static_cast<int>(std::max<Ticks>(1, ceil_div(total_work(work), horizon)));
    while (true) {
        auto fs = flatten_dag(work, width);
        if (fs.length <= deadline) {
            r.schedule = std::move(fs);
            return r;
        }
        ++width;
    }
}

MaxFlattenResult feasibly_max_flatten(const DagTask& dag)
{
    return feasibly_max_flatten(segment_work(dag), dag.deadline, dag.period);
}

Ticks graham_makespan(Ticks volume, Ticks longest, int width)
{
    return longest + ceil_div(volume - longest, width);
}

std::optional<int> graham_cluster_size(Ticks volume, Ticks longest, Ticks deadline)
{
    if (deadline <= longest) return std::nullopt;
    return static_cast<int>(std::max<Ticks>(1, ceil_div(volume - longest, deadline - longest)));
}

std::optional<ClusterSizing> cluster_size_requirements(const DagTask& dag)
{
    const Ticks w = volume(dag);
    const Ticks l = longest_path(dag);
    auto flat = feasibly_max_flatten(dag);
    auto graham = graham_cluster_size(w, l, dag.deadline);

    if (flat.feasible() && (!graham || flat.schedule->width <= *graham)) {
        ClusterSizing c;
        c.width = flat.schedule->width;
        c.mode = ClusterMode::Flattened;
        c.budget = flat.schedule->length;
        c.schedule = std::move(flat.schedule);
        return c;
    }
    if (graham) {
        ClusterSizing c;
        c.width = *graham;
        c.mode = ClusterMode::WorkConserving;
        c.budget = graham_makespan(w, l, *graham);
        return c;
    }
    return std::nullopt;
}

SegmentedWork leftover_dag(const SegmentedWork& work, const FlattenedSchedule& fs, Ticks cut)
{
    if (cut <= 0 || cut >= fs.length)
        throw std::invalid_argument("leftover_dag: cut must lie strictly inside the schedule");
    std::map<int, Ticks> done;
    for (const auto& iv : fs.intervals)
        if (iv.start < cut) done[iv.node_id] += std::min(iv.end, cut) - iv.start;

    SegmentedWork rump;
    for (const auto& seg : work) {
        std::vector<NodeWork> rest;
        for (const auto& n : seg) {
            auto it = done.find(n.node_id);
            Ticks remaining = n.wcet - (it == done.end() ? 0 : it->second);
            if (remaining > 0) rest.push_back({n.node_id, remaining});
        }
        if (!rest.empty()) rump.push_back(std::move(rest));
    }
    return rump;
}

}  // namespace sfs
