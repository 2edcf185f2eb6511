#include "sfs/io.hpp"

#include <fstream>

namespace sfs {

using nlohmann::json;

namespace {

void check_version(const json& j)
{
    if (j.contains("format_version") && j.at("format_version").get<int>() != kFormatVersion)
        throw FormatError("unsupported format_version " + j.at("format_version").dump());
}

std::string mode_name(ClusterMode m) { return m == ClusterMode::Flattened ? "flattened" : "work_conserving"; }

ClusterMode mode_from(const std::string& s)
{
    if (s == "flattened") return ClusterMode::Flattened;
    if (s == "work_conserving") return ClusterMode::WorkConserving;
    throw FormatError("unknown piece mode '" + s + "'");
}

FailureReason reason_from(const std::string& s)
{
    for (auto r : {FailureReason::NoClusters, FailureReason::DeadlineExhausted,
                   FailureReason::SerialBoundExceedsDeadline, FailureReason::NoProcessors})
        if (to_string(r) == s) return r;
    throw FormatError("unknown failure reason '" + s + "'");
}

json piece_to_json(const GangPiece& p)
{
    json j{{"task_id", p.task_id},
           {"piece_index", p.piece_index},
           {"exec", p.task.exec},
           {"deadline", p.task.deadline},
           {"period", p.task.period},
           {"release_offset", p.release_offset},
           {"zero_laxity", p.zero_laxity()},
           {"mode", mode_name(p.mode)}};
    j["payload"] = to_json(p.payload);
    return j;
}

GangPiece piece_from_json(const json& j)
{
    GangPiece p;
    p.task_id = j.at("task_id").get<int>();
    p.piece_index = j.at("piece_index").get<int>();
    p.task = {j.at("exec").get<Ticks>(), j.at("deadline").get<Ticks>(), j.at("period").get<Ticks>()};
    p.release_offset = j.at("release_offset").get<Ticks>();
    p.mode = mode_from(j.at("mode").get<std::string>());
    p.payload = schedule_from_json(j.at("payload"));
    return p;
}

// Wraps nlohmann's exceptions so callers see a single error type.
template <typename F>
auto parse(const char* what, F&& f)
{
    try {
        return f();
    } catch (const json::exception& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

json to_json(const DagTask& dag)
{
    json nodes = json::array();
    for (const auto& n : dag.nodes) nodes.push_back({{"id", n.id}, {"wcet", n.wcet}});
    json edges = json::array();
    for (const auto& e : dag.edges) edges.push_back({e.from, e.to});
    return {{"task_id", dag.task_id},
            {"period", dag.period},
            {"deadline", dag.deadline},
            {"nodes", nodes},
            {"edges", edges}};
}

json to_json(const TaskSet& set)
{
    json tasks = json::array();
    for (const auto& t : set.tasks) tasks.push_back(to_json(t));
    return {{"format_version", kFormatVersion}, {"m", set.m}, {"tasks", tasks}};
}

json to_json(const FlattenedSchedule& fs)
{
    json ivs = json::array();
    for (const auto& iv : fs.intervals)
        ivs.push_back({{"node", iv.node_id}, {"proc", iv.processor}, {"start", iv.start}, {"end", iv.end}});
    return {{"width", fs.width}, {"length", fs.length}, {"intervals", ivs}};
}

json to_json(const SystemPlan& plan)
{
    json j;
    j["format_version"] = kFormatVersion;
    j["algorithm"] = to_string(plan.algorithm);
    j["mode"] = plan.mode == TestMode::Fast ? "fast" : "exact";
    j["m"] = plan.m;
    j["outcome"] = plan.success()
                       ? json{{"status", "success"}}
                       : json{{"status", "failure"},
                              {"task_id", plan.outcome.task_id},
                              {"reason", to_string(plan.outcome.reason)}};
    json tasks = json::array();
    for (const auto& t : plan.tasks) tasks.push_back(to_json(t));
    j["tasks"] = tasks;

    json clusters = json::array();
    for (const auto& c : plan.clusters) {
        json members = json::array();
        for (const auto& p : c.members) members.push_back(piece_to_json(p));
        clusters.push_back({{"id", c.id}, {"width", c.width}, {"closed", c.closed}, {"members", members}});
    }
    j["clusters"] = clusters;

    json bins = json::array();
    for (const auto& b : plan.bins) {
        json members = json::array();
        for (const auto& p : b.members) members.push_back(piece_to_json(p));
        bins.push_back({{"id", b.id}, {"closed", b.closed}, {"members", members}});
    }
    j["bins"] = bins;

    json placements = json::array();
    for (const auto& [task_id, locs] : plan.placements) {
        json pieces = json::array();
        for (const auto& loc : locs)
            pieces.push_back({{"host", loc.kind == HostKind::Cluster ? "cluster" : "bin"},
                              {"id", loc.host_id},
                              {"member", loc.member_index}});
        placements.push_back({{"task_id", task_id}, {"pieces", pieces}});
    }
    j["placements"] = placements;
    return j;
}

DagTask dag_from_json(const json& j)
{
    return parse("task", [&] {
        DagTask d;
        d.task_id = j.at("task_id").get<int>();
        d.period = j.at("period").get<Ticks>();
        d.deadline = j.at("deadline").get<Ticks>();
        for (const auto& n : j.at("nodes")) d.nodes.push_back({n.at("id").get<int>(), n.at("wcet").get<Ticks>()});
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw FormatError("task: edges must be [from, to] pairs");
            d.edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        return d;
    });
}

TaskSet taskset_from_json(const json& j)
{
    check_version(j);
    return parse("task set", [&] {
        TaskSet s;
        s.m = j.value("m", 0);
        for (const auto& t : j.at("tasks")) s.tasks.push_back(dag_from_json(t));
        return s;
    });
}

FlattenedSchedule schedule_from_json(const json& j)
{
    return parse("schedule", [&] {
        FlattenedSchedule fs;
        fs.width = j.at("width").get<int>();
        fs.length = j.at("length").get<Ticks>();
        for (const auto& iv : j.at("intervals"))
            fs.intervals.push_back({iv.at("node").get<int>(), iv.at("proc").get<int>(),
                                    iv.at("start").get<Ticks>(), iv.at("end").get<Ticks>()});
        return fs;
    });
}

SystemPlan plan_from_json(const json& j)
{
    check_version(j);
    return parse("plan", [&] {
        SystemPlan p;
        const auto algo = j.at("algorithm").get<std::string>();
        if (algo != "sfs" && algo != "fs") throw FormatError("plan: unknown algorithm '" + algo + "'");
        p.algorithm = algo == "sfs" ? Algorithm::Sfs : Algorithm::Federated;
        p.mode = j.value("mode", std::string("fast")) == "exact" ? TestMode::Exact : TestMode::Fast;
        p.m = j.at("m").get<int>();
        const auto& out = j.at("outcome");
        if (out.at("status").get<std::string>() == "success")
            p.outcome = Outcome::ok();
        else
            p.outcome = Outcome::failure(out.at("task_id").get<int>(),
                                         reason_from(out.at("reason").get<std::string>()));
        for (const auto& t : j.at("tasks")) p.tasks.push_back(dag_from_json(t));
        for (const auto& c : j.at("clusters")) {
            Cluster cl;
            cl.id = c.at("id").get<int>();
            cl.width = c.at("width").get<int>();
            cl.closed = c.at("closed").get<bool>();
            for (const auto& m : c.at("members")) cl.members.push_back(piece_from_json(m));
            p.clusters.push_back(std::move(cl));
        }
        for (const auto& b : j.at("bins")) {
            Bin bn;
            bn.id = b.at("id").get<int>();
            bn.closed = b.at("closed").get<bool>();
            for (const auto& m : b.at("members")) bn.members.push_back(piece_from_json(m));
            p.bins.push_back(std::move(bn));
        }
        for (const auto& pl : j.at("placements")) {
            auto& locs = p.placements[pl.at("task_id").get<int>()];
            for (const auto& loc : pl.at("pieces"))
                locs.push_back({loc.at("host").get<std::string>() == "cluster" ? HostKind::Cluster : HostKind::Bin,
                                loc.at("id").get<int>(), loc.at("member").get<int>()});
        }
        return p;
    });
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace sfs
