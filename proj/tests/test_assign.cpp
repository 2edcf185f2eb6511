#include <doctest.h>

#include "sfs/assign.hpp"
#include "sfs/generator.hpp"
#include "support.hpp"

using namespace sfs;
using testing::chain;
using testing::parallel;

namespace {

GangPiece resident(int task_id, SeqTask s)
{
    GangPiece p;
    p.task_id = task_id;
    p.task = s;
    p.payload.width = 1;
    p.payload.length = s.exec;
    return p;
}

// A pass-1 state with the given clusters, each holding one resident task.
AssignState state_with(const std::vector<std::pair<int, SeqTask>>& clusters, TestMode mode = TestMode::Fast)
{
    AssignState st;
    st.plan.mode = mode;
    int id = 0;
    for (const auto& [width, s] : clusters) {
        Cluster c;
        c.id = id;
        c.width = width;
        c.members.push_back(resident(100 + id, s));
        st.plan.clusters.push_back(c);
        st.plan.m += width;
        ++id;
    }
    return st;
}

// Structural checks that hold for every successful plan.
void check_plan_shape(const SystemPlan& plan)
{
    REQUIRE(plan.success());
    CHECK(plan.processors_used() <= plan.m);
    for (const auto& t : plan.tasks) {
        REQUIRE(plan.placements.count(t.task_id));
        const auto& locs = plan.placements.at(t.task_id);
        if (volume(t) == 0) {
            CHECK(locs.empty());
            continue;
        }
        REQUIRE_FALSE(locs.empty());
        Ticks offset = 0;
        for (std::size_t k = 0; k < locs.size(); ++k) {
            const auto& p = plan.piece(locs[k]);
            CHECK(p.task_id == t.task_id);
            CHECK(p.piece_index == static_cast<int>(k));
            CHECK(p.release_offset == offset);
            CHECK(p.task.period == t.period);
            CHECK(p.task.exec <= p.task.deadline);
            if (k + 1 < locs.size()) {
                CHECK(p.zero_laxity());
                offset += p.task.exec;
            } else {
                CHECK(p.release_offset + p.task.deadline <= t.deadline);
            }
            if (p.mode == ClusterMode::Flattened) {
                CHECK(p.payload.length == p.task.exec);
                CHECK(p.payload.width == plan.host_width(locs[k]));
            }
        }
    }
    auto check_host = [&](const std::vector<GangPiece>& members) {
        std::vector<SeqTask> s;
        int zero = 0;
        for (const auto& p : members) {
            s.push_back(p.task);
            zero += p.zero_laxity();
        }
        // Zero-laxity pieces have density 1, so only the exact test applies.
        CHECK(exact_edf_schedulable(s));
        CHECK(zero <= 1);
        if (zero) CHECK(members.back().zero_laxity());
    };
    for (const auto& c : plan.clusters) check_host(c.members);
    for (const auto& b : plan.bins) check_host(b.members);
}

}  // namespace

TEST_CASE("assignment order: non-increasing min(D, T), ties by id")
{
    std::vector<DagTask> ts{chain({1}, 100, 50, 3), chain({1}, 200, 200, 1), chain({1}, 50, 50, 2),
                            chain({1}, 60, 60, 4)};
    CHECK(assignment_order(ts) == std::vector<std::size_t>{1, 3, 2, 0});
}

TEST_CASE("one heavy DAG gets one cluster")
{
    const auto plan = sfs_assign({parallel({10, 10, 10, 10}, 20, 20)}, 8);
    REQUIRE(plan.success());
    CHECK(plan.clusters.size() == 1);
    CHECK(plan.bins.empty());
    check_plan_shape(plan);
}

TEST_CASE("light DAGs go first-fit onto bins")
{
    std::vector<DagTask> ts;
    for (int i = 1; i <= 10; ++i) ts.push_back(chain({3, 2}, 10, 10, i));
    const auto plan = sfs_assign(ts, 8);
    REQUIRE(plan.success());
    CHECK(plan.clusters.empty());
    CHECK(plan.bins.size() == 5);
    check_plan_shape(plan);
}

TEST_CASE("heavy DAG whose serial bound exceeds its deadline fails")
{
    auto d = testing::make_dag({{1, 60}, {2, 60}, {3, 70}}, {{1, 3}, {2, 3}}, 100, 100);
    const auto plan = sfs_assign({d}, 8);
    CHECK_FALSE(plan.success());
    CHECK(plan.outcome.task_id == 1);
    CHECK(plan.outcome.reason == FailureReason::SerialBoundExceedsDeadline);
}

TEST_CASE("flattened width below Graham width wins")
{
    const auto plan = sfs_assign({parallel({10, 10, 10, 10}, 20, 20)}, 8);
    REQUIRE(plan.clusters.size() == 1);
    CHECK(plan.clusters[0].width == 2);
    CHECK(plan.clusters[0].members[0].mode == ClusterMode::Flattened);
}

TEST_CASE("first fit fills a bin to density 1")
{
    const auto plan = sfs_assign({chain({6}, 10, 10, 1), chain({4}, 10, 10, 2)}, 4);
    REQUIRE(plan.success());
    CHECK(plan.bins.size() == 1);
    CHECK(plan.bins[0].members.size() == 2);
}

TEST_CASE("pass 1 skips a heavy DAG that does not fit")
{
    // First a width-5 cluster, then a DAG needing 4 with 3 left.
    std::vector<DagTask> ts{parallel({10, 10, 10, 10, 10}, 10, 10, 1), parallel({5, 5, 5, 5}, 5, 5, 2)};
    const auto st = pass1(ts, 8, TestMode::Fast);
    CHECK(st.skipped == std::vector<std::size_t>{1});
    CHECK(st.plan.clusters.size() == 1);
    CHECK(st.empty_processors == 0);
    REQUIRE(st.plan.bins.size() == 3);
    for (const auto& b : st.plan.bins) CHECK(b.members.empty());
}

TEST_CASE("heavy DAG split across two clusters of different widths")
{
    // Width-2 cluster at normalised load 0.25 comes first, width-3 at 0.1.
    auto st = state_with({{2, {150, 300, 300}}, {3, {30, 100, 100}}});
    const auto dag = parallel({70, 70, 70}, 130, 130, 7);
    CHECK(flatten_dag(segment_work(dag), 2).length == 105);
    st.plan.tasks.push_back(dag);

    const auto failed = split_heavy(dag, st);
    REQUIRE_FALSE(failed.has_value());
    const auto& locs = st.plan.placements.at(7);
    REQUIRE(locs.size() == 2);
    const auto& first = st.plan.piece(locs[0]);
    const auto& second = st.plan.piece(locs[1]);
    CHECK(locs[0].host_id == 0);
    CHECK(locs[1].host_id == 1);
    CHECK(first.zero_laxity());
    CHECK(first.task.exec == 52);  // floor(0.4 * 130)
    CHECK(st.plan.clusters[0].closed);
    CHECK(second.release_offset == 52);
    CHECK(second.task.deadline == 130 - 52);
    CHECK(second.task.exec == 53);
    CHECK(second.payload.width == 3);
}

TEST_CASE("empty cluster large enough takes the whole DAG")
{
    AssignState st;
    st.plan.m = 4;
    Cluster c;
    c.width = 4;
    st.plan.clusters.push_back(c);
    const auto dag = parallel({70, 70, 70}, 130, 130, 7);
    st.plan.tasks.push_back(dag);
    REQUIRE_FALSE(split_heavy(dag, st).has_value());
    REQUIRE(st.plan.placements.at(7).size() == 1);
    const auto& p = st.plan.piece(st.plan.placements.at(7)[0]);
    CHECK(p.task.exec == 70);
    CHECK(p.task.deadline == 130);
    CHECK_FALSE(st.plan.clusters[0].closed);
}

TEST_CASE("splitting over too-narrow clusters runs out of deadline")
{
    auto st = state_with({{2, {10, 100, 100}}, {2, {10, 100, 100}}, {2, {10, 100, 100}}});
    const auto dag = parallel({20, 20, 20}, 21, 21, 9);
    st.plan.tasks.push_back(dag);
    const auto failed = split_heavy(dag, st);
    REQUIRE(failed.has_value());
    CHECK(failed->reason == FailureReason::DeadlineExhausted);
}

TEST_CASE("split light DAG over nearly full bins")
{
    AssignState st;
    st.plan.m = 2;
    // Densities 0.6 then 0.3: the first bin only takes a zero-laxity prefix.
    for (int i = 0; i < 2; ++i) {
        Bin b;
        b.id = i;
        b.members.push_back(resident(50 + i, {i == 0 ? 60 : 30, 100, 100}));
        st.plan.bins.push_back(b);
    }
    const auto dag = chain({30, 30}, 100, 100, 3);
    st.plan.tasks.push_back(dag);
    REQUIRE_FALSE(split_light(dag, st).has_value());
    const auto& locs = st.plan.placements.at(3);
    REQUIRE(locs.size() == 2);
    CHECK(st.plan.piece(locs[0]).zero_laxity());
    CHECK(st.plan.piece(locs[0]).task.exec == 25);  // (1 - 0.6) / (1 + 0.6) of 100
    CHECK(st.plan.bins[0].closed);
    Ticks total = 0;
    for (const auto& l : locs) total += st.plan.piece(l).task.exec;
    CHECK(total == 60);
}

TEST_CASE("federated baseline")
{
    SUBCASE("heavy DAG with D <= L fails")
    {
        const auto plan = federated_assign({testing::two_segment_dag(50, 60)}, 8);
        CHECK_FALSE(plan.success());
        CHECK(plan.outcome.reason == FailureReason::SerialBoundExceedsDeadline);
    }
    SUBCASE("all light")
    {
        std::vector<DagTask> ts;
        for (int i = 1; i <= 6; ++i) ts.push_back(chain({5}, 10, 10, i));
        const auto plan = federated_assign(ts, 3);
        CHECK(plan.success());
        CHECK(plan.bins.size() == 3);
        check_plan_shape(plan);
    }
    SUBCASE("Graham-sized cluster")
    {
        const auto plan = federated_assign({testing::two_segment_dag(75, 75)}, 2);
        REQUIRE(plan.success());
        REQUIRE(plan.clusters.size() == 1);
        CHECK(plan.clusters[0].width == 2);
        CHECK(plan.clusters[0].members[0].mode == ClusterMode::WorkConserving);
        CHECK(plan.clusters[0].members[0].task.exec == 75);
    }
    SUBCASE("too few processors")
    {
        const auto plan = federated_assign({testing::two_segment_dag(75, 75)}, 1);
        CHECK(plan.outcome.reason == FailureReason::NoProcessors);
    }
}

TEST_CASE("property: accepted plans are well formed and deterministic")
{
    int accepted = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        GenConfig cfg;
        cfg.m = seed % 2 ? 8 : 16;
        cfg.n = 10;
        cfg.normalised_util = 0.1 + 0.8 * static_cast<double>(seed % 10) / 10.0;
        cfg.seed = seed;
        const auto ts = gen_taskset(cfg);
        for (auto mode : {TestMode::Fast, TestMode::Exact})
            for (auto algo : {Algorithm::Sfs, Algorithm::Federated}) {
                const auto plan = assign(algo, ts, cfg.m, mode);
                const auto again = assign(algo, ts, cfg.m, mode);
                CHECK(plan.outcome.success == again.outcome.success);
                CHECK(plan.clusters.size() == again.clusters.size());
                CHECK(plan.bins.size() == again.bins.size());
                if (plan.success()) {
                    ++accepted;
                    check_plan_shape(plan);
                }
            }
    }
    CHECK(accepted > 100);
}
