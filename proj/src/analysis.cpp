#include "sfs/analysis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sfs {

namespace {

Rational ratio(Ticks num, Ticks den)
{
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

// Largest integer not above q (q >= 0).
Ticks floor_of(const Rational& q)
{
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return static_cast<Ticks>(f.get_si());
}

constexpr Ticks kHorizonCap = Ticks{1} << 40;

Ticks hyperperiod(std::span<const SeqTask> tasks)
{
    Ticks h = 1;
    for (const auto& t : tasks) {
        h = std::lcm(h, t.period);
        if (h > kHorizonCap) return kHorizonCap;
    }
    return h;
}

}  // namespace

Rational SeqTask::density() const { return ratio(exec, std::min(deadline, period)); }
Rational SeqTask::utilisation() const { return ratio(exec, period); }

Ticks dbf(const SeqTask& task, Ticks t)
{
    if (t < task.deadline) return 0;
    return ((t - task.deadline) / task.period + 1) * task.exec;
}

Rational total_density(std::span<const SeqTask> tasks)
{
    Rational sum = 0;
    for (const auto& t : tasks) sum += ratio(t.exec, std::min(t.deadline, t.period));
    return sum;
}

bool density_schedulable(std::span<const SeqTask> tasks)
{
    return total_density(tasks) <= 1;
}

bool exact_edf_schedulable(std::span<const SeqTask> tasks)
{
    std::vector<SeqTask> live;
    for (const auto& t : tasks) {
        if (t.exec <= 0) continue;
        if (t.exec > t.deadline) return false;
        live.push_back(t);
    }
    if (live.empty()) return true;

    Rational util = 0;
    for (const auto& t : live) util += ratio(t.exec, t.period);
    if (util > 1) return false;

    Ticks horizon = hyperperiod(live);
    if (util < 1) {
        // Beyond max(D_max, sum (T-D) U / (1-U)) the demand can never catch up.
        Ticks d_max = 0;
        Rational slack = 0;
        for (const auto& t : live) {
            d_max = std::max(d_max, t.deadline);
            slack += ratio(t.period - t.deadline, 1) * ratio(t.exec, t.period);
        }
        Ticks busy = std::max(d_max, floor_of(slack / (1 - util)));
        horizon = std::min(horizon, busy);
    }

    std::vector<Ticks> points;
    for (const auto& t : live)
        for (Ticks d = t.deadline; d <= horizon; d += t.period) points.push_back(d);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    for (Ticks t : points) {
        Ticks demand = 0;
        for (const auto& task : live) demand += dbf(task, t);
        if (demand > t) return false;
    }
    return true;
}

bool edf_admits(std::span<const SeqTask> tasks, TestMode mode)
{
    for (const auto& t : tasks)
        if (t.exec > t.deadline) return false;
    return mode == TestMode::Exact ? exact_edf_schedulable(tasks) : density_schedulable(tasks);
}

Rational augusto_bound(std::span<const SeqTask> existing, Ticks split_period)
{
    if (existing.empty()) return 1;
    Ticks min_deadline = std::numeric_limits<Ticks>::max();
    for (const auto& t : existing) min_deadline = std::min(min_deadline, t.deadline);
    const Ticks k = min_deadline / split_period;
    if (k == 0) return 0;

    const Rational delta = total_density(existing);
    Rational bound = (1 - delta) / (1 + delta / Rational(static_cast<long>(k)));
    if (bound < 0) bound = 0;
    return bound;
}

Ticks cd_sensitivity(std::span<const SeqTask> existing, Ticks split_period, Ticks cap,
                     TestMode mode)
{
    if (cap <= 0) return 0;
    if (mode == TestMode::Fast) {
        const Rational bound = augusto_bound(existing, split_period);
        return std::min(cap, floor_of(bound * Rational(static_cast<long>(split_period))));
    }

    std::vector<SeqTask> trial(existing.begin(), existing.end());
    trial.push_back({});
    auto fits = [&](Ticks c) {
        trial.back() = {c, c, split_period};
        return exact_edf_schedulable(trial);
    };
    if (!exact_edf_schedulable(existing)) return 0;
    Ticks lo = 0, hi = std::min(cap, split_period);
    if (fits(hi)) return hi;
    // Invariant: fits(lo), !fits(hi).
    while (hi - lo > 1) {
        Ticks mid = lo + (hi - lo) / 2;
        if (fits(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace sfs
