#pragma once

#include <gmpxx.h>

#include <span>
#include <vector>

#include "sfs/taskmodel.hpp"

namespace sfs {

using Rational = mpq_class;

// Uniprocessor-equivalent sporadic task (C, D, T).
struct SeqTask {
    Ticks exec = 0;
    Ticks deadline = 0;
    Ticks period = 0;

    Rational density() const;
    Rational utilisation() const;
    bool zero_laxity() const { return exec == deadline; }
    bool operator==(const SeqTask&) const = default;
};

enum class TestMode { Fast, Exact };

// Demand of jobs with both release and deadline inside any window of length t.
Ticks dbf(const SeqTask& task, Ticks t);

// Processor-demand criterion, checked at every absolute deadline up to the
// smaller of the hyperperiod and the synchronous busy-window bound.
bool exact_edf_schedulable(std::span<const SeqTask> tasks);

// Sufficient: total density at most 1.
bool density_schedulable(std::span<const SeqTask> tasks);

// The admission test selected by `mode`: density in Fast, dbf in Exact.
bool edf_admits(std::span<const SeqTask> tasks, TestMode mode);

/// Upper bound on C_s / T_s for a zero-laxity task (C_s, C_s, T_s) joining
/// `existing`, using deadlines in place of periods for constrained tasks.
/// Returns 1 when `existing` is empty and 0 when floor(min D / T_s) is 0.
Rational augusto_bound(std::span<const SeqTask> existing, Ticks split_period);

/// Largest zero-laxity budget C_s <= cap that keeps `existing` plus
/// (C_s, C_s, T_s) EDF-schedulable. Fast mode floors augusto_bound * T_s;
/// exact mode binary-searches the dbf test.
Ticks cd_sensitivity(std::span<const SeqTask> existing, Ticks split_period, Ticks cap,
                     TestMode mode = TestMode::Fast);

Rational total_density(std::span<const SeqTask> tasks);

}  // namespace sfs
