#pragma once

#include <utility>
#include <vector>

namespace svl {

/// Instantaneous weights of the two Hamiltonian terms: H(t) = A·H0 + B·HP.
struct SchedulePoint {
    double a;
    double b;
};

/// Time-dependent annealing protocol. The integrator only needs pointwise
/// evaluation and a duration, so equilibration runs can use a frozen (A, B)
/// pair through the same interface.
class Schedule {
public:
    virtual ~Schedule() = default;

    /// Evaluate (A(t), B(t)). Throws std::domain_error outside [0, duration].
    virtual SchedulePoint at(double t) const = 0;

    virtual double duration() const = 0;
};

enum class ScheduleForm { linear, tabulated };

/// One row of a tabulated schedule, on the normalized coordinate s = t/t_a.
struct ScheduleSample {
    double s;
    double a;
    double b;
    bool operator==(const ScheduleSample&) const = default;
};

/// Annealing schedule with the boundary conditions A(0)=1, B(0)=0,
/// A(t_a)=0, B(t_a)=1. The linear form is A = 1 - t/t_a, B = t/t_a;
/// the tabulated form interpolates linearly between samples in s.
class AnnealSchedule final : public Schedule {
public:
    static AnnealSchedule linear(double t_a);

    /// Table rows must be strictly increasing in s, start at s=0 and end at
    /// s=1, and satisfy the boundary conditions within 1e-12.
    static AnnealSchedule tabulated(double t_a, std::vector<ScheduleSample> table);

    SchedulePoint at(double t) const override;
    double duration() const override { return t_a_; }
    ScheduleForm form() const { return form_; }
    const std::vector<ScheduleSample>& table() const { return table_; }

private:
    AnnealSchedule(double t_a, ScheduleForm form, std::vector<ScheduleSample> table);

    double t_a_;
    ScheduleForm form_;
    std::vector<ScheduleSample> table_;
};

/// Constant (A, B) held for a fixed duration. Not an annealing schedule
/// (boundary conditions do not apply); used for equilibration and tests.
class FrozenSchedule final : public Schedule {
public:
    FrozenSchedule(double a, double b, double duration);

    SchedulePoint at(double t) const override;
    double duration() const override { return duration_; }

private:
    SchedulePoint point_;
    double duration_;
};

/// Free-function form of schedule evaluation.
inline SchedulePoint schedule_eval(const Schedule& schedule, double t)
{
    return schedule.at(t);
}

} // namespace svl
