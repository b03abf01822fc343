#include "svl/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svl {
namespace {

constexpr double kBoundaryTol = 1e-12;

void check_time(double t, double t_a)
{
    if (!(t >= 0.0 && t <= t_a)) {
        throw std::domain_error("schedule evaluated at t=" + std::to_string(t)
                                + " outside [0, " + std::to_string(t_a) + "]");
    }
}

} // namespace

AnnealSchedule::AnnealSchedule(double t_a, ScheduleForm form, std::vector<ScheduleSample> table)
    : t_a_(t_a), form_(form), table_(std::move(table))
{
}

AnnealSchedule AnnealSchedule::linear(double t_a)
{
    if (!(t_a > 0.0)) {
        throw std::invalid_argument("annealing time must be positive");
    }
    return AnnealSchedule(t_a, ScheduleForm::linear, {});
}

AnnealSchedule AnnealSchedule::tabulated(double t_a, std::vector<ScheduleSample> table)
{
    if (!(t_a > 0.0)) {
        throw std::invalid_argument("annealing time must be positive");
    }
    if (table.size() < 2) {
        throw std::invalid_argument("tabulated schedule needs at least two samples");
    }
    for (std::size_t k = 1; k < table.size(); ++k) {
        if (!(table[k].s > table[k - 1].s)) {
            throw std::invalid_argument("tabulated schedule samples must be strictly increasing in s");
        }
    }
    const auto& first = table.front();
    const auto& last = table.back();
    if (std::abs(first.s) > kBoundaryTol || std::abs(last.s - 1.0) > kBoundaryTol) {
        throw std::invalid_argument("tabulated schedule must span s in [0, 1]");
    }
    if (std::abs(first.a - 1.0) > kBoundaryTol || std::abs(first.b) > kBoundaryTol
        || std::abs(last.a) > kBoundaryTol || std::abs(last.b - 1.0) > kBoundaryTol) {
        throw std::invalid_argument(
            "tabulated schedule violates boundary conditions A(0)=1, B(0)=0, A(t_a)=0, B(t_a)=1");
    }
    return AnnealSchedule(t_a, ScheduleForm::tabulated, std::move(table));
}

SchedulePoint AnnealSchedule::at(double t) const
{
    check_time(t, t_a_);
    const double s = t / t_a_;
    if (form_ == ScheduleForm::linear) {
        return {1.0 - s, s};
    }
    // Binary search for the bracketing samples, then interpolate in s.
    std::size_t lo = 0;
    std::size_t hi = table_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (table_[mid].s <= s) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const auto& l = table_[lo];
    const auto& r = table_[hi];
    const double w = (s - l.s) / (r.s - l.s);
    return {l.a + w * (r.a - l.a), l.b + w * (r.b - l.b)};
}

FrozenSchedule::FrozenSchedule(double a, double b, double duration)
    : point_{a, b}, duration_(duration)
{
    if (!(duration > 0.0)) {
        throw std::invalid_argument("frozen schedule duration must be positive");
    }
}

SchedulePoint FrozenSchedule::at(double t) const
{
    check_time(t, duration_);
    return point_;
}

} // namespace svl
