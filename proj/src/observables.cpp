#include "svl/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace svl {
namespace {

struct PowerSums {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double n = 0.0;
};

// k-statistics from raw power sums. Counts are small integers, so the sums
// are exact and the central-moment subtraction loses no precision that
// matters at ensemble scale.
double k1_of(const PowerSums& s) { return s.s1 / s.n; }

double k2_of(const PowerSums& s)
{
    const double mu = s.s1 / s.n;
    const double m2 = s.s2 / s.n - mu * mu;
    return s.n / (s.n - 1.0) * m2;
}

double k3_of(const PowerSums& s)
{
    const double mu = s.s1 / s.n;
    const double m3 = s.s3 / s.n - 3.0 * mu * (s.s2 / s.n) + 2.0 * mu * mu * mu;
    return s.n * s.n * m3 / ((s.n - 1.0) * (s.n - 2.0));
}

PowerSums total_sums(std::span<const std::int64_t> samples)
{
    std::int64_t s1 = 0, s2 = 0, s3 = 0;
    for (std::int64_t x : samples) {
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
    }
    return {static_cast<double>(s1), static_cast<double>(s2), static_cast<double>(s3),
            static_cast<double>(samples.size())};
}

PowerSums leave_one_out(const PowerSums& total, std::int64_t x)
{
    const double xd = static_cast<double>(x);
    return {total.s1 - xd, total.s2 - xd * xd, total.s3 - xd * xd * xd, total.n - 1.0};
}

// Jackknife standard error of an estimator over leave-one-out replicates.
template <class Estimator>
double jackknife_err(std::span<const std::int64_t> samples, const PowerSums& total,
                     Estimator&& est)
{
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (std::int64_t x : samples) {
        mean += est(leave_one_out(total, x));
    }
    mean /= n;
    double ss = 0.0;
    for (std::int64_t x : samples) {
        const double d = est(leave_one_out(total, x)) - mean;
        ss += d * d;
    }
    return std::sqrt((n - 1.0) / n * ss);
}

} // namespace

std::int64_t count_kinks(std::span<const double> theta, Boundary boundary)
{
    const std::size_t n = theta.size();
    if (n < 2) {
        throw std::invalid_argument("kink counting needs at least two rotors");
    }
    std::int64_t flips = 0;
    int prev = binary_spin(std::sin(theta[0]));
    const int first = prev;
    for (std::size_t i = 1; i < n; ++i) {
        const int cur = binary_spin(std::sin(theta[i]));
        flips += (cur != prev) ? 1 : 0;
        prev = cur;
    }
    if (boundary == Boundary::periodic) {
        flips += (first != prev) ? 1 : 0;
    }
    return flips;
}

double order_parameter(std::span<const double> theta)
{
    if (theta.empty()) {
        throw std::invalid_argument("order parameter needs at least one rotor");
    }
    double sum = 0.0;
    for (double th : theta) {
        sum += std::abs(std::sin(th));
    }
    return sum / static_cast<double>(theta.size());
}

Cumulants cumulants(std::span<const std::int64_t> samples)
{
    const std::size_t n = samples.size();
    if (n < 2) {
        throw std::invalid_argument("cumulants need at least two samples");
    }
    if (n < 3) {
        throw std::invalid_argument("the third cumulant needs at least three samples");
    }
    const PowerSums total = total_sums(samples);
    Cumulants out;
    out.k1 = k1_of(total);
    out.k2 = k2_of(total);
    out.k3 = k3_of(total);
    out.k1_err = jackknife_err(samples, total, k1_of);
    if (n >= 3) {
        out.k2_err = jackknife_err(samples, total, k2_of);
    }
    if (n >= 4) {
        out.k3_err = jackknife_err(samples, total, k3_of);
    }
    return out;
}

CumulantRatios cumulant_ratios(std::span<const std::int64_t> samples)
{
    const std::size_t n = samples.size();
    if (n < 3) {
        throw std::invalid_argument("cumulant ratios need at least three samples");
    }
    const PowerSums total = total_sums(samples);
    CumulantRatios out;
    out.r21 = k2_of(total) / k1_of(total);
    out.r31 = k3_of(total) / k1_of(total);
    if (n >= 4) {
        out.r21_err = jackknife_err(samples, total,
                                    [](const PowerSums& s) { return k2_of(s) / k1_of(s); });
        out.r31_err = jackknife_err(samples, total,
                                    [](const PowerSums& s) { return k3_of(s) / k1_of(s); });
    }
    return out;
}

std::map<std::int64_t, std::int64_t> histogram_counts(std::span<const std::int64_t> samples)
{
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t x : samples) {
        ++counts[x];
    }
    return counts;
}

std::map<std::int64_t, double> histogram(std::span<const std::int64_t> samples)
{
    std::map<std::int64_t, double> freq;
    if (samples.empty()) {
        return freq;
    }
    const double n = static_cast<double>(samples.size());
    for (const auto& [value, count] : histogram_counts(samples)) {
        freq[value] = static_cast<double>(count) / n;
    }
    return freq;
}

void KinkAccumulator::add(std::int64_t kinks, double mz)
{
    ++n_;
    samples_.push_back(kinks);
    ++hist_[kinks];
    // Kahan update
    const double y = mz - mz_comp_;
    const double s = mz_sum_ + y;
    mz_comp_ = (s - mz_sum_) - y;
    mz_sum_ = s;
}

void KinkAccumulator::merge(const KinkAccumulator& other)
{
    n_ += other.n_;
    samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
    for (const auto& [value, count] : other.hist_) {
        hist_[value] += count;
    }
    for (double part : {other.mz_sum_, -other.mz_comp_}) {
        const double y = part - mz_comp_;
        const double s = mz_sum_ + y;
        mz_comp_ = (s - mz_sum_) - y;
        mz_sum_ = s;
    }
}

double KinkAccumulator::mz_mean() const
{
    return n_ > 0 ? mz_sum_ / static_cast<double>(n_) : 0.0;
}

Cumulants KinkAccumulator::cumulants() const { return svl::cumulants(samples_); }

CumulantRatios KinkAccumulator::ratios() const { return svl::cumulant_ratios(samples_); }

KinkStatistics make_kink_statistics(double t_a, std::span<const std::int64_t> samples,
                                    std::int64_t n_bonds)
{
    if (n_bonds < 1) {
        throw std::invalid_argument("density normalization needs at least one bond");
    }
    KinkStatistics stats;
    stats.t_a = t_a;
    stats.n_samples = static_cast<std::int64_t>(samples.size());
    stats.histogram = histogram_counts(samples);
    stats.kappa = cumulants(samples);
    stats.ratios = cumulant_ratios(samples);
    stats.mean_density = stats.kappa.k1 / static_cast<double>(n_bonds);
    stats.density_err = stats.kappa.k1_err / static_cast<double>(n_bonds);
    return stats;
}

} // namespace svl
