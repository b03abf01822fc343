#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "svl/ising.hpp"

namespace svl {

/// Theoretical cumulant ratios of the kink-number distribution, stored as
/// their symbolic expressions evaluated in floating point (0.5858 and
/// 0.1335; the commonly printed decimals are 0.578 and 0.134).
inline const double kKappa21Reference = 2.0 - std::sqrt(2.0);
inline const double kKappa31Reference = 4.0 - 12.0 / std::sqrt(2.0) + 8.0 / std::sqrt(3.0);

/// sgn(sin theta) with the tie sgn(0) := +1, mapping each rotor to a binary
/// spin. The measure-zero tie must still give a well-defined configuration.
inline int binary_spin(double theta_sin) { return theta_sin >= 0.0 ? 1 : -1; }

/// Kink number (1/2) sum_i [1 - sgn(sin theta_i) sgn(sin theta_{i+1})] over
/// the N-1 chain bonds, plus the wraparound bond when periodic. Needs N >= 2.
std::int64_t count_kinks(std::span<const double> theta, Boundary boundary);

/// Order parameter (1/N) sum_i |sin theta_i|, in [0, 1].
double order_parameter(std::span<const double> theta);

/// First three cumulants with jackknife standard errors. kappa1 is the
/// sample mean, kappa2 the unbiased variance, kappa3 the bias-corrected
/// k-statistic n^2 m3 / ((n-1)(n-2)).
struct Cumulants {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;
    double k1_err = 0.0, k2_err = 0.0, k3_err = 0.0;
};

/// Cumulant ratios kappa2/kappa1 and kappa3/kappa1 with jackknife errors
/// taken on the ratio estimator itself.
struct CumulantRatios {
    double r21 = 0.0, r31 = 0.0;
    double r21_err = 0.0, r31_err = 0.0;
};

Cumulants cumulants(std::span<const std::int64_t> samples);
CumulantRatios cumulant_ratios(std::span<const std::int64_t> samples);

std::map<std::int64_t, std::int64_t> histogram_counts(std::span<const std::int64_t> samples);
std::map<std::int64_t, double> histogram(std::span<const std::int64_t> samples);

/// Order-independent kink-sample accumulator. Power sums of integer counts
/// are exact in int64, so shard merges commute exactly and worker count can
/// never change ensemble statistics. Order-parameter sums are combined with
/// compensated (Kahan) addition.
class KinkAccumulator {
public:
    void add(std::int64_t kinks, double mz);
    void merge(const KinkAccumulator& other);

    std::int64_t count() const { return n_; }
    const std::map<std::int64_t, std::int64_t>& histogram() const { return hist_; }
    const std::vector<std::int64_t>& samples() const { return samples_; }
    double mz_mean() const;

    Cumulants cumulants() const;
    CumulantRatios ratios() const;

private:
    std::int64_t n_ = 0;
    std::vector<std::int64_t> samples_;
    std::map<std::int64_t, std::int64_t> hist_;
    double mz_sum_ = 0.0;
    double mz_comp_ = 0.0;
};

/// Per-(gamma, t_a) ensemble record.
struct KinkStatistics {
    double t_a = 0.0;
    std::int64_t n_samples = 0;
    double mean_density = 0.0;
    double density_err = 0.0;
    std::map<std::int64_t, std::int64_t> histogram;
    Cumulants kappa;
    CumulantRatios ratios;
};

/// Assemble the ensemble record; n_bonds normalizes the density (N-1 open,
/// N periodic).
KinkStatistics make_kink_statistics(double t_a, std::span<const std::int64_t> samples,
                                    std::int64_t n_bonds);

} // namespace svl
