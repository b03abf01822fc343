#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "svl/bath.hpp"

namespace svl {

/// alpha = d nu / (1 + z nu); the KZM defect-density exponent.
double kzm_alpha(int d, double nu, double z);

struct KZMPrediction {
    int d;
    double nu;
    double z;
    double alpha;
    double tau0;

    KZMPrediction(int d_, double nu_, double z_, double tau0_)
        : d(d_), nu(nu_), z(z_), alpha(kzm_alpha(d_, nu_, z_)), tau0(tau0_)
    {
    }
};

enum class DampingRegime { overdamped, underdamped };

/// Relaxation time of the linearized chain at distance |h - 2J| from the
/// critical point: gamma/|h-2J| in the overdamped regime (z = 2, tau0 =
/// gamma), sqrt(m/|h-2J|) in the underdamped regime (z = 1, tau0 = sqrt(m)).
struct RelaxationScale {
    double tau;
    double z;
    double tau0;
};

RelaxationScale relaxation_time(double gap, const BathParams& bath, DampingRegime regime);

/// Freeze-out scale (tau0 t_a^{z nu})^{1/(1 + z nu)}, prefactor 1 by
/// convention.
double freeze_out_time(double tau0, double t_a, double z, double nu);

using DensityPoint = std::array<double, 2>; // (t_a, kink density)

struct PowerLawFit {
    double exponent = 0.0; // alpha in density ~ t_a^{-alpha}
    double stderr_ = 0.0;
    double window_min = 0.0;
    double window_max = 0.0;
    int n_points = 0;
    double r_squared = 0.0;
    /// Residual runs-test p < 0.01: the window shows curvature. A flag, not
    /// an error.
    bool curvature_flag = false;
};

/// Unweighted OLS on (ln t_a, ln density) over the window. The window must
/// hold at least four points spanning a decade; nonpositive densities in the
/// window are a contract error.
PowerLawFit fit_power_law(std::span<const DensityPoint> points, double window_min,
                          double window_max);

struct Window {
    double t_min;
    double t_max;
};

/// Default fit window: the largest-t_a decade, extended downward until it
/// holds four points and a full decade. Fast-quench points whose adjacent
/// log-log slope exceeds plateau_slope are excluded first (plateau/decay
/// regime; only slow quenches scale).
Window select_scaling_window(std::span<const DensityPoint> points, double plateau_slope = -0.05);

struct AlphaTableRow {
    double gamma;
    double alpha;
    double stderr_;
    double ci_lo;
    double ci_hi;
    bool in_theory_band;
};

struct AlphaTable {
    std::vector<AlphaTableRow> rows; // ascending gamma
    bool monotone_within_errors = true;
    bool all_in_band = true;
};

/// Exponent-vs-damping table with 95% confidence intervals. Checks that
/// alpha(gamma) is non-increasing within error bars and that every exponent
/// lies inside [1/4 - band_tol, 1/3 + band_tol].
AlphaTable alpha_vs_gamma_curve(const std::map<double, PowerLawFit>& fits,
                                double band_tol = 0.05);

} // namespace svl
