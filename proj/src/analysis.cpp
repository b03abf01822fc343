#include "svl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svl/errors.hpp"

namespace svl {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

std::vector<DensityPoint> sorted_points(std::span<const DensityPoint> points)
{
    std::vector<DensityPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(),
              [](const DensityPoint& a, const DensityPoint& b) { return a[0] < b[0]; });
    return pts;
}

} // namespace

double kzm_alpha(int d, double nu, double z)
{
    if (d < 1 || !(nu > 0.0) || !(z > 0.0)) {
        throw std::invalid_argument("kzm_alpha needs d >= 1, nu > 0, z > 0");
    }
    return static_cast<double>(d) * nu / (1.0 + z * nu);
}

RelaxationScale relaxation_time(double gap, const BathParams& bath, DampingRegime regime)
{
    if (gap == 0.0) {
        throw std::domain_error("relaxation time diverges at zero distance");
    }
    const double a = std::abs(gap);
    switch (regime) {
    case DampingRegime::overdamped:
        return {bath.gamma / a, 2.0, bath.gamma};
    case DampingRegime::underdamped:
        return {std::sqrt(bath.mass / a), 1.0, std::sqrt(bath.mass)};
    }
    throw std::invalid_argument("unknown damping regime");
}

double freeze_out_time(double tau0, double t_a, double z, double nu)
{
    if (!(tau0 > 0.0) || !(t_a > 0.0) || !(z > 0.0) || !(nu > 0.0)) {
        throw std::invalid_argument("freeze-out scale needs positive arguments");
    }
    const double znu = z * nu;
    return std::pow(tau0 * std::pow(t_a, znu), 1.0 / (1.0 + znu));
}

PowerLawFit fit_power_law(std::span<const DensityPoint> points, double window_min,
                          double window_max)
{
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& [t, density] : points) {
        if (t < window_min || t > window_max) {
            continue;
        }
        if (!(density > 0.0)) {
            throw std::invalid_argument("nonpositive density inside the fit window");
        }
        lx.push_back(std::log(t));
        ly.push_back(std::log(density));
    }
    const std::size_t n = lx.size();
    if (n < 4) {
        throw std::invalid_argument("fit window must contain at least four points");
    }
    const auto [lo, hi] = std::minmax_element(lx.begin(), lx.end());
    if (*hi - *lo < std::log(10.0) * (1.0 - 1e-9)) {
        throw std::invalid_argument("fit window must span at least one decade");
    }

    const double nd = static_cast<double>(n);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / nd;
    const double my = sy / nd;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;

    double ssr = 0.0;
    std::vector<int> signs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        ssr += r * r;
        signs[i] = r >= 0.0 ? 1 : -1;
    }

    PowerLawFit fit;
    fit.exponent = -slope;
    fit.stderr_ = n > 2 ? std::sqrt(ssr / (nd - 2.0) / sxx) : 0.0;
    fit.window_min = window_min;
    fit.window_max = window_max;
    fit.n_points = static_cast<int>(n);
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;

    // Wald-Wolfowitz runs test on residual signs; too few runs means the
    // residuals are systematically curved rather than noisy.
    const auto n_pos = static_cast<double>(std::count(signs.begin(), signs.end(), 1));
    const double n_neg = nd - n_pos;
    if (n_pos > 0.0 && n_neg > 0.0) {
        double runs = 1.0;
        for (std::size_t i = 1; i < n; ++i) {
            runs += signs[i] != signs[i - 1] ? 1.0 : 0.0;
        }
        const double mean = 2.0 * n_pos * n_neg / nd + 1.0;
        const double var = (mean - 1.0) * (mean - 2.0) / (nd - 1.0);
        if (var > 0.0) {
            fit.curvature_flag = normal_cdf((runs - mean) / std::sqrt(var)) < 0.01;
        }
    }
    return fit;
}

Window select_scaling_window(std::span<const DensityPoint> points, double plateau_slope)
{
    const auto pts = sorted_points(points);
    if (pts.size() < 4) {
        throw NumericalError("too few points to select a scaling window");
    }

    // Exclude the fast-quench prefix: plateau or decay regime where the
    // local log-log slope has not yet dropped below plateau_slope.
    std::size_t first = 0;
    while (first + 1 < pts.size()) {
        const double slope = (std::log(pts[first + 1][1]) - std::log(pts[first][1]))
                             / (std::log(pts[first + 1][0]) - std::log(pts[first][0]));
        if (slope <= plateau_slope) {
            break;
        }
        ++first;
    }

    const double t_max = pts.back()[0];
    std::size_t start = pts.size() - 1;
    while (start > first && pts[start - 1][0] >= t_max / 10.0) {
        --start;
    }
    // Extend downward until the window is a usable fit window.
    while (start > first
           && (pts.size() - start < 4 || t_max / pts[start][0] < 10.0 * (1.0 - 1e-9))) {
        --start;
    }
    if (pts.size() - start < 4 || t_max / pts[start][0] < 10.0 * (1.0 - 1e-9)) {
        throw NumericalError("no scaling window: fewer than four slow-quench points per decade");
    }
    return {pts[start][0], t_max};
}

AlphaTable alpha_vs_gamma_curve(const std::map<double, PowerLawFit>& fits, double band_tol)
{
    if (fits.empty()) {
        throw std::invalid_argument("exponent table needs at least one fit");
    }
    AlphaTable table;
    table.rows.reserve(fits.size());
    for (const auto& [gamma, fit] : fits) {
        AlphaTableRow row;
        row.gamma = gamma;
        row.alpha = fit.exponent;
        row.stderr_ = fit.stderr_;
        row.ci_lo = fit.exponent - 1.96 * fit.stderr_;
        row.ci_hi = fit.exponent + 1.96 * fit.stderr_;
        row.in_theory_band =
            fit.exponent >= 0.25 - band_tol && fit.exponent <= 1.0 / 3.0 + band_tol;
        table.all_in_band = table.all_in_band && row.in_theory_band;
        table.rows.push_back(row);
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& prev = table.rows[i - 1];
        const auto& cur = table.rows[i];
        const double slack =
            1.96 * std::sqrt(prev.stderr_ * prev.stderr_ + cur.stderr_ * cur.stderr_);
        if (cur.alpha > prev.alpha + slack) {
            table.monotone_within_errors = false;
        }
    }
    return table;
}

} // namespace svl
