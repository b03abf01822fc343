#include "svl/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "svl/errors.hpp"

namespace svl {
namespace {

constexpr double kPi = std::numbers::pi;

// Relative log-gap below which two eigenvalues are treated as a degenerate
// Perron multiplet (Z2 partners in the ordered phase).
constexpr double kDegeneracyTol = 1e-8;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_kernel(const TransferKernel& kernel)
{
    const Eigen::Map<const Eigen::MatrixXd> mat(kernel.matrix.data(), kernel.m, kernel.m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("transfer-kernel eigensolver failed to converge (m = "
                             + std::to_string(kernel.m) + ", beta = "
                             + std::to_string(kernel.beta) + ")");
    }
    return solver;
}

} // namespace

EpsilonParam::EpsilonParam(double eps) : epsilon(eps)
{
    if (!(eps >= -1.0 && eps <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in [-1, 1]");
    }
}

double pair_energy(double theta, double psi, EpsilonParam eps)
{
    const double j = eps.coupling();
    const double h = eps.field();
    return -0.5 * j * (std::cos(theta - psi) - std::cos(theta + psi))
           - 0.5 * h * (std::cos(theta) + std::cos(psi));
}

int default_grid_size(double beta)
{
    const int sharp = static_cast<int>(std::ceil(8.0 * std::sqrt(beta)));
    return std::max(128, sharp);
}

TransferKernel build_kernel(EpsilonParam eps, double beta, int m)
{
    if (m < 16) {
        throw std::invalid_argument("kernel grid needs at least 16 nodes");
    }
    if (!(beta > 0.0)) {
        throw std::invalid_argument("inverse temperature must be positive");
    }
    TransferKernel kernel;
    kernel.m = m;
    kernel.beta = beta;
    kernel.weight = 2.0 * kPi / static_cast<double>(m);
    kernel.grid.resize(m);
    for (int k = 0; k < m; ++k) {
        kernel.grid[k] = -kPi + kernel.weight * static_cast<double>(k);
    }

    std::vector<double> energies(static_cast<std::size_t>(m) * m);
    double h_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const double e = pair_energy(kernel.grid[i], kernel.grid[j], eps);
            energies[static_cast<std::size_t>(i) * m + j] = e;
            energies[static_cast<std::size_t>(j) * m + i] = e;
            h_min = std::min(h_min, e);
        }
    }
    kernel.log_prefactor = -beta * h_min;

    kernel.matrix.resize(static_cast<std::size_t>(m) * m);
    for (std::size_t idx = 0; idx < kernel.matrix.size(); ++idx) {
        kernel.matrix[idx] = kernel.weight * std::exp(-beta * (energies[idx] - h_min));
    }
    return kernel;
}

double SpectralResult::lambda0() const { return std::exp(log_lambda0); }
double SpectralResult::lambda1() const { return std::exp(log_lambda1); }

SpectralResult leading_spectrum(const TransferKernel& kernel)
{
    const auto solver = solve_kernel(kernel);
    const auto& values = solver.eigenvalues(); // ascending
    const int m = kernel.m;

    const double top = values[m - 1];
    if (!(top > 0.0)) {
        throw NumericalError("leading transfer eigenvalue is not positive");
    }
    // Two largest by magnitude: the Perron root is the algebraic maximum;
    // the runner-up is either the next one down or the most negative value.
    double second = values[m - 2];
    if (m >= 2 && std::abs(values[0]) > std::abs(second)) {
        second = values[0];
    }

    SpectralResult result;
    result.log_lambda0 = std::log(top) + kernel.log_prefactor;
    if (second > 0.0) {
        result.log_lambda1 = std::log(second) + kernel.log_prefactor;
        const double gap = result.log_lambda0 - result.log_lambda1;
        result.xi = gap > 0.0 ? 1.0 / gap : std::numeric_limits<double>::infinity();
    } else {
        result.log_lambda1 = -std::numeric_limits<double>::infinity();
        result.xi = 0.0;
    }

    // First ratio after skipping numerically degenerate Perron partners.
    result.xi_fluctuation = result.xi;
    for (int k = m - 2; k >= 0; --k) {
        if (!(values[k] > 0.0)) {
            result.xi_fluctuation = 0.0;
            break;
        }
        const double gap = std::log(top / values[k]);
        if (gap > kDegeneracyTol) {
            result.xi_fluctuation = 1.0 / gap;
            break;
        }
    }

    Eigen::VectorXd v0 = solver.eigenvectors().col(m - 1);
    if (v0.sum() < 0.0) {
        v0 = -v0;
    }
    result.f0.resize(m);
    const double inv_sqrt_w = 1.0 / std::sqrt(kernel.weight);
    double mz = 0.0;
    for (int k = 0; k < m; ++k) {
        result.f0[k] = v0[k] * inv_sqrt_w;
        mz += v0[k] * v0[k] * std::abs(std::sin(kernel.grid[k]));
    }
    result.mz = mz;
    return result;
}

std::vector<std::array<double, 2>> find_maxima(EpsilonParam eps)
{
    if (eps.epsilon <= -1.0) {
        throw std::invalid_argument("find_maxima needs epsilon > -1");
    }
    if (eps.epsilon <= EpsilonParam::critical()) {
        return {{0.0, 0.0}};
    }
    double theta0;
    if (eps.epsilon == 1.0) {
        theta0 = 0.5 * kPi;
    } else {
        // Nonzero roots of 2 ((1+eps)/(1-eps)) sin(theta) = tan(theta) solve
        // f(theta) = 2 r cos(theta) - 1 = 0; f > 0 at 0+ and f(pi/2) = -1,
        // so bisection on (0, pi/2] is safe.
        const double r = (1.0 + eps.epsilon) / (1.0 - eps.epsilon);
        double lo = 0.0;
        double hi = 0.5 * kPi;
        for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (2.0 * r * std::cos(mid) - 1.0 > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        theta0 = 0.5 * (lo + hi);
    }
    return {{theta0, theta0}, {-theta0, -theta0}};
}

GaussianSpectrum gaussian_spectrum(EpsilonParam eps, double beta)
{
    if (beta < 100.0) {
        throw std::domain_error("saddle-point expansion needs beta >= 100");
    }
    const auto maxima = find_maxima(eps);
    const double theta0 = maxima.front()[0];
    const double j = eps.coupling();
    const double h = eps.field();
    const double st = std::sin(theta0);
    const double ct = std::cos(theta0);

    // g = -H; second derivatives at the (theta0, theta0) maximum.
    const double g0 = j * st * st + h * ct;
    const double g_tt = -j * st * st - 0.5 * h * ct;
    const double g_tp = j * ct * ct;
    if (std::abs(g_tp) <= 1e-12 * std::max(1.0, std::abs(g_tt))) {
        throw NumericalError("degenerate saddle: g_theta_psi vanishes (eps = 1)");
    }

    const double disc = g_tt * g_tt - g_tp * g_tp;
    const double root = std::sqrt(std::max(disc, 0.0));

    GaussianSpectrum result;
    result.theta0 = theta0;
    result.log_lambda0 =
        beta * g0 + 0.5 * std::log(2.0 * kPi / beta) - 0.5 * std::log(root - g_tt);
    const double inv_xi = std::log(1.0 + (-g_tt - g_tp + root) / g_tp);
    result.xi = inv_xi > 0.0 ? 1.0 / inv_xi : std::numeric_limits<double>::infinity();
    return result;
}

double fit_nu(std::span<const std::array<double, 2>> xi_curve)
{
    if (xi_curve.size() < 5) {
        throw std::invalid_argument("exponent fit needs at least five points");
    }
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = 0.0;
    for (const auto& [x, xi] : xi_curve) {
        if (!(x > 0.0) || !(xi > 0.0)) {
            throw std::invalid_argument("exponent fit needs positive distances and lengths");
        }
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    if (x_max / x_min < 10.0) {
        throw std::invalid_argument("exponent fit needs at least one decade of span");
    }
    const double n = static_cast<double>(xi_curve.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, xi] : xi_curve) {
        const double lx = std::log(x);
        const double ly = std::log(xi);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::abs(slope);
}

std::vector<double> correlation_function(const TransferKernel& kernel,
                                         const std::function<double(double)>& s, int l_max)
{
    if (l_max < 0) {
        throw std::invalid_argument("correlation range must be nonnegative");
    }
    const auto solver = solve_kernel(kernel);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    const int m = kernel.m;
    const double top = values[m - 1];

    // S_{0n} = sum_k v0_k s(theta_k) vn_k; the grid measure is already folded
    // into the symmetrized eigenvectors.
    Eigen::VectorXd sv0(m);
    const auto v0 = vectors.col(m - 1);
    for (int k = 0; k < m; ++k) {
        sv0[k] = v0[k] * s(kernel.grid[k]);
    }
    const Eigen::VectorXd overlaps = vectors.transpose() * sv0;

    std::vector<double> c(static_cast<std::size_t>(l_max) + 1, 0.0);
    for (int n = 0; n < m; ++n) {
        const double ratio = values[n] / top;
        const double weight = overlaps[n] * overlaps[n];
        if (weight == 0.0) {
            continue;
        }
        double r_pow = 1.0;
        for (int l = 0; l <= l_max; ++l) {
            c[static_cast<std::size_t>(l)] += weight * r_pow;
            r_pow *= ratio;
        }
    }
    return c;
}

} // namespace svl
