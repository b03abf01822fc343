#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace svl {

/// Single-parameter family J = (1+eps)/2, h = (1-eps)/2 for the homogeneous
/// rotor chain; the phase transition sits at eps* = -1/3 (exact).
struct EpsilonParam {
    double epsilon;

    explicit EpsilonParam(double eps);

    double coupling() const { return 0.5 * (1.0 + epsilon); } // J
    double field() const { return 0.5 * (1.0 - epsilon); }    // h

    static constexpr double critical() { return -1.0 / 3.0; }
};

/// Bond energy H(theta, psi) = -(J/2)(cos(theta-psi) - cos(theta+psi))
///                            - (h/2)(cos theta + cos psi).
double pair_energy(double theta, double psi, EpsilonParam eps);

/// Symmetrized discretization of the transfer operator on a uniform periodic
/// grid. Entries are rescaled by exp(-beta H_min); log_prefactor restores
/// physical eigenvalue logs.
struct TransferKernel {
    int m = 0;
    double beta = 0.0;
    double weight = 0.0;
    std::vector<double> grid;
    std::vector<double> matrix; // row-major m*m, entries weight*exp(-beta (H - H_min))
    double log_prefactor = 0.0; // -beta * H_min
};

/// Uniform rectangle rule (spectrally accurate for smooth periodic kernels);
/// m >= 16, beta > 0.
TransferKernel build_kernel(EpsilonParam eps, double beta, int m);

/// Grid-size policy m = max(128, ceil(8 sqrt(beta))): the kernel sharpens
/// around its maxima with width ~ beta^{-1/2}.
int default_grid_size(double beta);

struct SpectralResult {
    double log_lambda0 = 0.0;
    double log_lambda1 = 0.0;
    /// Correlation length 1/log(lambda0/lambda1) from the two leading
    /// eigenvalues. Deep in the ferromagnetic phase lambda1 is the
    /// Z2-partner of lambda0 (splitting ~ exp(-2 beta J sin^2 theta0)); once
    /// that underflows, xi is reported as infinity.
    double xi = 0.0;
    /// Correlation length of fluctuations: the leading ratio after skipping
    /// eigenvalues numerically degenerate with lambda0 (the broken-symmetry
    /// partners). Coincides with xi wherever lambda1 is distinct.
    double xi_fluctuation = 0.0;
    /// Thermal order parameter <|sin theta|> against the Perron measure.
    double mz = 0.0;
    /// Leading eigenfunction at the grid nodes, sum_k w f0(theta_k)^2 = 1.
    std::vector<double> f0;

    double lambda0() const;
    double lambda1() const;
};

/// Top of the spectrum by dense symmetric diagonalization. Throws
/// NumericalError if the eigensolver fails to converge.
SpectralResult leading_spectrum(const TransferKernel& kernel);

/// Maxima of g = -H on the diagonal: {(0,0)} for eps <= eps*, otherwise the
/// pair +-(theta0, theta0) with theta0 the positive root of
/// 2 ((1+eps)/(1-eps)) sin theta = tan theta on (0, pi/2].
std::vector<std::array<double, 2>> find_maxima(EpsilonParam eps);

struct GaussianSpectrum {
    double log_lambda0 = 0.0;
    double xi = 0.0;
    double theta0 = 0.0;
};

/// Low-temperature saddle-point spectrum from the analytic second
/// derivatives of g at the maximum. Requires beta >= 100 (domain error
/// below); throws NumericalError at the degenerate saddle g_theta_psi = 0
/// (eps = 1).
GaussianSpectrum gaussian_spectrum(EpsilonParam eps, double beta);

/// Log-log least-squares slope magnitude of a (|eps - eps*|, xi) curve;
/// needs >= 5 points spanning at least one decade.
double fit_nu(std::span<const std::array<double, 2>> xi_curve);

/// Two-point correlation C_{s,s}(l) for l = 0..l_max, from the full spectrum
/// of the discretized transfer operator. C(infinity) equals <f0|s|f0>^2.
std::vector<double> correlation_function(const TransferKernel& kernel,
                                         const std::function<double(double)>& s, int l_max);

} // namespace svl
