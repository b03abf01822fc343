#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "svl/equilibrium.hpp"
#include "svl/errors.hpp"

using namespace svl;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent Perron-root oracle: power iteration with deflation on the raw
// kernel matrix, sharing nothing with the Eigen-backed solver.
std::pair<double, double> power_iteration_top_two(const TransferKernel& kernel)
{
    const int m = kernel.m;
    auto matvec = [&](const std::vector<double>& v) {
        std::vector<double> out(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            const double* row = kernel.matrix.data() + static_cast<std::size_t>(i) * m;
            for (int j = 0; j < m; ++j) {
                acc += row[j] * v[static_cast<std::size_t>(j)];
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    };
    auto normalize = [](std::vector<double>& v) {
        double norm = 0.0;
        for (double x : v) {
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (double& x : v) {
            x /= norm;
        }
        return norm;
    };

    std::vector<double> v(static_cast<std::size_t>(m), 1.0);
    normalize(v);
    double lambda0 = 0.0;
    for (int iter = 0; iter < 20000; ++iter) {
        auto w = matvec(v);
        const double norm = normalize(w);
        if (std::abs(norm - lambda0) < 1e-14 * norm && iter > 10) {
            v = w;
            lambda0 = norm;
            break;
        }
        v = std::move(w);
        lambda0 = norm;
    }

    // Deflate and iterate again for the second eigenvalue.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> u(static_cast<std::size_t>(m));
    for (double& x : u) {
        x = unit(rng);
    }
    double lambda1 = 0.0;
    for (int iter = 0; iter < 20000; ++iter) {
        double overlap = 0.0;
        for (int i = 0; i < m; ++i) {
            overlap += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < m; ++i) {
            u[static_cast<std::size_t>(i)] -= overlap * v[static_cast<std::size_t>(i)];
        }
        auto w = matvec(u);
        const double norm = normalize(w);
        if (std::abs(norm - lambda1) < 1e-14 * norm && iter > 10) {
            lambda1 = norm;
            break;
        }
        u = std::move(w);
        lambda1 = norm;
    }
    return {lambda0, lambda1};
}

} // namespace

TEST_CASE("epsilon parametrization")
{
    const EpsilonParam eps(-0.2);
    CHECK(eps.coupling() == doctest::Approx(0.4));
    CHECK(eps.field() == doctest::Approx(0.6));
    CHECK(EpsilonParam::critical() == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(EpsilonParam(1.5), std::invalid_argument);
}

TEST_CASE("pair energy values and trig identity")
{
    SUBCASE("aligned at the origin")
    {
        const EpsilonParam eps(0.4);
        CHECK(pair_energy(0.0, 0.0, eps) == doctest::Approx(-eps.field()));
    }
    SUBCASE("fully coupled bond")
    {
        const EpsilonParam eps(1.0);
        CHECK(pair_energy(kPi / 2, kPi / 2, eps) == doctest::Approx(-1.0));
    }
    SUBCASE("two algebraic forms agree")
    {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> angle(-kPi, kPi);
        const EpsilonParam eps(-0.1);
        for (int trial = 0; trial < 100; ++trial) {
            const double theta = angle(rng);
            const double psi = angle(rng);
            const double direct = -eps.coupling() * std::sin(theta) * std::sin(psi)
                                  - 0.5 * eps.field() * (std::cos(theta) + std::cos(psi));
            CHECK(std::abs(pair_energy(theta, psi, eps) - direct) < 1e-14);
        }
    }
}

TEST_CASE("kernel structure and limits")
{
    SUBCASE("symmetric positive with a simple Perron root")
    {
        const auto kernel = build_kernel(EpsilonParam(0.0), 1.0, 16);
        for (int i = 0; i < 16; ++i) {
            for (int j = 0; j < 16; ++j) {
                const double a = kernel.matrix[static_cast<std::size_t>(i) * 16 + j];
                const double b = kernel.matrix[static_cast<std::size_t>(j) * 16 + i];
                CHECK(a == b);
                CHECK(a > 0.0);
            }
        }
        const auto spectrum = leading_spectrum(kernel);
        CHECK(spectrum.log_lambda0 > spectrum.log_lambda1);
    }

    SUBCASE("infinite-temperature limit: lambda0 -> 2 pi")
    {
        const auto kernel = build_kernel(EpsilonParam(0.0), 1e-9, 64);
        const auto spectrum = leading_spectrum(kernel);
        CHECK(spectrum.lambda0() == doctest::Approx(2.0 * kPi).epsilon(1e-6));
    }

    SUBCASE("grid doubling at beta = 20 leaves lambda0 unchanged to 1e-10")
    {
        const auto coarse = leading_spectrum(build_kernel(EpsilonParam(-0.1), 20.0, 256));
        const auto fine = leading_spectrum(build_kernel(EpsilonParam(-0.1), 20.0, 512));
        CHECK(std::abs(coarse.log_lambda0 - fine.log_lambda0)
              < 1e-10 * std::abs(fine.log_lambda0));
    }

    SUBCASE("construction guards")
    {
        CHECK_THROWS_AS(build_kernel(EpsilonParam(0.0), 1.0, 8), std::invalid_argument);
        CHECK_THROWS_AS(build_kernel(EpsilonParam(0.0), 0.0, 64), std::invalid_argument);
    }

    SUBCASE("grid size policy tracks the kernel width")
    {
        CHECK(default_grid_size(1.0) == 128);
        CHECK(default_grid_size(1000.0) == static_cast<int>(std::ceil(8.0 * std::sqrt(1000.0))));
    }
}

TEST_CASE("leading spectrum against the power-iteration oracle")
{
    const auto kernel = build_kernel(EpsilonParam(-0.9), 0.1, 64);
    const auto spectrum = leading_spectrum(kernel);
    const auto [l0, l1] = power_iteration_top_two(kernel);
    CHECK(spectrum.log_lambda0
          == doctest::Approx(std::log(l0) + kernel.log_prefactor).epsilon(1e-10));
    CHECK(spectrum.log_lambda1
          == doctest::Approx(std::log(l1) + kernel.log_prefactor).epsilon(1e-8));

    // short correlations in the disordered regime
    CHECK(spectrum.xi < 1.0);
    // At beta = 0.1 the angle distribution is nearly uniform, so <|sin|>
    // sits near 2/pi regardless of phase; the order parameter is only small
    // in the *cold* paramagnet.
    CHECK(spectrum.mz == doctest::Approx(2.0 / kPi).epsilon(0.05));
    const auto cold = leading_spectrum(build_kernel(EpsilonParam(-0.9), 10.0, 128));
    CHECK(cold.mz < 0.3);

    // Perron eigenfunction strictly positive after sign normalization
    double min_f0 = 1e300;
    for (double f : spectrum.f0) {
        min_f0 = std::min(min_f0, f);
    }
    CHECK(min_f0 > 0.0);
}

TEST_CASE("order parameter jumps across the critical point at low temperature")
{
    const double beta = 1000.0;
    const int m = default_grid_size(beta);
    const auto para = leading_spectrum(build_kernel(EpsilonParam(-1.0 / 3.0 - 0.05), beta, m));
    const auto ferro = leading_spectrum(build_kernel(EpsilonParam(-1.0 / 3.0 + 0.05), beta, m));
    CHECK(para.mz < 0.1);
    CHECK(ferro.mz > 0.3);
}

TEST_CASE("find_maxima")
{
    SUBCASE("paramagnetic side has the single origin maximum")
    {
        const auto maxima = find_maxima(EpsilonParam(-0.5));
        REQUIRE(maxima.size() == 1);
        CHECK(maxima[0][0] == 0.0);
        CHECK(maxima[0][1] == 0.0);
    }

    SUBCASE("eps = 1 reaches (pi/2, pi/2)")
    {
        const auto maxima = find_maxima(EpsilonParam(1.0));
        REQUIRE(maxima.size() == 2);
        CHECK(maxima[0][0] == doctest::Approx(kPi / 2));
        CHECK(maxima[1][0] == doctest::Approx(-kPi / 2));
    }

    SUBCASE("near-critical maxima follow 3 sqrt(delta/2)")
    {
        const double delta = 1e-4;
        const auto maxima = find_maxima(EpsilonParam(-1.0 / 3.0 + delta));
        REQUIRE(maxima.size() == 2);
        const double expected = 3.0 * std::sqrt(delta / 2.0);
        CHECK(maxima[0][0] == doctest::Approx(expected).epsilon(0.01));
    }

    SUBCASE("root satisfies the stationarity equation and its closed form")
    {
        for (const double eps_val : {-0.2, 0.0, 0.3, 0.7, 0.95}) {
            const EpsilonParam eps(eps_val);
            const auto maxima = find_maxima(eps);
            REQUIRE(maxima.size() == 2);
            const double theta0 = maxima[0][0];
            const double r = eps.coupling() / eps.field();
            CHECK(2.0 * r * std::sin(theta0) - std::tan(theta0)
                  == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(theta0 == doctest::Approx(std::acos(eps.field() / (2.0 * eps.coupling())))
                                .epsilon(1e-12));
        }
    }
}

TEST_CASE("gaussian spectrum")
{
    SUBCASE("validity guards")
    {
        CHECK_THROWS_AS(gaussian_spectrum(EpsilonParam(-0.5), 50.0), std::domain_error);
        CHECK_THROWS_AS(gaussian_spectrum(EpsilonParam(1.0), 1000.0), NumericalError);
    }

    SUBCASE("matches numerical diagonalization away from the critical point")
    {
        const double beta = 1000.0;
        const auto analytic = gaussian_spectrum(EpsilonParam(-0.5), beta);
        const auto numeric =
            leading_spectrum(build_kernel(EpsilonParam(-0.5), beta, default_grid_size(beta)));
        CHECK(std::abs(analytic.xi - numeric.xi) / numeric.xi < 0.02);
        CHECK(analytic.log_lambda0 == doctest::Approx(numeric.log_lambda0).epsilon(1e-3));
    }

    SUBCASE("asymptotic prefactors on both sides of the transition")
    {
        // xi ~ c |eps - eps*|^{-1/2} with c = sqrt(2)/3 (paramagnet) and
        // c = 1/3 (ferromagnet).
        const double delta = 1e-8;
        const auto para = gaussian_spectrum(EpsilonParam(-1.0 / 3.0 - delta), 1e4);
        CHECK(para.xi * std::sqrt(delta)
              == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-3));
        const auto ferro = gaussian_spectrum(EpsilonParam(-1.0 / 3.0 + delta), 1e4);
        CHECK(ferro.xi * std::sqrt(delta) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    }
}

TEST_CASE("fit_nu")
{
    SUBCASE("exact power law")
    {
        std::vector<std::array<double, 2>> curve;
        for (int k = 0; k < 6; ++k) {
            const double x = std::pow(10.0, -3.0 + 0.5 * k);
            curve.push_back({x, 2.7 / std::sqrt(x)});
        }
        CHECK(fit_nu(curve) == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("contract checks")
    {
        std::vector<std::array<double, 2>> few{{1e-3, 1.0}, {1e-2, 2.0}, {1e-1, 3.0},
                                               {1.0, 4.0}};
        CHECK_THROWS_AS(fit_nu(few), std::invalid_argument);
        std::vector<std::array<double, 2>> narrow{
            {1.0, 1.0}, {1.5, 1.0}, {2.0, 1.0}, {2.5, 1.0}, {3.0, 1.0}};
        CHECK_THROWS_AS(fit_nu(narrow), std::invalid_argument);
    }

    SUBCASE("gaussian branch recovers nu = 1/2")
    {
        std::vector<std::array<double, 2>> curve;
        for (int k = 0; k < 9; ++k) {
            const double x = std::pow(10.0, -4.0 + 0.25 * k);
            curve.push_back({x, gaussian_spectrum(EpsilonParam(-1.0 / 3.0 - x), 1e4).xi});
        }
        CHECK(fit_nu(curve) == doctest::Approx(0.5).epsilon(0.04));
    }

    SUBCASE("numerical transfer matrix recovers nu = 1/2 outside the thermal fan")
    {
        // At finite beta the transition is rounded inside |eps - eps*| ~
        // 5.6/beta, where xi saturates; the power law lives outside it.
        const double beta = 1000.0;
        const int m = default_grid_size(beta);
        std::vector<std::array<double, 2>> curve;
        for (int k = 0; k < 9; ++k) {
            const double x = std::pow(10.0, -2.0 + 0.125 * k);
            const auto spectrum =
                leading_spectrum(build_kernel(EpsilonParam(-1.0 / 3.0 - x), beta, m));
            curve.push_back({x, spectrum.xi});
        }
        CHECK(fit_nu(curve) == doctest::Approx(0.5).epsilon(0.12));

        // Inside the fan the curve flattens: xi at 1e-3 is far below scaling.
        const auto rounded =
            leading_spectrum(build_kernel(EpsilonParam(-1.0 / 3.0 - 1e-3), beta, m));
        CHECK(rounded.xi < 0.6 * std::sqrt(2.0) / 3.0 / std::sqrt(1e-3));
    }
}

TEST_CASE("gaussian and numerical correlation lengths agree to 5% away from criticality")
{
    const double beta = 1000.0;
    const int m = default_grid_size(beta);
    for (const double eps_val : {-0.8, -0.6, -0.4, -0.25, 0.0, 0.25, 0.5}) {
        const auto numeric = leading_spectrum(build_kernel(EpsilonParam(eps_val), beta, m));
        const auto analytic = gaussian_spectrum(EpsilonParam(eps_val), beta);
        // In the ordered phase the literal lambda1 is the Z2 partner of
        // lambda0; the fluctuation length skips the degenerate multiplet.
        const double xi_numeric = numeric.xi_fluctuation;
        CHECK(std::abs(analytic.xi - xi_numeric) / xi_numeric < 0.05);
    }
}

TEST_CASE("two-point correlations decay with the spectral correlation length")
{
    const double beta = 50.0;
    const EpsilonParam eps(-0.5);
    const auto kernel = build_kernel(eps, beta, 128);
    const auto spectrum = leading_spectrum(kernel);

    SUBCASE("sin-sin correlations decay with the eq:10 length")
    {
        const auto c = correlation_function(kernel, [](double th) { return std::sin(th); }, 40);
        // sin is odd: no constant part survives.
        CHECK(std::abs(c[40]) < 1e-10);
        const int l_lo = std::max(1, static_cast<int>(std::ceil(spectrum.xi)));
        const int l_hi = std::min(40, static_cast<int>(std::ceil(5.0 * spectrum.xi)));
        REQUIRE(l_hi > l_lo);
        const double slope =
            (std::log(c[static_cast<std::size_t>(l_hi)])
             - std::log(c[static_cast<std::size_t>(l_lo)]))
            / static_cast<double>(l_hi - l_lo);
        CHECK(-1.0 / slope == doctest::Approx(spectrum.xi).epsilon(0.05));
    }

    SUBCASE("|sin| correlations converge to mz^2 and decay no slower than even states allow")
    {
        const auto c = correlation_function(kernel, [](double th) { return std::abs(std::sin(th)); }, 60);
        CHECK(c[60] == doctest::Approx(spectrum.mz * spectrum.mz).epsilon(1e-8));
        // |sin| is parity-even and does not couple to the odd lambda1 state:
        // its connected part decays strictly faster than exp(-l/xi).
        const double connected_lo = c[5] - c[60];
        const double connected_hi = c[10] - c[60];
        REQUIRE(connected_lo > 0.0);
        REQUIRE(connected_hi > 0.0);
        const double rate = -(std::log(connected_hi) - std::log(connected_lo)) / 5.0;
        CHECK(rate > 1.0 / spectrum.xi * 1.5);
    }
}
