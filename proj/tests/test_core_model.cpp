#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "svl/bath.hpp"
#include "svl/ising.hpp"
#include "svl/model.hpp"
#include "svl/schedule.hpp"
#include "svl/state.hpp"

using namespace svl;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent term-by-term energy oracle: walks the Hamiltonian exactly as
// written, one term at a time, sharing no code with svl::energy.
double energy_oracle(const std::vector<double>& theta, const IsingProblem& problem, double a,
                     double b)
{
    double total = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        total += a * (-std::cos(theta[i]));
    }
    for (const auto& e : problem.edges()) {
        total += b * (-e.coupling * std::sin(theta[e.i]) * std::sin(theta[e.j]));
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
        total += b * (-problem.fields()[i] * std::sin(theta[i]));
    }
    return total;
}

IsingProblem random_problem(std::mt19937& rng, int n)
{
    std::uniform_real_distribution<double> coupling(-2.0, 2.0);
    std::uniform_real_distribution<double> field(-1.0, 1.0);
    std::bernoulli_distribution keep(0.6);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (keep(rng)) {
                edges.push_back({i, j, coupling(rng)});
            }
        }
    }
    std::vector<double> fields(static_cast<std::size_t>(n));
    for (auto& g : fields) {
        g = field(rng);
    }
    return IsingProblem(n, std::move(edges), std::move(fields));
}

std::vector<double> random_angles(std::mt19937& rng, int n, double scale = kPi)
{
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (auto& th : theta) {
        th = dist(rng);
    }
    return theta;
}

} // namespace

TEST_CASE("linear schedule boundary conditions and midpoint")
{
    const auto schedule = AnnealSchedule::linear(10.0);
    CHECK(schedule.at(0.0).a == 1.0);
    CHECK(schedule.at(0.0).b == 0.0);
    CHECK(schedule.at(10.0).a == 0.0);
    CHECK(schedule.at(10.0).b == 1.0);
    CHECK(schedule.at(5.0).a == doctest::Approx(0.5));
    CHECK(schedule.at(5.0).b == doctest::Approx(0.5));
}

TEST_CASE("schedule domain and construction errors")
{
    CHECK_THROWS_AS(AnnealSchedule::linear(0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnnealSchedule::linear(-1.0), std::invalid_argument);
    const auto schedule = AnnealSchedule::linear(1.0);
    CHECK_THROWS_AS(schedule.at(-0.001), std::domain_error);
    CHECK_THROWS_AS(schedule.at(1.001), std::domain_error);
}

TEST_CASE("tabulated schedule interpolates and validates endpoints")
{
    std::vector<ScheduleSample> table{{0.0, 1.0, 0.0}, {0.5, 0.3, 0.6}, {1.0, 0.0, 1.0}};
    const auto schedule = AnnealSchedule::tabulated(4.0, table);
    CHECK(schedule.at(0.0).a == doctest::Approx(1.0));
    CHECK(schedule.at(2.0).a == doctest::Approx(0.3));
    CHECK(schedule.at(2.0).b == doctest::Approx(0.6));
    // halfway between samples
    CHECK(schedule.at(1.0).a == doctest::Approx(0.65));
    CHECK(schedule.at(3.0).b == doctest::Approx(0.8));
    CHECK(schedule.at(4.0).b == doctest::Approx(1.0));

    std::vector<ScheduleSample> bad_endpoint{{0.0, 0.9, 0.0}, {1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(AnnealSchedule::tabulated(1.0, bad_endpoint), std::invalid_argument);
    std::vector<ScheduleSample> not_increasing{{0.0, 1.0, 0.0}, {0.5, 0.5, 0.5},
                                               {0.5, 0.4, 0.6}, {1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(AnnealSchedule::tabulated(1.0, not_increasing), std::invalid_argument);
    std::vector<ScheduleSample> short_span{{0.1, 1.0, 0.0}, {1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(AnnealSchedule::tabulated(1.0, short_span), std::invalid_argument);
}

TEST_CASE("frozen schedule holds its weights")
{
    const FrozenSchedule frozen(0.25, 0.75, 100.0);
    CHECK(frozen.at(0.0).a == 0.25);
    CHECK(frozen.at(99.0).b == 0.75);
    CHECK_THROWS_AS(frozen.at(101.0), std::domain_error);
}

TEST_CASE("uniform chain construction")
{
    const auto open = IsingProblem::uniform_chain(5, 1.5, Boundary::open);
    REQUIRE(open.edges().size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(open.edges()[i].i == i);
        CHECK(open.edges()[i].j == i + 1);
        CHECK(open.edges()[i].coupling == 1.5);
    }
    CHECK(open.bond_count() == 4);

    const auto ring = IsingProblem::uniform_chain(5, 1.0, Boundary::periodic);
    REQUIRE(ring.edges().size() == 5);
    CHECK(ring.edges().back().i == 4);
    CHECK(ring.edges().back().j == 0);
    CHECK(ring.bond_count() == 5);
}

TEST_CASE("problem validation")
{
    CHECK_THROWS_AS(IsingProblem(3, {{0, 0, 1.0}}, {0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(IsingProblem(3, {{0, 3, 1.0}}, {0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(IsingProblem(3, {{0, 1, 1.0}, {1, 0, 0.5}}, {0, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(IsingProblem(3, {{0, 1, 1.0}}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(IsingProblem::uniform_chain(2, 1.0, Boundary::periodic),
                    std::invalid_argument);
}

TEST_CASE("bath parameter validation and fluctuation-dissipation")
{
    const BathParams bath(2.0, 0.5, 1.0);
    CHECK(bath.diffusion() == doctest::Approx(1.0));
    CHECK_NOTHROW(BathParams(0.0, 0.0, 1.0)); // Hamiltonian limit
    CHECK_THROWS_AS(BathParams(0.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BathParams(-1.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BathParams(1.0, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BathParams(1.0, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("energy ground states")
{
    const auto single = IsingProblem(1, {}, {0.0});
    const PhaseSpaceState at_zero({0.0}, {0.0});
    CHECK(energy(at_zero, single, 1.0, 0.0) == doctest::Approx(-1.0));

    const auto pair = IsingProblem::uniform_chain(2, 1.0, Boundary::open);
    const PhaseSpaceState aligned({kPi / 2, kPi / 2}, {0.0, 0.0});
    CHECK(energy(aligned, pair, 0.0, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("energy matches the term-by-term oracle on random instances")
{
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const auto problem = random_problem(rng, n);
        const auto theta = random_angles(rng, n);
        const PhaseSpaceState state(theta, std::vector<double>(theta.size(), 0.0));
        const double a = 0.7;
        const double b = 1.3;
        CHECK(energy(state, problem, a, b)
              == doctest::Approx(energy_oracle(theta, problem, a, b)).epsilon(1e-12));
    }
}

TEST_CASE("gradient at stationary points")
{
    const auto single = IsingProblem(1, {}, {0.0});
    const PhaseSpaceState at_zero({0.0}, {0.0});
    CHECK(gradient(at_zero, single, 1.0, 0.0)[0] == doctest::Approx(0.0));

    const auto pair = IsingProblem::uniform_chain(2, 1.0, Boundary::open);
    const PhaseSpaceState aligned({kPi / 2, kPi / 2}, {0.0, 0.0});
    const auto grad = gradient(aligned, pair, 0.0, 1.0);
    CHECK(grad[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(grad[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gradient agrees with central finite differences")
{
    std::mt19937 rng(777);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 15); // N <= 16
        const auto problem = random_problem(rng, n);
        auto theta = random_angles(rng, n);
        const double a = 0.4;
        const double b = 1.1;
        const PhaseSpaceState state(theta, std::vector<double>(theta.size(), 0.0));
        const auto grad = gradient(state, problem, a, b);
        for (int i = 0; i < n; ++i) {
            auto plus = theta;
            auto minus = theta;
            plus[static_cast<std::size_t>(i)] += h;
            minus[static_cast<std::size_t>(i)] -= h;
            const double fd =
                (energy_oracle(plus, problem, a, b) - energy_oracle(minus, problem, a, b))
                / (2.0 * h);
            CHECK(std::abs(grad[static_cast<std::size_t>(i)] - fd)
                  <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("energy is 2pi-periodic and Z2-symmetric at g = 0")
{
    std::mt19937 rng(2024);
    const auto problem = IsingProblem::uniform_chain(6, 1.0, Boundary::open);
    const auto theta = random_angles(rng, 6);
    const PhaseSpaceState state(theta, std::vector<double>(6, 0.0));
    const double e0 = energy(state, problem, 0.3, 0.9);

    for (std::size_t i = 0; i < theta.size(); ++i) {
        auto shifted = theta;
        shifted[i] += 2.0 * kPi;
        const PhaseSpaceState s2(shifted, std::vector<double>(6, 0.0));
        CHECK(energy(s2, problem, 0.3, 0.9) == doctest::Approx(e0).epsilon(1e-12));
    }

    auto flipped = theta;
    for (auto& th : flipped) {
        th = -th;
    }
    const PhaseSpaceState s3(flipped, std::vector<double>(6, 0.0));
    CHECK(energy(s3, problem, 0.3, 0.9) == doctest::Approx(e0).epsilon(1e-13));
}

TEST_CASE("energy and gradient are edge-order independent")
{
    std::mt19937 rng(5150);
    const int n = 8;
    const auto problem = random_problem(rng, n);
    const auto theta = random_angles(rng, n);
    const PhaseSpaceState state(theta, std::vector<double>(theta.size(), 0.0));

    auto edges = problem.edges();
    std::shuffle(edges.begin(), edges.end(), rng);
    const IsingProblem permuted(n, edges, problem.fields());

    CHECK(energy(state, problem, 0.5, 1.0)
          == doctest::Approx(energy(state, permuted, 0.5, 1.0)).epsilon(1e-12));
    const auto g1 = gradient(state, problem, 0.5, 1.0);
    const auto g2 = gradient(state, permuted, 0.5, 1.0);
    for (int i = 0; i < n; ++i) {
        CHECK(g1[static_cast<std::size_t>(i)]
              == doctest::Approx(g2[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("dimension mismatches are contract errors")
{
    const auto problem = IsingProblem::uniform_chain(4, 1.0, Boundary::open);
    const PhaseSpaceState wrong({0.0, 0.0}, {0.0, 0.0});
    CHECK_THROWS_AS(energy(wrong, problem, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gradient(wrong, problem, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PhaseSpaceState({0.0, 0.0}, {0.0}), std::invalid_argument);
}
