// Compiled with the same fast FP flags as the integrator so the Box-Muller
// transform loops vectorize. Uniforms are drawn on (0, 1], so log() stays
// finite.

#include "svl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace svl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

void NoiseStream::box_muller(double& z0, double& z1)
{
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    z0 = r * std::cos(kTwoPi * u2);
    z1 = r * std::sin(kTwoPi * u2);
}

void NoiseStream::fill_gaussian(std::span<double> out)
{
    std::size_t i = 0;
    if (have_spare_ && i < out.size()) {
        out[i++] = spare_;
        have_spare_ = false;
    }

    constexpr std::size_t kBlock = 64; // pairs per block
    double u1[kBlock], u2[kBlock], radius[kBlock], c[kBlock], s[kBlock];
    while (out.size() - i >= 2) {
        const std::size_t pairs = std::min(kBlock, (out.size() - i) / 2);
        for (std::size_t k = 0; k < pairs; ++k) {
            u1[k] = uniform();
            u2[k] = uniform();
        }
        for (std::size_t k = 0; k < pairs; ++k) {
            radius[k] = std::sqrt(-2.0 * std::log(u1[k]));
        }
        for (std::size_t k = 0; k < pairs; ++k) {
            c[k] = std::cos(kTwoPi * u2[k]);
        }
        for (std::size_t k = 0; k < pairs; ++k) {
            s[k] = std::sin(kTwoPi * u2[k]);
        }
        for (std::size_t k = 0; k < pairs; ++k) {
            out[i + 2 * k] = radius[k] * c[k];
            out[i + 2 * k + 1] = radius[k] * s[k];
        }
        i += 2 * pairs;
    }

    if (i < out.size()) {
        double z1;
        box_muller(out[i], z1);
        spare_ = z1;
        have_spare_ = true;
    }
}

} // namespace svl
