#pragma once

#include <stdexcept>

namespace svl {

/// Thermal-bath coupling of the Langevin dynamics, in units with k_B = 1.
/// The diffusion coefficient is tied to the damping by the
/// fluctuation-dissipation relation D = gamma * T.
struct BathParams {
    double gamma;
    double temperature;
    double mass;

    BathParams(double gamma_, double temperature_, double mass_ = 1.0)
        : gamma(gamma_), temperature(temperature_), mass(mass_)
    {
        if (!(gamma >= 0.0)) {
            throw std::invalid_argument("damping constant must be >= 0");
        }
        if (!(temperature >= 0.0)) {
            throw std::invalid_argument("temperature must be >= 0");
        }
        if (!(mass > 0.0)) {
            throw std::invalid_argument("rotor mass must be > 0");
        }
        if (gamma == 0.0 && temperature > 0.0) {
            throw std::invalid_argument(
                "gamma = 0 with T > 0 has no noise channel (violates fluctuation-dissipation)");
        }
    }

    double diffusion() const { return gamma * temperature; }
};

} // namespace svl
