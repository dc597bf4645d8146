#include "dvac/params.hpp"

#include "dvac/errors.hpp"

#include <cmath>
#include <sstream>

namespace dvac {

void PhysicalParams::validate() const {
    if (!std::isfinite(L) || !(L > 0.0)) {
        throw ConfigError("box length L must be finite and positive");
    }
    if (!std::isfinite(m) || !(m > 0.0)) {
        throw ConfigError("mass m must be finite and positive");
    }
    if (!std::isfinite(q)) {
        throw ConfigError("coupling q must be finite");
    }
    if (w < 1) {
        throw ConfigError("drive harmonic w must be a positive integer");
    }
    if (!(k_w() < m)) {
        std::ostringstream os;
        os.precision(17);
        os << "drive wavenumber k_w = 2*pi*w/L = " << k_w() << " must be below the mass m = " << m
           << " (require k_w < m)";
        throw ConfigError(os.str());
    }
}

} // namespace dvac
