#include "rydeo/rydberg.hpp"

#include <cmath>
#include <sstream>

#include "rydeo/errors.hpp"

namespace rydeo {

double effective_quantum_number(int n, double quantum_defect) {
    if (quantum_defect < 0.0) {
        throw ValidationError("effective_quantum_number: quantum_defect must be >= 0");
    }
    if (static_cast<double>(n) <= quantum_defect) {
        std::ostringstream os;
        os << "effective_quantum_number: n = " << n
           << " does not exceed quantum defect " << quantum_defect;
        throw ValidationError(os.str());
    }
    return static_cast<double>(n) - quantum_defect;
}

double scaled_polarizability(double alpha_ref, double n_star_ref, double n_star) {
    if (alpha_ref <= 0.0 || n_star_ref <= 0.0 || n_star <= 0.0) {
        throw ValidationError("scaled_polarizability: arguments must be > 0");
    }
    return alpha_ref * std::pow(n_star / n_star_ref, 7.0);
}

double scaled_coupling_dipole(double dipole_ref, double n_star_ref, double n_star) {
    if (dipole_ref <= 0.0 || n_star_ref <= 0.0 || n_star <= 0.0) {
        throw ValidationError("scaled_coupling_dipole: arguments must be > 0");
    }
    return dipole_ref * std::pow(n_star / n_star_ref, -1.5);
}

RydbergLevel make_rydberg_level(int n, double quantum_defect,
                                double alpha_ref, double n_star_ref) {
    RydbergLevel level;
    level.n = n;
    level.quantum_defect = quantum_defect;
    level.n_star = effective_quantum_number(n, quantum_defect);
    level.polarizability = scaled_polarizability(alpha_ref, n_star_ref, level.n_star);
    return level;
}

double stark_shift(double polarizability, double field_v_per_m) {
    return -0.5 * polarizability * field_v_per_m * field_v_per_m;
}

}  // namespace rydeo
