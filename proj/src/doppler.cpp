#include "rydeo/doppler.hpp"

#include <cmath>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

namespace rydeo {

double thermal_velocity_sigma(double temperature_k, double mass_kg) {
    if (!(temperature_k > 0.0)) {
        throw ValidationError("thermal_velocity_sigma: temperature must be > 0");
    }
    if (!(mass_kg > 0.0)) {
        throw ValidationError("thermal_velocity_sigma: mass must be > 0");
    }
    return std::sqrt(constants::k_b * temperature_k / mass_kg);
}

double residual_wavevector(const LadderSystem& sys, BeamGeometry geometry) {
    const double kp = sys.probe_wavevector();
    const double kc = sys.coupling_wavevector();
    return geometry == BeamGeometry::counter_propagating ? std::abs(kc - kp)
                                                         : kc + kp;
}

DetuningPoint shifted_point(const LadderSystem& sys, const DetuningPoint& point,
                            double velocity, BeamGeometry geometry) {
    const double s =
        geometry == BeamGeometry::counter_propagating ? 1.0 : -1.0;
    DetuningPoint shifted = point;
    shifted.probe -= sys.probe_wavevector() * velocity;
    shifted.coupling += s * sys.coupling_wavevector() * velocity;
    return shifted;
}

VelocityGrid build_velocity_grid(double sigma_v, double step, double halfspan) {
    if (!(sigma_v > 0.0)) {
        throw ValidationError("build_velocity_grid: sigma_v must be > 0");
    }
    if (!(step > 0.0) || !(halfspan >= step)) {
        throw ValidationError("build_velocity_grid: need 0 < step <= halfspan");
    }
    const long m = static_cast<long>(std::ceil(halfspan / step - 1e-12));
    VelocityGrid grid;
    grid.sigma_v = sigma_v;
    grid.velocity.reserve(2 * m + 1);
    grid.weight.reserve(2 * m + 1);
    double sum = 0.0;
    for (long i = -m; i <= m; ++i) {
        const double v = static_cast<double>(i) * step;
        const double u = v / sigma_v;
        const double w = std::exp(-0.5 * u * u);
        grid.velocity.push_back(v);
        grid.weight.push_back(w);
        sum += w;
    }
    for (double& w : grid.weight) w /= sum;
    return grid;
}

double narrowest_velocity_feature(const LadderSystem& sys, double omega_c,
                                  BeamGeometry geometry) {
    const double one_photon = sys.gamma21() / sys.probe_wavevector();
    if (omega_c <= 0.0) return one_photon;
    const double window =
        sys.gamma31() + 0.25 * omega_c * omega_c / sys.gamma21();
    const double two_photon = window / residual_wavevector(sys, geometry);
    return std::min(one_photon, two_photon);
}

ComplexSusceptibility doppler_average_chi_on_grid(const LadderSystem& sys,
                                                  const DetuningPoint& point,
                                                  double omega_c, double density,
                                                  BeamGeometry geometry,
                                                  const VelocityGrid& grid) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < grid.velocity.size(); ++i) {
        const DetuningPoint p = shifted_point(sys, point, grid.velocity[i], geometry);
        acc += grid.weight[i] * weak_probe_chi(sys, p, omega_c, density).chi;
    }
    ComplexSusceptibility result;
    result.prefactor = chi_prefactor(sys, density);
    result.chi = acc;
    return result;
}

DopplerAverage doppler_average_chi(const LadderSystem& sys,
                                   const DetuningPoint& point, double omega_c,
                                   double density, double temperature_k,
                                   BeamGeometry geometry,
                                   const VelocityGridSpec& spec) {
    sys.validate();
    if (!(spec.tolerance > 0.0)) {
        throw ValidationError("doppler_average_chi: tolerance must be > 0");
    }
    if (!(spec.step_fraction > 0.0 && spec.step_fraction <= 1.0)) {
        throw ValidationError("doppler_average_chi: step_fraction must be in (0, 1]");
    }
    if (!(spec.span_sigmas >= 4.0)) {
        throw ValidationError("doppler_average_chi: span_sigmas must be >= 4");
    }
    const double sigma = thermal_velocity_sigma(temperature_k, sys.atomic_mass);
    const double halfspan = spec.span_sigmas * sigma;

    double step = std::min(spec.step_fraction *
                               narrowest_velocity_feature(sys, omega_c, geometry),
                           0.25 * sigma);
    step = std::min(step, halfspan / spec.min_halfspan_nodes);

    auto nodes_for = [halfspan](double h) {
        return 2 * static_cast<long>(std::ceil(halfspan / h - 1e-12)) + 1;
    };

    DopplerAverage result;
    VelocityGrid grid = build_velocity_grid(sigma, step, halfspan);
    ComplexSusceptibility prev =
        doppler_average_chi_on_grid(sys, point, omega_c, density, geometry, grid);
    while (true) {
        step *= 0.5;
        if (nodes_for(step) > spec.max_nodes) {
            std::ostringstream os;
            os << "doppler_average_chi: not converged to " << spec.tolerance
               << " within " << spec.max_nodes << " velocity nodes";
            throw ConvergenceError(os.str());
        }
        grid = build_velocity_grid(sigma, step, halfspan);
        const ComplexSusceptibility cur =
            doppler_average_chi_on_grid(sys, point, omega_c, density, geometry, grid);
        const double scale = std::max(std::abs(cur.chi), 1e-300);
        const double rel = std::abs(cur.chi - prev.chi) / scale;
        if (rel <= spec.tolerance) {
            result.value = cur;
            result.nodes = static_cast<long>(grid.velocity.size());
            result.rel_change = rel;
            result.grid = std::move(grid);
            return result;
        }
        prev = cur;
    }
}

}  // namespace rydeo
