#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rydeo/atomic_data.hpp"

namespace rydeo {

// Laser detunings plus the Stark contribution, all rad/s. The two-photon
// detuning is their sum; the Stark term enters only there because the
// intermediate state is essentially unpolarizable compared to the Rydberg
// state.
struct DetuningPoint {
    double probe = 0.0;
    double coupling = 0.0;
    double stark = 0.0;

    double two_photon() const { return probe + coupling + stark; }
};

struct ComplexSusceptibility {
    std::complex<double> chi{0.0, 0.0};
    double prefactor = 0.0;  // N d_p^2 / (eps0 hbar), rad/s
};

// The single definition of the susceptibility scale shared by the analytic
// formula and the density-matrix extraction.
double chi_prefactor(const LadderSystem& sys, double density);

// First-order probe susceptibility of the ladder system,
//   chi = i C / (gamma21 - i dp + (Oc^2/4)/(gamma31 - i d2)),
// evaluated in a regularized single-fraction form so the dark-state point
// gamma31 = d2 = 0 yields exactly 0 instead of 0/0.
ComplexSusceptibility weak_probe_chi(const LadderSystem& sys,
                                     const DetuningPoint& point,
                                     double omega_c, double density);

struct DensityMatrixState {
    Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();

    double trace_error() const;           // |tr(rho) - 1|
    double hermiticity_error() const;     // max |rho - rho^dagger|
    double min_eigenvalue() const;        // of the hermitized matrix
    void validate(double tol = 1e-9) const;  // throws NumericalError
};

// Steady state of the full three-level master equation (Liouvillian
// nullspace via a 9x9 linear solve with the trace constraint). Exact at any
// probe strength; the reference the weak-probe formula is checked against.
DensityMatrixState steady_state_oracle(const LadderSystem& sys,
                                       const DetuningPoint& point,
                                       double omega_p, double omega_c);

// chi extracted from a steady state: chi = 2 C rho21 / Omega_p.
ComplexSusceptibility oracle_susceptibility(const LadderSystem& sys,
                                            const DensityMatrixState& state,
                                            double omega_p, double density);

// Largest angular rate in the problem; the integrator step must satisfy
// dt <= safety / rate.
double obe_rate_bound(const LadderSystem& sys, double omega_p, double omega_c,
                      double probe_detuning, double max_abs_two_photon);

struct ObeTrace {
    std::vector<double> times;
    std::vector<DensityMatrixState> states;
};

// Fixed-step RK4 integration of the master equation with a time-dependent
// two-photon detuning. Samples every `sample_stride` steps (and always the
// final point). Throws ConfigurationError if dt violates the step bound for
// this system, with max |two_photon(t)| supplied by the caller through
// `max_abs_two_photon` (checked, not inferred: the drive is a black box).
ObeTrace obe_time_evolution(const LadderSystem& sys, double probe_detuning,
                            const std::function<double(double)>& two_photon,
                            double max_abs_two_photon, double omega_p,
                            double omega_c, double t_begin, double t_end,
                            double dt, int sample_stride = 1,
                            const DensityMatrixState* initial = nullptr,
                            double safety = 0.05);

// Time derivative of rho under the same generator the integrator uses.
// Exposed for cross-checks against the Liouvillian assembly.
Eigen::Matrix3cd obe_derivative(const LadderSystem& sys, double probe_detuning,
                                double two_photon, double omega_p,
                                double omega_c, const Eigen::Matrix3cd& rho);

}  // namespace rydeo
