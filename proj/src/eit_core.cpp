#include "rydeo/eit_core.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"

namespace rydeo {

using cd = std::complex<double>;
namespace {
constexpr cd I{0.0, 1.0};
}

double chi_prefactor(const LadderSystem& sys, double density) {
    if (density <= 0.0) throw ValidationError("chi_prefactor: density must be > 0");
    return density * sys.dipole_probe * sys.dipole_probe /
           (constants::eps0 * constants::hbar);
}

ComplexSusceptibility weak_probe_chi(const LadderSystem& sys,
                                     const DetuningPoint& point,
                                     double omega_c, double density) {
    if (omega_c < 0.0) throw ValidationError("weak_probe_chi: omega_c must be >= 0");
    const double prefactor = chi_prefactor(sys, density);
    const cd d1 = cd(sys.gamma21(), -point.probe);

    ComplexSusceptibility result;
    result.prefactor = prefactor;
    if (omega_c == 0.0) {
        result.chi = I * prefactor / d1;
        return result;
    }
    // Single-fraction form: i C (g31 - i d2) / ((g21 - i dp)(g31 - i d2) + Oc^2/4).
    // The denominator cannot vanish for gamma21 > 0, and the dark-state point
    // g31 = d2 = 0 gives exactly zero.
    const cd d2 = cd(sys.gamma31(), -point.two_photon());
    const cd den = d1 * d2 + 0.25 * omega_c * omega_c;
    if (den == cd(0.0, 0.0)) {
        throw NumericalError("weak_probe_chi: singular response denominator");
    }
    result.chi = I * prefactor * d2 / den;
    return result;
}

double DensityMatrixState::trace_error() const {
    return std::abs(rho.trace() - cd(1.0, 0.0));
}

double DensityMatrixState::hermiticity_error() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrixState::min_eigenvalue() const {
    Eigen::Matrix3cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(herm,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrixState::validate(double tol) const {
    std::ostringstream os;
    if (trace_error() > tol) {
        os << "density matrix trace off by " << trace_error();
        throw NumericalError(os.str());
    }
    if (hermiticity_error() > tol) {
        os << "density matrix hermiticity off by " << hermiticity_error();
        throw NumericalError(os.str());
    }
    if (min_eigenvalue() < -tol) {
        os << "density matrix has negative eigenvalue " << min_eigenvalue();
        throw NumericalError(os.str());
    }
}

namespace {

// Rotating-frame Hamiltonian (units of rad/s):
//   H = -[ 0      Op/2   0
//          Op/2   dp     Oc/2
//          0      Oc/2   d2 ]
// so the weak-probe coherence comes out as rho21 = +i(Op/2)/(g21 - i dp + ...).
Eigen::Matrix3cd hamiltonian(double omega_p, double omega_c, double dp, double d2) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = h(1, 0) = -0.5 * omega_p;
    h(1, 2) = h(2, 1) = -0.5 * omega_c;
    h(1, 1) = -dp;
    h(2, 2) = -d2;
    return h;
}

struct CollapseSet {
    // Amplitude matrices c_k: population decay 2->1 and 3->1 plus pure
    // dephasing projectors on |2> and |3>.
    Eigen::Matrix3cd ops[4];
    int count = 0;
};

CollapseSet collapse_operators(const LadderSystem& sys) {
    CollapseSet set;
    auto add = [&set](int i, int j, double rate) {
        if (rate <= 0.0) return;
        Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();
        c(i, j) = std::sqrt(rate);
        set.ops[set.count++] = c;
    };
    add(0, 1, sys.gamma2);
    add(0, 2, sys.gamma3);
    add(1, 1, 2.0 * sys.deph12);
    add(2, 2, 2.0 * sys.deph13);
    return set;
}

int vec_index(int i, int j) { return 3 * i + j; }

// Liouvillian over vec(rho) with row-major stacking, rho_ij -> x[3i+j].
Eigen::Matrix<cd, 9, 9> liouvillian(const LadderSystem& sys,
                                    const DetuningPoint& point, double omega_p,
                                    double omega_c) {
    Eigen::Matrix<cd, 9, 9> lv = Eigen::Matrix<cd, 9, 9>::Zero();
    const Eigen::Matrix3cd h =
        hamiltonian(omega_p, omega_c, point.probe, point.two_photon());

    // -i (H rho - rho H)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                lv(vec_index(i, j), vec_index(k, j)) -= I * h(i, k);
                lv(vec_index(i, j), vec_index(i, k)) += I * h(k, j);
            }

    // sum_k  c rho c^dag - (c^dag c rho + rho c^dag c)/2
    const CollapseSet set = collapse_operators(sys);
    for (int m = 0; m < set.count; ++m) {
        const Eigen::Matrix3cd& c = set.ops[m];
        const Eigen::Matrix3cd cc = c.adjoint() * c;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    for (int l = 0; l < 3; ++l)
                        lv(vec_index(i, j), vec_index(k, l)) +=
                            c(i, k) * std::conj(c(j, l));
                    lv(vec_index(i, j), vec_index(k, j)) -= 0.5 * cc(i, k);
                    lv(vec_index(i, j), vec_index(i, k)) -= 0.5 * cc(k, j);
                }
    }
    return lv;
}

}  // namespace

DensityMatrixState steady_state_oracle(const LadderSystem& sys,
                                       const DetuningPoint& point,
                                       double omega_p, double omega_c) {
    sys.validate();
    if (omega_p < 0.0 || omega_c < 0.0) {
        throw ValidationError("steady_state_oracle: Rabi frequencies must be >= 0");
    }
    Eigen::Matrix<cd, 9, 9> lv = liouvillian(sys, point, omega_p, omega_c);

    // Replace the rho11 equation with the trace constraint, weighted like the
    // physical rows (rates ~ 1e7 rad/s) so the QR solve does not sacrifice it.
    const double row_scale = std::max(lv.norm(), 1.0);
    Eigen::Matrix<cd, 9, 1> b = Eigen::Matrix<cd, 9, 1>::Zero();
    for (int k = 0; k < 9; ++k) lv(0, k) = cd(0.0, 0.0);
    lv(0, vec_index(0, 0)) = cd(row_scale, 0.0);
    lv(0, vec_index(1, 1)) = cd(row_scale, 0.0);
    lv(0, vec_index(2, 2)) = cd(row_scale, 0.0);
    b(0) = cd(row_scale, 0.0);

    Eigen::ColPivHouseholderQR<Eigen::Matrix<cd, 9, 9>> qr(lv);
    const Eigen::Matrix<cd, 9, 1> x = qr.solve(b);
    const double residual = (lv * x - b).norm();
    if (!x.allFinite() || residual > 1e-8 * lv.norm()) {
        throw DegeneracyError(
            "steady_state_oracle: Liouvillian is singular, the steady state "
            "is not unique for these rates and detunings");
    }

    DensityMatrixState state;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) state.rho(i, j) = x(vec_index(i, j));
    state.rho = 0.5 * (state.rho + state.rho.adjoint().eval());
    state.rho /= state.rho.trace().real();  // pin the trace exactly
    state.validate(1e-8);
    return state;
}

ComplexSusceptibility oracle_susceptibility(const LadderSystem& sys,
                                            const DensityMatrixState& state,
                                            double omega_p, double density) {
    if (omega_p <= 0.0) {
        throw ValidationError("oracle_susceptibility: omega_p must be > 0");
    }
    ComplexSusceptibility result;
    result.prefactor = chi_prefactor(sys, density);
    result.chi = 2.0 * result.prefactor * state.rho(1, 0) / omega_p;
    return result;
}

double obe_rate_bound(const LadderSystem& sys, double omega_p, double omega_c,
                      double probe_detuning, double max_abs_two_photon) {
    if (!(max_abs_two_photon >= 0.0) || !std::isfinite(max_abs_two_photon)) {
        throw ValidationError("obe_rate_bound: max_abs_two_photon must be finite and >= 0");
    }
    double rate = sys.gamma2;
    rate = std::max(rate, sys.gamma3);
    rate = std::max(rate, sys.gamma32());
    rate = std::max(rate, std::abs(omega_p));
    rate = std::max(rate, std::abs(omega_c));
    rate = std::max(rate, std::abs(probe_detuning));
    rate = std::max(rate, max_abs_two_photon);
    rate = std::max(rate, std::abs(probe_detuning) + max_abs_two_photon);
    return rate;
}

namespace {

// Hermitian state compressed to its independent entries; the integrator works
// on this to keep the inner loop short.
struct ObeState {
    double p1, p2, p3;
    cd c21, c31, c32;
};

ObeState from_matrix(const Eigen::Matrix3cd& rho) {
    return ObeState{rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
                    rho(1, 0),        rho(2, 0),        rho(2, 1)};
}

Eigen::Matrix3cd to_matrix(const ObeState& s) {
    Eigen::Matrix3cd rho;
    rho(0, 0) = s.p1;
    rho(1, 1) = s.p2;
    rho(2, 2) = s.p3;
    rho(1, 0) = s.c21;
    rho(0, 1) = std::conj(s.c21);
    rho(2, 0) = s.c31;
    rho(0, 2) = std::conj(s.c31);
    rho(2, 1) = s.c32;
    rho(1, 2) = std::conj(s.c32);
    return rho;
}

struct ObeRates {
    double g2, g3, g21, g31, g32, a, b;  // a = Op/2, b = Oc/2
};

inline ObeState derivative(const ObeRates& r, double dp, double d2,
                           const ObeState& s) {
    const double im21 = s.c21.imag();
    const double im32 = s.c32.imag();
    ObeState d;
    d.p1 = r.g2 * s.p2 + r.g3 * s.p3 - 2.0 * r.a * im21;
    d.p2 = 2.0 * r.a * im21 - 2.0 * r.b * im32 - r.g2 * s.p2;
    d.p3 = 2.0 * r.b * im32 - r.g3 * s.p3;
    d.c21 = I * r.a * (s.p1 - s.p2) + cd(-r.g21, dp) * s.c21 + I * r.b * s.c31;
    d.c31 = I * r.b * s.c21 + cd(-r.g31, d2) * s.c31 - I * r.a * s.c32;
    d.c32 = I * r.b * (s.p2 - s.p3) + cd(-r.g32, d2 - dp) * s.c32 - I * r.a * s.c31;
    return d;
}

inline ObeState axpy(const ObeState& y, double h, const ObeState& k) {
    return ObeState{y.p1 + h * k.p1,   y.p2 + h * k.p2,   y.p3 + h * k.p3,
                    y.c21 + h * k.c21, y.c31 + h * k.c31, y.c32 + h * k.c32};
}

}  // namespace

Eigen::Matrix3cd obe_derivative(const LadderSystem& sys, double probe_detuning,
                                double two_photon, double omega_p,
                                double omega_c, const Eigen::Matrix3cd& rho) {
    const ObeRates r{sys.gamma2,    sys.gamma3,    sys.gamma21(),
                     sys.gamma31(), sys.gamma32(), 0.5 * omega_p,
                     0.5 * omega_c};
    return to_matrix(derivative(r, probe_detuning, two_photon, from_matrix(rho)));
}

ObeTrace obe_time_evolution(const LadderSystem& sys, double probe_detuning,
                            const std::function<double(double)>& two_photon,
                            double max_abs_two_photon, double omega_p,
                            double omega_c, double t_begin, double t_end,
                            double dt, int sample_stride,
                            const DensityMatrixState* initial, double safety) {
    sys.validate();
    if (!(t_end > t_begin)) {
        throw ValidationError("obe_time_evolution: t_end must exceed t_begin");
    }
    if (!(dt > 0.0)) throw ValidationError("obe_time_evolution: dt must be > 0");
    if (sample_stride < 1) {
        throw ValidationError("obe_time_evolution: sample_stride must be >= 1");
    }
    if (!(safety > 0.0 && safety <= 0.2)) {
        throw ValidationError("obe_time_evolution: safety must be in (0, 0.2]");
    }
    const double rate =
        obe_rate_bound(sys, omega_p, omega_c, probe_detuning, max_abs_two_photon);
    if (dt * rate > safety * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "obe_time_evolution: dt = " << dt << " s violates the step bound "
           << safety / rate << " s for the fastest rate " << rate << " rad/s";
        throw ConfigurationError(os.str());
    }

    const double span = t_end - t_begin;
    // Snap to an integer step count; callers that pass dt = span/n get
    // exactly n steps so strided samples land on their grid.
    const double ratio = span / dt;
    long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6) {
        steps = static_cast<long>(std::ceil(ratio - 1e-9));
    }
    steps = std::max(1L, steps);
    const double h = span / static_cast<double>(steps);

    const ObeRates r{sys.gamma2,    sys.gamma3,    sys.gamma21(),
                     sys.gamma31(), sys.gamma32(), 0.5 * omega_p,
                     0.5 * omega_c};

    ObeState y;
    if (initial) {
        initial->validate(1e-6);
        y = from_matrix(initial->rho);
    } else {
        y = ObeState{1.0, 0.0, 0.0, cd(0.0), cd(0.0), cd(0.0)};
    }

    ObeTrace trace;
    const long expected = steps / sample_stride + 2;
    trace.times.reserve(expected);
    trace.states.reserve(expected);
    auto record = [&](double t, const ObeState& s) {
        trace.times.push_back(t);
        DensityMatrixState st;
        st.rho = to_matrix(s);
        trace.states.push_back(st);
    };

    record(t_begin, y);
    for (long n = 0; n < steps; ++n) {
        const double t = t_begin + h * static_cast<double>(n);
        const double d2_0 = two_photon(t);
        const double d2_h = two_photon(t + 0.5 * h);
        const double d2_1 = two_photon(t + h);
        const ObeState k1 = derivative(r, probe_detuning, d2_0, y);
        const ObeState k2 = derivative(r, probe_detuning, d2_h, axpy(y, 0.5 * h, k1));
        const ObeState k3 = derivative(r, probe_detuning, d2_h, axpy(y, 0.5 * h, k2));
        const ObeState k4 = derivative(r, probe_detuning, d2_1, axpy(y, h, k3));
        y.p1 += h / 6.0 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
        y.p2 += h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
        y.p3 += h / 6.0 * (k1.p3 + 2.0 * k2.p3 + 2.0 * k3.p3 + k4.p3);
        y.c21 += h / 6.0 * (k1.c21 + 2.0 * k2.c21 + 2.0 * k3.c21 + k4.c21);
        y.c31 += h / 6.0 * (k1.c31 + 2.0 * k2.c31 + 2.0 * k3.c31 + k4.c31);
        y.c32 += h / 6.0 * (k1.c32 + 2.0 * k2.c32 + 2.0 * k3.c32 + k4.c32);
        if ((n + 1) % sample_stride == 0 || n + 1 == steps) {
            record(t_begin + h * static_cast<double>(n + 1), y);
        }
    }
    return trace;
}

}  // namespace rydeo
