#include "rydeo/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydeo/constants.hpp"
#include "rydeo/errors.hpp"
#include "rydeo/fitting.hpp"
#include "rydeo/modulation.hpp"

namespace rydeo {

using cd = std::complex<double>;

namespace {

// Bin-exact projection coefficient c_k = (1/N) sum_j x_j e^{-2 pi i k M j / N}
// where M is the integer period count of the trace.
long integer_periods(std::size_t n, double sample_dt, double base_frequency) {
    if (n < 2 || !(sample_dt > 0.0) || !(base_frequency > 0.0)) {
        throw ValidationError("harmonics: bad trace or frequencies");
    }
    const double coverage =
        static_cast<double>(n) * sample_dt * base_frequency;
    const long m = std::lround(coverage);
    if (m < 1 || std::abs(coverage - static_cast<double>(m)) >
                     1e-9 * std::max(1.0, coverage)) {
        std::ostringstream os;
        os << "harmonics: trace covers " << coverage
           << " periods; an integer number is required";
        throw ConfigurationError(os.str());
    }
    return m;
}

template <typename T>
cd project_bin(const std::vector<T>& x, long bin) {
    const std::size_t n = x.size();
    const double w = -constants::two_pi * static_cast<double>(bin) /
                     static_cast<double>(n);
    cd acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        acc += cd(x[j]) * std::polar(1.0, w * static_cast<double>(j));
    }
    return acc / static_cast<double>(n);
}

}  // namespace

HarmonicSpectrum harmonics(const std::vector<double>& values, double sample_dt,
                           double base_frequency, int max_order) {
    if (max_order < 0) throw ValidationError("harmonics: max_order must be >= 0");
    const long m = integer_periods(values.size(), sample_dt, base_frequency);
    if (static_cast<double>(max_order) * base_frequency * sample_dt >= 0.5) {
        throw ConfigurationError(
            "harmonics: max_order exceeds the Nyquist limit of the trace");
    }
    HarmonicSpectrum spec;
    spec.base_frequency = base_frequency;
    for (int k = 0; k <= max_order; ++k) {
        const cd c = project_bin(values, static_cast<long>(k) * m);
        spec.orders.push_back(k);
        spec.amplitude.push_back((k == 0 ? 1.0 : 2.0) * std::abs(c));
        spec.phase.push_back(std::arg(c));
    }
    return spec;
}

EnvelopeHarmonics::EnvelopeHarmonics(double base_frequency, int max_order,
                                     std::vector<cd> coeffs)
    : base_frequency_(base_frequency),
      max_order_(max_order),
      coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(2 * max_order_ + 1)) {
        throw ValidationError("EnvelopeHarmonics: coefficient count mismatch");
    }
}

cd EnvelopeHarmonics::coefficient(int order) const {
    if (order < -max_order_ || order > max_order_) {
        throw ValidationError("EnvelopeHarmonics: order out of range");
    }
    return coeffs_[static_cast<std::size_t>(order + max_order_)];
}

double EnvelopeHarmonics::sideband_ratio(int order) const {
    if (order < 1) throw ValidationError("sideband_ratio: order must be >= 1");
    const double carrier = std::norm(coefficient(0));
    if (carrier <= 0.0) {
        throw NumericalError("sideband_ratio: carrier power is zero");
    }
    return (std::norm(coefficient(order)) + std::norm(coefficient(-order))) /
           (2.0 * carrier);
}

EnvelopeHarmonics envelope_harmonics(const std::vector<cd>& values,
                                     double sample_dt, double base_frequency,
                                     int max_order) {
    if (max_order < 1) {
        throw ValidationError("envelope_harmonics: max_order must be >= 1");
    }
    const long m = integer_periods(values.size(), sample_dt, base_frequency);
    if (static_cast<double>(max_order) * base_frequency * sample_dt >= 0.5) {
        throw ConfigurationError(
            "envelope_harmonics: max_order exceeds the Nyquist limit");
    }
    std::vector<cd> coeffs(2 * max_order + 1);
    for (int k = -max_order; k <= max_order; ++k) {
        coeffs[static_cast<std::size_t>(k + max_order)] =
            project_bin(values, static_cast<long>(k) * m);
    }
    return EnvelopeHarmonics(base_frequency, max_order, std::move(coeffs));
}

void fft_radix2(std::vector<cd>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ValidationError("fft_radix2: length must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang =
            (inverse ? 1.0 : -1.0) * constants::two_pi / static_cast<double>(len);
        const cd wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cd w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cd u = data[i + j];
                const cd v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (cd& x : data) x /= static_cast<double>(n);
    }
}

SidebandSpectrum sideband_spectrum(const std::vector<cd>& field,
                                   double sample_rate, double nu_m,
                                   int max_order) {
    const std::size_t n = field.size();
    if (n < 8 || (n & (n - 1)) != 0) {
        throw ValidationError(
            "sideband_spectrum: field length must be a power of two (>= 8)");
    }
    if (!(sample_rate > 0.0)) {
        throw ValidationError("sideband_spectrum: sample_rate must be > 0");
    }

    // Periodic Hann window: an unmodulated carrier occupies exactly three
    // bins, everything else is zero to rounding.
    std::vector<cd> windowed(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = 0.5 * (1.0 - std::cos(constants::two_pi *
                                               static_cast<double>(j) /
                                               static_cast<double>(n)));
        windowed[j] = field[j] * w;
    }
    fft_radix2(windowed, false);

    SidebandSpectrum spec;
    spec.frequency.resize(n);
    spec.power_db.resize(n);
    std::vector<double> power(n);
    double peak = 0.0;
    std::size_t peak_shifted = 0;
    const double df = sample_rate / static_cast<double>(n);
    const long half = static_cast<long>(n) / 2;
    for (std::size_t idx = 0; idx < n; ++idx) {
        // Ascending frequency order: bin k in [-n/2, n/2).
        const long k = static_cast<long>(idx) - half;
        const std::size_t src =
            static_cast<std::size_t>((k + static_cast<long>(n)) %
                                     static_cast<long>(n));
        spec.frequency[idx] = static_cast<double>(k) * df;
        power[idx] = std::norm(windowed[src]);
        if (power[idx] > peak) {
            peak = power[idx];
            peak_shifted = idx;
        }
    }
    if (peak <= 0.0) {
        throw NumericalError("sideband_spectrum: empty spectrum");
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
        const double rel = power[idx] / peak;
        spec.power_db[idx] = rel > 1e-40 ? 10.0 * std::log10(rel) : -400.0;
    }
    spec.carrier_frequency = spec.frequency[peak_shifted];

    if (nu_m > 0.0 && max_order >= 1) {
        // Exact-bin ratios from the unwindowed series, relative to the
        // carrier bin.
        const double carrier_bin_f =
            spec.carrier_frequency * static_cast<double>(n) / sample_rate;
        const double mod_bin_f = nu_m * static_cast<double>(n) / sample_rate;
        const auto near_int = [](double x) {
            return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, std::abs(x));
        };
        if (!near_int(carrier_bin_f) || !near_int(mod_bin_f)) {
            throw ConfigurationError(
                "sideband_spectrum: nu_m or carrier does not fall on an exact "
                "bin of this trace");
        }
        const long carrier_bin = std::lround(carrier_bin_f);
        const long mod_bin = std::lround(mod_bin_f);
        const double carrier_power =
            std::norm(project_bin(field, carrier_bin));
        if (carrier_power <= 0.0) {
            throw NumericalError("sideband_spectrum: carrier power is zero");
        }
        for (int k = 1; k <= max_order; ++k) {
            const double upper =
                std::norm(project_bin(field, carrier_bin + k * mod_bin));
            const double lower =
                std::norm(project_bin(field, carrier_bin - k * mod_bin));
            SidebandPoint point;
            point.order = k;
            point.ratio = (upper + lower) / (2.0 * carrier_power);
            spec.order_ratios.push_back(point);
        }
    }
    return spec;
}

std::vector<cd> periodic_lowpass(const std::vector<cd>& period_values,
                                 double base_frequency, double gamma) {
    const std::size_t n = period_values.size();
    if (n < 4) throw ValidationError("periodic_lowpass: need >= 4 samples");
    if (!(base_frequency > 0.0) || !(gamma > 0.0)) {
        throw ValidationError("periodic_lowpass: frequencies must be > 0");
    }
    // Exact per-harmonic transfer over one period: the signal is periodic by
    // construction, so the DFT is its harmonic series.
    std::vector<cd> coeffs(n);
    for (std::size_t k = 0; k < n; ++k) {
        coeffs[k] = project_bin(period_values, static_cast<long>(k));
    }
    std::vector<cd> out(n, cd(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const long signed_k = static_cast<long>(k) <= static_cast<long>(n) / 2
                                  ? static_cast<long>(k)
                                  : static_cast<long>(k) - static_cast<long>(n);
        const double omega =
            constants::two_pi * base_frequency * static_cast<double>(signed_k);
        const cd h = 1.0 / cd(1.0, omega / gamma);
        const cd ck = coeffs[k] * h;
        const double w = constants::two_pi * static_cast<double>(k) /
                         static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            out[j] += ck * std::polar(1.0, w * static_cast<double>(j));
        }
    }
    return out;
}

BandwidthCurve bandwidth_curve(const ModelContext& ctx,
                               const std::vector<double>& nu_m_list,
                               ResponseMode mode) {
    if (nu_m_list.size() < 4) {
        throw ValidationError("bandwidth_curve: need at least 4 frequencies");
    }
    double prev = 0.0;
    for (double nu : nu_m_list) {
        if (!(nu > prev)) {
            throw ValidationError(
                "bandwidth_curve: frequencies must be positive and ascending");
        }
        prev = nu;
    }
    if (mode == ResponseMode::quasi_static) {
        throw ValidationError(
            "bandwidth_curve: quasi-static mode has no bandwidth limit; use "
            "filtered or full-obe");
    }

    // One lock offset for the whole sweep (it depends on the drive amplitude,
    // not its frequency) so only the response speed varies between points.
    const double lock = ctx.cfg.numerics.lock_offset_auto
                            ? optimize_lock_offset(ctx, ctx.cfg.drive)
                            : ctx.cfg.numerics.lock_offset;

    BandwidthCurve curve;
    for (double nu : nu_m_list) {
        ModelContext run = ctx;
        run.cfg.drive.frequency = nu;
        run.cfg.numerics.lock_offset_auto = false;
        run.cfg.numerics.lock_offset = lock;
        const TimeTrace trace = modulated_response(
            run, run.cfg.drive, mode, run.cfg.numerics.periods,
            run.cfg.numerics.samples_per_period);
        const ComplexTrace field = output_field(trace);
        const EnvelopeHarmonics env = envelope_harmonics(
            field.amplitude, trace.sample_dt(), nu, 2);
        BandwidthPoint point;
        point.nu_m = nu;
        point.ratio = env.sideband_ratio(2);
        curve.points.push_back(point);
    }

    // The medium is driven at the Stark frequency 2 nu_m; fit the rolloff
    // against that sideband offset. Model: r(f) = r0 / (1 + (f/h)^2).
    const std::size_t n = curve.points.size();
    std::vector<double> f(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = 2.0 * curve.points[i].nu_m;
        r[i] = curve.points[i].ratio;
    }
    const double r0_init = *std::max_element(r.begin(), r.end());
    if (!(r0_init > 0.0)) {
        throw FitError("bandwidth_curve: all sideband ratios are zero");
    }
    double h_init = f.back();
    for (std::size_t i = 0; i < n; ++i) {
        if (r[i] < 0.5 * r0_init) {
            h_init = f[i];
            break;
        }
    }
    const auto residual = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd res(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = f[i] / p(1);
            res(i) = p(0) / (1.0 + u * u) - r[i];
        }
        return res;
    };
    const auto jacobian = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd j(n, 2);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = f[i] / p(1);
            const double den = 1.0 + u * u;
            j(i, 0) = 1.0 / den;
            j(i, 1) = 2.0 * p(0) * u * u / (den * den * p(1));
        }
        return j;
    };
    Eigen::VectorXd p0(2);
    p0 << r0_init, h_init;
    const LMResult lm = levenberg_marquardt(residual, jacobian, p0);
    if (!lm.converged || !(lm.params(1) != 0.0)) {
        throw FitError("bandwidth_curve: Lorentzian fit did not converge");
    }
    curve.plateau_ratio = lm.params(0);
    curve.fitted_fwhm_hz = 2.0 * std::abs(lm.params(1));
    curve.fit_residual_rms =
        std::sqrt(2.0 * lm.cost / static_cast<double>(n));
    return curve;
}

}  // namespace rydeo
