#pragma once

#include <complex>
#include <vector>

#include "rydeo/config.hpp"

namespace rydeo {

struct HarmonicSpectrum {
    double base_frequency = 0.0;       // Hz
    std::vector<int> orders;           // 0..max_order
    std::vector<double> amplitude;     // order 0 = trace mean, k>0 = 2|c_k|
    std::vector<double> phase;         // rad, cosine convention arg(c_k)
};

// Projection of a uniformly sampled trace onto exact harmonic bins of
// base_frequency. The trace must cover an integer number of periods (to 1e-9
// relative) and max_order must stay below Nyquist; ConfigurationError
// otherwise.
HarmonicSpectrum harmonics(const std::vector<double>& values, double sample_dt,
                           double base_frequency, int max_order);

// Signed-order projection of a complex envelope; coefficient(k) is the
// complex amplitude at +k*base_frequency.
class EnvelopeHarmonics {
public:
    EnvelopeHarmonics(double base_frequency, int max_order,
                      std::vector<std::complex<double>> coeffs);

    double base_frequency() const { return base_frequency_; }
    int max_order() const { return max_order_; }
    std::complex<double> coefficient(int order) const;
    // (|c_+k|^2 + |c_-k|^2) / (2 |c_0|^2)
    double sideband_ratio(int order) const;

private:
    double base_frequency_;
    int max_order_;
    std::vector<std::complex<double>> coeffs_;
};

EnvelopeHarmonics envelope_harmonics(const std::vector<std::complex<double>>& values,
                                     double sample_dt, double base_frequency,
                                     int max_order);

// In-place radix-2 FFT; size must be a power of two (ValidationError).
void fft_radix2(std::vector<std::complex<double>>& data, bool inverse);

struct SidebandPoint {
    int order = 0;
    double ratio = 0.0;  // sideband/carrier power ratio
};

struct SidebandSpectrum {
    std::vector<double> frequency;  // Hz relative to the carrier, ascending
    std::vector<double> power_db;   // normalized to the carrier bin
    double carrier_frequency = 0.0; // Hz, location of the carrier bin
    std::vector<SidebandPoint> order_ratios;  // exact-bin, unwindowed
};

// Hann periodogram of the envelope, normalized to the carrier (maximum) bin.
// When nu_m > 0 the per-order sideband/carrier power ratios at offsets
// k*nu_m are computed from unwindowed exact-bin projections.
SidebandSpectrum sideband_spectrum(const std::vector<std::complex<double>>& field,
                                   double sample_rate, double nu_m = 0.0,
                                   int max_order = 4);

// One period of a periodic complex signal passed through a single-pole
// low-pass H(omega) = 1 / (1 + i omega / gamma): exact per-harmonic transfer,
// no transient. Used for the filtered response mode.
std::vector<std::complex<double>> periodic_lowpass(
    const std::vector<std::complex<double>>& period_values,
    double base_frequency, double gamma);

struct BandwidthPoint {
    double nu_m = 0.0;    // drive frequency, Hz
    double ratio = 0.0;   // 2nd-order sideband/carrier power ratio
};

struct BandwidthCurve {
    std::vector<BandwidthPoint> points;
    // Lorentzian fit of ratio vs sideband offset 2*nu_m (the frequency at
    // which the medium is actually driven); fwhm in Hz of that Lorentzian.
    double fitted_fwhm_hz = 0.0;
    double plateau_ratio = 0.0;
    double fit_residual_rms = 0.0;
};

// Modulation-frequency sweep of the 2nd-harmonic sideband/carrier ratio.
// Mode must be filtered or full-obe (quasi-static has no bandwidth limit).
BandwidthCurve bandwidth_curve(const ModelContext& ctx,
                               const std::vector<double>& nu_m_list,
                               ResponseMode mode);

}  // namespace rydeo
