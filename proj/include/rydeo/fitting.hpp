#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rydeo {

struct LMOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;        // relative step and cost change
    double lambda_init = 1e-3;
    double lambda_max = 1e12;
};

struct LMResult {
    Eigen::VectorXd params;
    double cost = 0.0;               // 0.5 * ||r||^2
    int iterations = 0;
    bool converged = false;
};

// Dense small-problem Levenberg-Marquardt with analytic Jacobian.
// residual(p) has one entry per data point; jacobian(p) is d r_i / d p_j.
LMResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
    const Eigen::VectorXd& initial, const LMOptions& opts = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_rms = 0.0;
};

// Ordinary least squares y = a x + b; needs >= 3 points for the stderr.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct LorentzianPeak {
    double center = 0.0;
    double hwhm = 0.0;      // half width at half maximum, > 0
    double height = 0.0;    // signed peak amplitude above the baseline
    double baseline = 0.0;
    double residual_rms = 0.0;

    double fwhm() const { return 2.0 * hwhm; }
    double value(double x) const {
        const double u = (x - center) / hwhm;
        return baseline + height / (1.0 + u * u);
    }
};

// Fit y(x) = baseline + height / (1 + ((x-center)/hwhm)^2). The initial guess
// is taken from the extremum against the edge baseline; set `dip` to fit a
// negative-going feature. Throws FitError / NotFoundError.
LorentzianPeak fit_lorentzian_peak(const std::vector<double>& x,
                                   const std::vector<double>& y, bool dip = false,
                                   double min_contrast = 1e-6);

// Deterministic golden-section maximizer on [a, b] for unimodal f.
double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double tol_x, int max_iter = 200);

}  // namespace rydeo
