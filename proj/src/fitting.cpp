#include "rydeo/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydeo/errors.hpp"

namespace rydeo {

LMResult levenberg_marquardt(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residual,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& jacobian,
    const Eigen::VectorXd& initial, const LMOptions& opts) {
    LMResult result;
    Eigen::VectorXd p = initial;
    Eigen::VectorXd r = residual(p);
    double cost = 0.5 * r.squaredNorm();
    double lambda = opts.lambda_init;

    for (int it = 0; it < opts.max_iterations; ++it) {
        result.iterations = it + 1;
        const Eigen::MatrixXd j = jacobian(p);
        const Eigen::MatrixXd jtj = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;

        bool stepped = false;
        while (lambda <= opts.lambda_max) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-30);
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd p_try = p + step;
            const Eigen::VectorXd r_try = residual(p_try);
            const double cost_try =
                r_try.allFinite() ? 0.5 * r_try.squaredNorm()
                                  : std::numeric_limits<double>::infinity();
            if (cost_try < cost) {
                const double step_rel =
                    step.norm() / std::max(p.norm(), 1e-30);
                const double cost_rel = (cost - cost_try) / std::max(cost, 1e-300);
                p = p_try;
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda * 0.3, 1e-12);
                stepped = true;
                if (step_rel < opts.tolerance || cost_rel < opts.tolerance) {
                    result.converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (result.converged || !stepped) {
            // No downhill step at any damping: stationary point.
            if (!stepped && g.norm() <= 1e-8 * std::max(1.0, cost)) {
                result.converged = true;
            }
            break;
        }
    }
    result.params = p;
    result.cost = cost;
    return result;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("linear_fit: need >= 2 equally sized samples");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw ValidationError("linear_fit: degenerate abscissa");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += e * e;
    }
    fit.residual_rms = std::sqrt(ss / n);
    if (x.size() > 2) {
        fit.slope_stderr = std::sqrt(ss / (n - 2.0) / sxx);
    }
    return fit;
}

LorentzianPeak fit_lorentzian_peak(const std::vector<double>& x,
                                   const std::vector<double>& y, bool dip,
                                   double min_contrast) {
    if (x.size() != y.size() || x.size() < 5) {
        throw ValidationError("fit_lorentzian_peak: need >= 5 samples");
    }
    const std::size_t n = x.size();

    // Edge-based baseline, extremum-based initial center/height.
    const double baseline0 = 0.5 * (y.front() + y.back());
    std::size_t i_ext = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = dip ? baseline0 - y[i] : y[i] - baseline0;
        if (dev > best) {
            best = dev;
            i_ext = i;
        }
    }
    if (!(best > min_contrast)) {
        std::ostringstream os;
        os << "fit_lorentzian_peak: no feature above contrast " << min_contrast;
        throw NotFoundError(os.str());
    }
    const double height0 = dip ? -best : best;
    const double center0 = x[i_ext];
    // Half-maximum crossing distance as the width guess.
    double hwhm0 = 0.0;
    for (std::size_t i = i_ext; i < n; ++i) {
        const double dev = dip ? baseline0 - y[i] : y[i] - baseline0;
        if (dev < 0.5 * best) {
            hwhm0 = x[i] - x[i_ext];
            break;
        }
    }
    if (hwhm0 <= 0.0) {
        for (std::size_t i = i_ext + 1; i-- > 0;) {
            const double dev = dip ? baseline0 - y[i] : y[i] - baseline0;
            if (dev < 0.5 * best) {
                hwhm0 = x[i_ext] - x[i];
                break;
            }
        }
    }
    if (hwhm0 <= 0.0) hwhm0 = 0.25 * (x.back() - x.front());

    const auto model = [&x](const Eigen::VectorXd& p, std::size_t i) {
        const double u = (x[i] - p(0)) / p(1);
        return p(3) + p(2) / (1.0 + u * u);
    };
    const auto residual = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(n);
        for (std::size_t i = 0; i < n; ++i) r(i) = model(p, i) - y[i];
        return r;
    };
    const auto jacobian = [&](const Eigen::VectorXd& p) {
        Eigen::MatrixXd j(n, 4);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (x[i] - p(0)) / p(1);
            const double den = 1.0 + u * u;
            const double common = 2.0 * p(2) * u / (den * den * p(1));
            j(i, 0) = common;          // d/d center
            j(i, 1) = common * u;      // d/d hwhm
            j(i, 2) = 1.0 / den;       // d/d height
            j(i, 3) = 1.0;             // d/d baseline
        }
        return j;
    };

    Eigen::VectorXd p0(4);
    p0 << center0, hwhm0, height0, baseline0;
    const LMResult lm = levenberg_marquardt(residual, jacobian, p0);
    if (!lm.converged || !lm.params.allFinite() || lm.params(1) == 0.0) {
        throw FitError("fit_lorentzian_peak: Levenberg-Marquardt did not converge");
    }

    LorentzianPeak peak;
    peak.center = lm.params(0);
    peak.hwhm = std::abs(lm.params(1));
    peak.height = lm.params(2);
    peak.baseline = lm.params(3);
    peak.residual_rms = std::sqrt(2.0 * lm.cost / static_cast<double>(n));
    if ((dip && peak.height >= 0.0) || (!dip && peak.height <= 0.0)) {
        throw FitError("fit_lorentzian_peak: fitted feature has the wrong sign");
    }
    return peak;
}

double golden_section_max(const std::function<double(double)>& f, double a,
                          double b, double tol_x, int max_iter) {
    if (!(b > a)) throw ValidationError("golden_section_max: need b > a");
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol_x; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace rydeo
