#include "cascade/lorentzian_fit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

// Parameters: (A, c, g). Residual sqrt(w_k) (model_k - y_k) / scale.
struct LorentzResidual {
    const std::vector<double>* x;
    const std::vector<double>* y;
    std::vector<double> sw;
    double scale;

    int inputs() const { return 3; }
    int values() const { return static_cast<int>(x->size()); }

    int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
        for (std::size_t k = 0; k < x->size(); ++k) {
            const double u = ((*x)[k] - p[1]) / p[2];
            f[static_cast<Eigen::Index>(k)] = sw[k] * (p[0] / (1.0 + u * u) - (*y)[k]) / scale;
        }
        return 0;
    }

    int df(const Eigen::VectorXd& p, Eigen::MatrixXd& J) const {
        for (std::size_t k = 0; k < x->size(); ++k) {
            const double u = ((*x)[k] - p[1]) / p[2];
            const double d = 1.0 / (1.0 + u * u);
            const auto r = static_cast<Eigen::Index>(k);
            J(r, 0) = sw[k] * d / scale;
            J(r, 1) = sw[k] * p[0] * 2.0 * u * d * d / p[2] / scale;
            J(r, 2) = sw[k] * p[0] * 2.0 * u * u * d * d / p[2] / scale;
        }
        return 0;
    }
};

} // namespace

LorentzianFit fit_lorentzian(const SpectrumGrid1D& spectrum) {
    const auto& x = spectrum.axis.nodes;
    const auto& y = spectrum.value;
    // Boundary and half-maximum checks; also the starting width.
    const double width0 = fwhm(spectrum);
    const std::size_t k =
        static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());

    LorentzResidual fn{&x, &y, {}, y[k]};
    fn.sw.resize(x.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        fn.sw[i] = std::sqrt(spectrum.axis.weights[i]);
        norm += spectrum.axis.weights[i] * y[i] * y[i];
    }

    Eigen::VectorXd p(3);
    p << y[k], x[k], 0.5 * width0;
    Eigen::LevenbergMarquardt<LorentzResidual> lm(fn);
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.parameters.maxfev = 2000;
    const auto status = lm.minimize(p);
    using Status = Eigen::LevenbergMarquardtSpace::Status;
    if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
        !p.allFinite() || p[2] == 0.0) {
        std::ostringstream msg;
        msg << "Levenberg-Marquardt stopped with status " << static_cast<int>(status);
        throw NumericalError(ErrorKind::NoPeak, msg.str());
    }

    LorentzianFit out;
    out.amplitude = p[0];
    out.center = p[1];
    out.half_width = std::abs(p[2]);
    out.iterations = static_cast<int>(lm.iter);
    double misfit = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = (x[i] - out.center) / out.half_width;
        const double r = out.amplitude / (1.0 + u * u) - y[i];
        misfit += spectrum.axis.weights[i] * r * r;
    }
    out.residual = norm > 0.0 ? std::sqrt(misfit / norm) : 0.0;
    return out;
}

} // namespace cascade
