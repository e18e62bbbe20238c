#include "resokit/numerics/levenberg_marquardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace resokit::numerics {

double LmResult::residual_variance() const {
    const auto dof = n_residuals - static_cast<int>(x.size());
    return dof > 0 ? cost / dof : 0.0;
}

Matrix numeric_jacobian(const ResidualFn& residuals, const Vector& x, const Vector& r0, double diff_step) {
    Matrix jac(r0.size(), x.size());
    Vector xp = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = diff_step * std::max(std::abs(x[j]), 1e-3);
        xp[j] = x[j] + h;
        jac.col(j) = (residuals(xp) - r0) / h;
        xp[j] = x[j];
    }
    return jac;
}

namespace {

Vector project(const Vector& x, const std::optional<Bounds>& bounds) {
    if (!bounds) return x;
    return x.cwiseMax(bounds->lower).cwiseMin(bounds->upper);
}

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& residuals, const Vector& x0, const LmOptions& options,
                             const JacobianFn& jacobian, const std::optional<Bounds>& bounds) {
    LmResult out;
    Vector x = project(x0, bounds);
    Vector r = residuals(x);
    out.n_residuals = static_cast<int>(r.size());
    double cost = r.squaredNorm();
    if (!std::isfinite(cost)) {
        out.x = x;
        out.cost = cost;
        out.message = "non-finite residuals at the initial point";
        return out;
    }

    auto jac_at = [&](const Vector& xv, const Vector& rv) {
        return jacobian ? jacobian(xv) : numeric_jacobian(residuals, xv, rv, options.diff_step);
    };

    Matrix J = jac_at(x, r);
    Matrix JtJ = J.transpose() * J;
    Vector g = J.transpose() * r;
    double lambda = options.initial_lambda;
    double nu = 2.0;

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (g.lpNorm<Eigen::Infinity>() <= options.gtol * std::max(cost, 1e-300) || cost == 0.0) {
            out.converged = true;
            out.message = "gradient below tolerance";
            break;
        }
        Vector diag = JtJ.diagonal().cwiseMax(1e-12 * std::max(JtJ.diagonal().maxCoeff(), 1e-300));
        Matrix A = JtJ;
        A.diagonal() += lambda * diag;
        Eigen::LDLT<Matrix> ldlt(A);
        if (ldlt.info() != Eigen::Success) {
            lambda *= nu;
            nu *= 2.0;
            continue;
        }
        Vector step = ldlt.solve(-g);
        Vector x_new = project(x + step, bounds);
        step = x_new - x;
        Vector r_new = residuals(x_new);
        const double cost_new = r_new.squaredNorm();
        // Predicted reduction of the linear model.
        const double predicted = -(2.0 * step.dot(g) + step.dot(JtJ * step));
        const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : -1.0;

        if (std::isfinite(cost_new) && cost_new < cost) {
            const double decrease = (cost - cost_new) / cost;
            x = x_new;
            r = r_new;
            cost = cost_new;
            J = jac_at(x, r);
            JtJ = J.transpose() * J;
            g = J.transpose() * r;
            lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * std::max(rho, 0.0) - 1.0, 3));
            nu = 2.0;
            if (step.norm() <= options.xtol * (x.norm() + options.xtol)) {
                out.converged = true;
                out.message = "step below tolerance";
                ++it;
                break;
            }
            if (decrease <= options.ftol) {
                out.converged = true;
                out.message = "cost decrease below tolerance";
                ++it;
                break;
            }
        } else {
            if (predicted <= 8.0 * std::numeric_limits<double>::epsilon() * cost) {
                // Nothing left to gain at working precision.
                out.converged = true;
                out.message = "step below tolerance";
                ++it;
                break;
            }
            lambda *= nu;
            nu *= 2.0;
            if (lambda > 1e30) {
                out.message = "damping exceeded limit";
                break;
            }
        }
    }
    if (!out.converged && out.message.empty()) out.message = "maximum iterations reached";

    out.x = x;
    out.cost = cost;
    out.iterations = it;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(JtJ);
    out.jtj_inverse = cod.pseudoInverse();
    return out;
}

}  // namespace resokit::numerics
