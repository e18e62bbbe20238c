#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace resokit::numerics {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct LmOptions {
    int max_iterations = 200;
    double xtol = 1e-13;   // relative step size
    double ftol = 1e-15;   // relative cost decrease on an accepted step
    double gtol = 1e-15;   // scaled gradient infinity norm
    double initial_lambda = 1e-3;
    /// Relative step for the forward-difference Jacobian when none is supplied.
    double diff_step = 1e-7;
};

struct LmResult {
    Vector x;
    /// (J^T J)^-1 at the solution. Multiply by the residual variance for a
    /// covariance when residuals are not already normalized by sigma.
    Matrix jtj_inverse;
    double cost = 0.0;  // sum of squared residuals
    int iterations = 0;
    int n_residuals = 0;
    bool converged = false;
    std::string message;

    /// Residual variance estimate cost / (n - p).
    double residual_variance() const;
    /// Covariance scaled by the residual variance.
    Matrix covariance() const { return jtj_inverse * residual_variance(); }
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

struct Bounds {
    Vector lower;
    Vector upper;
};

/// Damped Gauss-Newton with Marquardt diagonal scaling and Nielsen's damping
/// update. Steps are projected onto `bounds` when given.
LmResult levenberg_marquardt(const ResidualFn& residuals, const Vector& x0, const LmOptions& options = {},
                             const JacobianFn& jacobian = {}, const std::optional<Bounds>& bounds = std::nullopt);

/// Forward-difference Jacobian, column step diff_step * max(|x_j|, 1e-3 * typical).
Matrix numeric_jacobian(const ResidualFn& residuals, const Vector& x, const Vector& r0, double diff_step);

}  // namespace resokit::numerics
