#include "gig/quadrature.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace gig {

GaussHermite gauss_hermite_normal(int n, double sigma) {
    if (n < 1) throw QuadratureError("quad_nodes must be >= 1, got " + std::to_string(n));

    GaussHermite rule;
    if (n == 1) {
        rule.eps = Eigen::ArrayXd::Zero(1);
        rule.weight = Eigen::ArrayXd::Ones(1);
        return rule;
    }

    // Monic Hermite recurrence (weight e^{-x^2}): zero diagonal,
    // off-diagonal b_k = sqrt(k/2).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    Eigen::ArrayXd x = solver.eigenvalues().array();
    // Probability weights are the squared first components of the normalized
    // eigenvectors; the mu_0 = sqrt(pi) factor cancels in the normalization.
    Eigen::ArrayXd w = solver.eigenvectors().row(0).array().square();

    // Enforce the exact symmetry of the rule (eigensolver output carries
    // rounding noise); keeps odd-n center node at exactly zero.
    Eigen::ArrayXd x_sym(n), w_sym(n);
    for (int i = 0; i < n; ++i) {
        x_sym[i] = 0.5 * (x[i] - x[n - 1 - i]);
        w_sym[i] = 0.5 * (w[i] + w[n - 1 - i]);
    }
    w_sym /= w_sym.sum();

    rule.eps = std::sqrt(2.0) * sigma * x_sym;
    rule.weight = w_sym;
    return rule;
}

}  // namespace gig
