#pragma once

#include <array>
#include <memory>
#include <vector>

namespace levyspde {

// E_rho(-x) for rho in [1, 2] and x >= 0.
//  x <= 20          : power series in long double with compensated summation
//  20 < x < 40^rho  : integral representation (tabulated on a Chebyshev grid)
//  x >= 40^rho      : asymptotic expansion
// plus the two conjugate pole contributions for the last two branches.
class MittagLefflerNeg {
public:
    explicit MittagLefflerNeg(double rho);

    double operator()(double x) const;

    double rho() const { return rho_; }

    // the three branches, exposed for cross-checks
    double series(double x) const;
    double integral(double x) const;
    double asymptotic(double x) const;

    static constexpr double series_limit = 20.0;
    double asymptotic_limit() const { return asym_from_; }

private:
    double pole_term(double y) const;
    double kernel_laplace(double y) const;  // direct adaptive quadrature
    double tabulated_laplace(double y) const;

    double rho_;
    double asym_from_ = 0.0;
    std::vector<long double> series_coef_;
    std::vector<double> asym_coef_;

    static constexpr int kPieces = 12;
    static constexpr int kDegree = 24;
    double log_lo_ = 0.0, log_hi_ = 0.0;
    std::vector<std::array<double, kDegree>> cheb_;
};

// Cached evaluator per rho; safe to call from several threads.
std::shared_ptr<const MittagLefflerNeg> mittag_leffler_evaluator(double rho);

double mittag_leffler_neg(double rho, double x);

}  // namespace levyspde
