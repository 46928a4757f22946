#include "levyspde/mittag_leffler.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace levyspde {

namespace {

constexpr double pi = std::numbers::pi;

// sin(pi z) with exact zeros at integers
double sin_pi(double z) {
    const double r = std::fmod(z, 2.0);
    if (r == std::floor(r)) {
        return 0.0;
    }
    return std::sin(pi * r);
}

}  // namespace

MittagLefflerNeg::MittagLefflerNeg(double rho) : rho_(rho) {
    if (!(rho >= 1.0 && rho <= 2.0)) {
        throw std::invalid_argument("Mittag-Leffler index must lie in [1, 2], got " +
                                    std::to_string(rho));
    }
    if (rho == 1.0 || rho == 2.0) {
        return;
    }
    const long double lr = rho;
    for (int j = 0;; ++j) {
        const long double lg = std::lgamma(lr * j + 1.0L);
        series_coef_.push_back(std::exp(-lg));
        // stop once 20^j / Gamma(rho j + 1) is far below the last ulp
        if (j > 4 && j * std::log(static_cast<long double>(series_limit)) - lg < -52.0L) {
            break;
        }
    }
    for (int j = 1; j <= 60; ++j) {
        const double z = rho * j;
        // 1/Gamma(1 - z) = Gamma(z) sin(pi z) / pi
        asym_coef_.push_back(std::tgamma(z) * sin_pi(z) / pi);
    }
    asym_from_ = std::pow(40.0, rho);

    log_lo_ = std::log(std::pow(series_limit, 1.0 / rho));
    log_hi_ = std::log(40.0);
    cheb_.resize(kPieces);
    const double width = (log_hi_ - log_lo_) / kPieces;
    for (int p = 0; p < kPieces; ++p) {
        std::array<double, kDegree> values{};
        for (int i = 0; i < kDegree; ++i) {
            const double t = std::cos(pi * (i + 0.5) / kDegree);
            values[static_cast<std::size_t>(i)] =
                kernel_laplace(std::exp(log_lo_ + width * (p + 0.5 * (t + 1.0))));
        }
        auto& c = cheb_[static_cast<std::size_t>(p)];
        for (int m = 0; m < kDegree; ++m) {
            double s = 0.0;
            for (int i = 0; i < kDegree; ++i) {
                s += values[static_cast<std::size_t>(i)] * std::cos(pi * m * (i + 0.5) / kDegree);
            }
            c[static_cast<std::size_t>(m)] = (m == 0 ? 1.0 : 2.0) * s / kDegree;
        }
    }
}

double MittagLefflerNeg::operator()(double x) const {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("Mittag-Leffler argument must be nonnegative");
    }
    if (rho_ == 1.0) {
        return std::exp(-x);
    }
    if (rho_ == 2.0) {
        return std::cos(std::sqrt(x));
    }
    if (x <= series_limit) {
        return series(x);
    }
    if (x < asym_from_) {
        const double y = std::pow(x, 1.0 / rho_);
        return tabulated_laplace(y) + pole_term(y);
    }
    return asymptotic(x);
}

double MittagLefflerNeg::series(double x) const {
    long double sum = 0.0L, comp = 0.0L, p = 1.0L;
    const long double mx = -static_cast<long double>(x);
    for (long double c : series_coef_) {
        const long double term = p * c - comp;
        const long double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
        p *= mx;
    }
    return static_cast<double>(sum);
}

double MittagLefflerNeg::pole_term(double y) const {
    const double a = pi / rho_;
    return 2.0 / rho_ * std::exp(y * std::cos(a)) * std::cos(y * std::sin(a));
}

double MittagLefflerNeg::kernel_laplace(double y) const {
    const double s = std::sin(rho_ * pi);
    const double c = std::cos(rho_ * pi);
    const double r = rho_;
    auto f = [=](double u) {
        if (u == 0.0) {
            return 0.0;
        }
        const double ur = std::pow(u, r);
        return std::exp(-y * u) * ur / u * s / (pi * (ur * ur + 2.0 * ur * c + 1.0));
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double tol = 1e-14;
    // u = v^{1/(rho-1)} on [0,1] removes the u^{rho-1} endpoint behaviour, u = 1/v on [1, inf)
    const double m = 1.0 / (r - 1.0);
    auto near = [&](double v) { return v == 0.0 ? 0.0 : f(std::pow(v, m)) * m * std::pow(v, m - 1.0); };
    auto far = [&](double v) { return v == 0.0 ? 0.0 : f(1.0 / v) / (v * v); };
    const double lo = GK::integrate(near, 0.0, 1.0, 15, tol);
    const double hi = GK::integrate(far, 0.0, 1.0, 15, tol);
    return lo + hi;
}

double MittagLefflerNeg::tabulated_laplace(double y) const {
    const double width = (log_hi_ - log_lo_) / kPieces;
    const double s = (std::log(y) - log_lo_) / width;
    int p = static_cast<int>(s);
    p = std::clamp(p, 0, kPieces - 1);
    const double t = 2.0 * (s - p) - 1.0;
    const auto& c = cheb_[static_cast<std::size_t>(p)];
    // Clenshaw
    double b1 = 0.0, b2 = 0.0;
    for (int m = kDegree - 1; m >= 1; --m) {
        const double b0 = 2.0 * t * b1 - b2 + c[static_cast<std::size_t>(m)];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

double MittagLefflerNeg::integral(double x) const {
    if (rho_ == 1.0 || rho_ == 2.0) {
        return (*this)(x);
    }
    const double y = std::pow(x, 1.0 / rho_);
    return kernel_laplace(y) + pole_term(y);
}

double MittagLefflerNeg::asymptotic(double x) const {
    if (rho_ == 1.0 || rho_ == 2.0) {
        return (*this)(x);
    }
    double sum = 0.0;
    double p = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (double a : asym_coef_) {
        p *= -1.0 / x;
        const double term = -p * a;
        if (a != 0.0) {
            if (std::abs(term) > last) {
                break;
            }
            last = std::abs(term);
        }
        sum += term;
        if (a != 0.0 && std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return sum + pole_term(std::pow(x, 1.0 / rho_));
}

std::shared_ptr<const MittagLefflerNeg> mittag_leffler_evaluator(double rho) {
    static std::mutex mu;
    static std::map<double, std::shared_ptr<const MittagLefflerNeg>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[rho];
    if (!slot) {
        slot = std::make_shared<const MittagLefflerNeg>(rho);
    }
    return slot;
}

double mittag_leffler_neg(double rho, double x) { return (*mittag_leffler_evaluator(rho))(x); }

}  // namespace levyspde
