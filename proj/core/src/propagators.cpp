#include "levyspde/propagators.hpp"
#include "levyspde/mittag_leffler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

namespace levyspde {

namespace {

// Sum_{k=0}^{len-1} a[k] b[k] with four interleaved accumulators
double dot4(const double* a, const double* b, int len) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int k = 0;
    for (; k + 3 < len; k += 4) {
        s0 += a[k] * b[k];
        s1 += a[k + 1] * b[k + 1];
        s2 += a[k + 2] * b[k + 2];
        s3 += a[k + 3] * b[k + 3];
    }
    for (; k < len; ++k) {
        s0 += a[k] * b[k];
    }
    return (s0 + s1) + (s2 + s3);
}

Mat2 from_scalar_function(std::complex<double> f_iw, double omega) {
    // f(A) = Re f(i w) I + Im f(i w) / w * A with A = [[0, -1], [w^2, 0]]
    const double re = f_iw.real();
    const double im = f_iw.imag();
    return Mat2{re, -im / omega, im * omega, re};
}

}  // namespace

EquationKind EquationKind::heat() { return EquationKind{Equation::heat, 1.0, WaveScheme::crank_nicolson}; }

EquationKind EquationKind::volterra(double rho) {
    if (!(rho > 1.0 && rho < 2.0)) {
        throw std::invalid_argument("volterra requires rho strictly inside (1, 2), got " +
                                    std::to_string(rho));
    }
    return EquationKind{Equation::volterra, rho, WaveScheme::crank_nicolson};
}

EquationKind EquationKind::wave(WaveScheme scheme) { return EquationKind{Equation::wave, 1.0, scheme}; }

std::string equation_name(Equation e) {
    switch (e) {
        case Equation::heat: return "heat";
        case Equation::volterra: return "volterra";
        case Equation::wave: return "wave";
    }
    return "?";
}

std::string scheme_name(WaveScheme s) {
    switch (s) {
        case WaveScheme::backward_euler: return "backward_euler";
        case WaveScheme::crank_nicolson: return "crank_nicolson";
        case WaveScheme::explicit_euler: return "explicit_euler";
    }
    return "?";
}

int scheme_order(WaveScheme s) { return s == WaveScheme::crank_nicolson ? 2 : 1; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return Mat2{a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
                a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
}

ModeFactor exact_mode_factor(const EquationKind& kind, double lambda, double t) {
    if (!(lambda > 0.0) || !(t >= 0.0)) {
        throw std::invalid_argument("exact_mode_factor needs lambda > 0 and t >= 0");
    }
    switch (kind.equation) {
        case Equation::heat: return std::exp(-lambda * t);
        case Equation::volterra: return mittag_leffler_neg(kind.rho, lambda * std::pow(t, kind.rho));
        case Equation::wave: {
            const double w = std::sqrt(lambda);
            const double c = std::cos(w * t);
            const double s = std::sin(w * t);
            return Mat2{c, s / w, -w * s, c};
        }
    }
    return 0.0;
}

CqWeights cq_weights(double rho, double dt, int N) {
    if (!(rho >= 1.0 && rho < 2.0) || !(dt > 0.0) || N < 1) {
        throw std::invalid_argument("cq_weights needs rho in [1,2), dt > 0, N >= 1");
    }
    CqWeights w;
    w.rho = rho;
    w.dt = dt;
    w.weights.resize(static_cast<std::size_t>(N));
    const double scale = std::pow(dt, rho - 1.0);
    double c = 1.0;
    w.weights[0] = scale;
    for (int k = 1; k < N; ++k) {
        c *= (k + rho - 2.0) / k;
        w.weights[static_cast<std::size_t>(k)] = scale * c;
    }
    return w;
}

double be_mode_power(double lambda_h, double dt, int n) {
    if (n < 0) {
        throw std::invalid_argument("negative power");
    }
    return std::pow(1.0 + dt * lambda_h, -n);
}

std::vector<double> cq_mode_solve(double lambda_h, const CqWeights& w, int N,
                                  const std::vector<double>& forcing, double x0) {
    if (static_cast<int>(w.weights.size()) < N) {
        throw std::invalid_argument("not enough convolution weights");
    }
    if (!forcing.empty() && static_cast<int>(forcing.size()) < N) {
        throw std::invalid_argument("forcing shorter than the step count");
    }
    // rev[i] = omega_{N-1-i}, so omega_{n-k} for k = 1..n-1 is contiguous
    std::vector<double> rev(w.weights.rbegin(), w.weights.rend());
    std::vector<double> x(static_cast<std::size_t>(N) + 1);
    x[0] = x0;
    const double a = w.dt * lambda_h;
    const double denom = 1.0 + a * w.weights[0];
    for (int n = 1; n <= N; ++n) {
        const double conv = dot4(rev.data() + (N - n), x.data() + 1, n - 1);
        const double f = forcing.empty() ? 0.0 : forcing[static_cast<std::size_t>(n - 1)];
        x[static_cast<std::size_t>(n)] = (x[static_cast<std::size_t>(n - 1)] + f - a * conv) / denom;
    }
    return std::vector<double>(x.begin() + 1, x.end());
}

std::complex<double> wave_rational(WaveScheme scheme, std::complex<double> z) {
    switch (scheme) {
        case WaveScheme::backward_euler: return 1.0 / (1.0 + z);
        case WaveScheme::crank_nicolson: return (2.0 - z) / (2.0 + z);
        case WaveScheme::explicit_euler: return 1.0 - z;
    }
    return 0.0;
}

Mat2 rational_wave_mode(WaveScheme scheme, double dt, double lambda_h) {
    const double w = std::sqrt(lambda_h);
    return from_scalar_function(wave_rational(scheme, {0.0, w * dt}), w);
}

Mat2 rational_wave_power(WaveScheme scheme, double dt, double lambda_h, int n) {
    if (n < 0) {
        throw std::invalid_argument("negative power");
    }
    const double w = std::sqrt(lambda_h);
    const std::complex<double> z = wave_rational(scheme, {0.0, w * dt});
    const double modulus = scheme == WaveScheme::crank_nicolson ? 1.0 : std::abs(z);
    const std::complex<double> zn = std::polar(std::pow(modulus, n), n * std::arg(z));
    return from_scalar_function(zn, w);
}

StabilityResult i_stability_check(WaveScheme scheme, const std::vector<double>& y_grid) {
    StabilityResult r;
    for (double y : y_grid) {
        r.max_modulus = std::max(r.max_modulus, std::abs(wave_rational(scheme, {0.0, y})));
    }
    r.stable = r.max_modulus <= 1.0 + 1e-12;
    return r;
}

std::vector<double> discrete_noise_trajectory(const EquationKind& kind, double lambda_h, double dt,
                                              int N) {
    std::vector<double> v(static_cast<std::size_t>(N) + 1);
    v[0] = kind.equation == Equation::wave ? 0.0 : 1.0;
    switch (kind.equation) {
        case Equation::heat: {
            const double r = 1.0 / (1.0 + dt * lambda_h);
            for (int n = 1; n <= N; ++n) {
                v[static_cast<std::size_t>(n)] = v[static_cast<std::size_t>(n - 1)] * r;
            }
            break;
        }
        case Equation::volterra: {
            const auto x = cq_mode_solve(lambda_h, cq_weights(kind.rho, dt, N), N, {}, 1.0);
            std::copy(x.begin(), x.end(), v.begin() + 1);
            break;
        }
        case Equation::wave: {
            const double w = std::sqrt(lambda_h);
            const std::complex<double> z = wave_rational(kind.scheme, {0.0, w * dt});
            const double modulus = kind.scheme == WaveScheme::crank_nicolson ? 1.0 : std::abs(z);
            const double phase = std::arg(z);
            for (int n = 1; n <= N; ++n) {
                v[static_cast<std::size_t>(n)] = -std::pow(modulus, n) * std::sin(n * phase) / w;
            }
            break;
        }
    }
    return v;
}

DiscreteFamily::DiscreteFamily(const EquationKind& kind, double lambda_h, std::optional<double> dt,
                               double T)
    : kind_(kind), lambda_(lambda_h), dt_(dt), horizon_(T) {
    if (dt_) {
        const double steps = T / *dt_;
        steps_ = static_cast<int>(std::lround(steps));
        if (steps_ < 1 || std::abs(steps - steps_) > 1e-9 * steps) {
            throw std::invalid_argument("step must divide the horizon");
        }
        noise_ = discrete_noise_trajectory(kind, lambda_h, *dt_, steps_);
    }
}

int DiscreteFamily::step_index(double t) const {
    if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-14)) {
        throw std::invalid_argument("time outside [0, T]");
    }
    if (!dt_) {
        return 0;
    }
    const int n = static_cast<int>(std::ceil(t / *dt_ - 1e-12));
    return std::clamp(n, 0, steps_);
}

ModeFactor DiscreteFamily::factor(double t) const {
    const int n = step_index(t);
    if (!dt_) {
        return exact_mode_factor(kind_, lambda_, t);
    }
    if (kind_.equation == Equation::wave) {
        return rational_wave_power(kind_.scheme, *dt_, lambda_, n);
    }
    return noise_[static_cast<std::size_t>(n)];
}

ModeFactor DiscreteFamily::terminal() const { return factor(horizon_); }

}  // namespace levyspde
