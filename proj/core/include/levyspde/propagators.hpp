#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace levyspde {

enum class Equation { heat, volterra, wave };

// R(z) approximates exp(-z); explicit_euler exists only to exercise the stability gate.
enum class WaveScheme { backward_euler, crank_nicolson, explicit_euler };

struct EquationKind {
    Equation equation = Equation::heat;
    double rho = 1.0;  // volterra only
    WaveScheme scheme = WaveScheme::crank_nicolson;

    static EquationKind heat();
    static EquationKind volterra(double rho);
    static EquationKind wave(WaveScheme scheme);

    // 1 for heat and wave
    double order() const { return equation == Equation::volterra ? rho : 1.0; }
};

std::string equation_name(Equation e);
std::string scheme_name(WaveScheme s);
int scheme_order(WaveScheme s);

struct Mat2 {
    double a00 = 1.0, a01 = 0.0, a10 = 0.0, a11 = 1.0;

    std::array<double, 2> apply(double x, double y) const {
        return {a00 * x + a01 * y, a10 * x + a11 * y};
    }
};

Mat2 operator*(const Mat2& a, const Mat2& b);

using ModeFactor = std::variant<double, Mat2>;

ModeFactor exact_mode_factor(const EquationKind& kind, double lambda, double t);

struct CqWeights {
    double rho = 1.0;
    double dt = 0.0;
    std::vector<double> weights;  // omega_0 .. omega_{N-1}
};

CqWeights cq_weights(double rho, double dt, int N);

double be_mode_power(double lambda_h, double dt, int n);

// x_1..x_N of the convolution quadrature recurrence started from x0.
std::vector<double> cq_mode_solve(double lambda_h, const CqWeights& w, int N,
                                  const std::vector<double>& forcing, double x0 = 0.0);

std::complex<double> wave_rational(WaveScheme scheme, std::complex<double> z);

Mat2 rational_wave_mode(WaveScheme scheme, double dt, double lambda_h);

// n-th power of rational_wave_mode, through the eigenvalues of the 2x2 block
Mat2 rational_wave_power(WaveScheme scheme, double dt, double lambda_h, int n);

struct StabilityResult {
    bool stable = false;
    double max_modulus = 0.0;
};

StabilityResult i_stability_check(WaveScheme scheme, const std::vector<double>& y_grid);

// Per-mode discrete family Ẽ(t) for one discrete eigenvalue. With a step the
// family is piecewise constant on (t_{n-1}, t_n]; without a step it is the
// exact family evaluated at the discrete eigenvalue.
class DiscreteFamily {
public:
    DiscreteFamily(const EquationKind& kind, double lambda_h, std::optional<double> dt, double T);

    ModeFactor factor(double t) const;
    int step_index(double t) const;  // n = ceil(t / dt), 0 at t = 0

    // value of the scalar factor (or the [0][1] entry for wave) after n steps
    double noise_entry(int n) const { return noise_[static_cast<std::size_t>(n)]; }
    ModeFactor terminal() const;

private:
    EquationKind kind_;
    double lambda_;
    std::optional<double> dt_;
    double horizon_;
    int steps_ = 0;
    std::vector<double> noise_;
};

// noise response values after n = 0..N steps: heat r^n, volterra homogeneous
// CQ solution, wave [0][1] entry of R^n
std::vector<double> discrete_noise_trajectory(const EquationKind& kind, double lambda_h, double dt,
                                              int N);

}  // namespace levyspde
