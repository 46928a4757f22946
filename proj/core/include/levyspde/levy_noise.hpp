#pragma once

#include "levyspde/spectral.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace levyspde {

class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// q_k = c * lambda_k^{-s}, or an explicit positive nonincreasing sequence.
struct CovarianceSpec {
    double amplitude = 1.0;
    std::optional<double> decay;
    std::vector<double> explicit_values;

    static CovarianceSpec power_law(double c, double s);
    static CovarianceSpec sequence(std::vector<double> q);

    double eigenvalue(const DirichletSpectrum& spec, int k) const;
    std::vector<double> eigenvalues(const DirichletSpectrum& spec) const;
    bool is_zero() const;
};

enum class JumpLaw { two_point, normal };

struct VarianceGamma {
    double nu = 1.0;  // variance rate of the gamma subordinator
};

struct CompoundPoisson {
    double intensity = 1.0;
    JumpLaw jumps = JumpLaw::two_point;
};

// L(t) = W(Z(t)) with one gamma subordinator Z shared by all modes.
struct SubordinatedWiener {
    double nu = 1.0;
};

using LevyLaw = std::variant<VarianceGamma, CompoundPoisson, SubordinatedWiener>;

std::string law_name(const LevyLaw& law);

// integral of xi^2 against the per-mode jump measure per unit time
double jump_second_moment(const LevyLaw& law);

enum class ConditionFlag { converges, diverges, unknown };

struct HsCondition {
    double partial_sum = 0.0;
    std::optional<double> tail_bound;
    ConditionFlag flag = ConditionFlag::unknown;
    std::optional<double> exponent;  // 2(s + 1/rho - beta)
};

HsCondition hs_condition(const DirichletSpectrum& spec, const CovarianceSpec& cov, double beta,
                         double rho);

double weqii_functional(const DirichletSpectrum& spec, const CovarianceSpec& cov,
                        const std::vector<double>& second_moments, double beta, int m);

// Key of the random streams used by one sample: each mode draws from its own
// stream (seed, path, mode, substream).
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint32_t path = 0;
    std::uint32_t substream = 0;
};

std::vector<double> sample_increments(const LevyLaw& law, double dt, int K, StreamKey key);

struct Jump {
    double time;
    double size;
};

struct JumpPath {
    double horizon = 0.0;
    std::vector<std::vector<Jump>> modes;  // sorted by time
};

// Jump sizes are rounded to a dyadic lattice so that every partial sum of a
// mode's jumps is exact in double precision.
JumpPath sample_jump_path(const LevyLaw& law, double T, int K, StreamKey key);

// t_n = T * n / N
std::vector<double> uniform_grid(double T, int N);

// increments[k][n-1] = sum of jumps of mode k with time in (t_{n-1}, t_n]
std::vector<std::vector<double>> increments_from_path(const JumpPath& path,
                                                      const std::vector<double>& grid);

double terminal_value(const JumpPath& path, int mode_index);

}  // namespace levyspde
