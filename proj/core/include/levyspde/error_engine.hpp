#pragma once

#include "levyspde/levy_noise.hpp"
#include "levyspde/propagators.hpp"
#include "levyspde/spectral.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace levyspde {

class RegularityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Spectral coefficients of X_0; `second` is the velocity component (wave only).
struct InitialData {
    std::vector<double> first;
    std::vector<double> second;
};

struct QuadratureOptions {
    int nodes = 8;
    int representation_nodes = 16;
    bool tamper_cross_term = false;  // flips the sign of the cross term; mutation testing only
};

struct Setup {
    EquationKind kind;
    DirichletSpectrum spectrum;
    std::shared_ptr<const FemSpace> fem;  // null: spectral Galerkin space
    CovarianceSpec covariance;
    LevyLaw law = CompoundPoisson{};
    double horizon = 1.0;
    std::optional<double> step;  // null: exact in time
    InitialData x0;
    QuadratureOptions quadrature;
    std::optional<double> beta;  // if set, the covariance must satisfy the condition at beta

    int steps() const;
};

void validate_setup(const Setup& setup);

struct ErrorReport {
    double strong_error = 0.0;
    double weak_error_quadratic = 0.0;
    double representation_value = 0.0;
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;
};

// All three deterministic quantities in one pass.
ErrorReport deterministic_errors(const Setup& setup);

double strong_error(const Setup& setup);
double weak_error_quadratic(const Setup& setup);
double representation_quadratic(const Setup& setup);

// g(x) = |x|^2 (first component), or g(x) = cos(sum_i w_i <phi_{k_i}, x>).
struct TestFunction {
    enum class Kind { quadratic, cosine } kind = Kind::quadratic;
    std::vector<int> modes;
    std::vector<double> weights;

    static TestFunction quadratic() { return {}; }
    static TestFunction cosine(std::vector<int> modes, std::vector<double> weights);
};

struct McResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

McResult mc_weak_error(const Setup& setup, const TestFunction& g, std::size_t n_paths,
                       std::uint64_t seed);

// Terminal first-component coefficients of one coupled sample: exact (spectral
// coordinates) and discrete (discrete eigen-coordinates).
struct CoupledSample {
    std::vector<double> exact;
    std::vector<double> discrete;
};

CoupledSample coupled_sample(const Setup& setup, std::uint64_t seed, std::uint32_t path);


// sup over modes of |(Ẽ(s) - E(s)) phi_k| for each s
std::vector<double> propagator_error_profile(const Setup& setup, const std::vector<double>& s_grid);

}  // namespace levyspde
