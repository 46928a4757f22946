#pragma once

#include "levyspde/error_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyspde {

enum class Axis { spatial, temporal };

struct McSettings {
    std::size_t paths = 0;
    std::uint64_t seed = 0;
};

struct StudyConfig {
    std::string name;
    EquationKind kind;
    Axis axis = Axis::temporal;
    double beta = 1.0;
    double amplitude = 1.0;
    std::optional<double> decay;  // derived from beta when absent
    LevyLaw law = CompoundPoisson{};
    double horizon = 1.0;
    std::vector<double> ladder;                // h (spatial) or dt (temporal), decreasing
    std::optional<double> fixed_resolution;    // dt for spatial studies, h for temporal ones
    int modes = 1024;
    InitialData x0;
    TestFunction g;
    std::optional<McSettings> monte_carlo;
    std::string output;
    QuadratureOptions quadrature;
};

// s = beta - 1/rho + 1/2 + 0.05
double derived_decay(double beta, double rho);

struct StudyRow {
    int level = 0;
    double resolution = 0.0;
    double strong = 0.0;
    double weak_quad = 0.0;
    double representation = 0.0;
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;
    int fitted = 0;  // bit 0: strong used in the fit, bit 1: weak used
};

enum class Column { strong, weak, representation, mc };

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int levels_used = 0;
};

class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr double kFitFloor = 1e-13;
constexpr double kSlopeTolerance = 0.15;

RateFit fit_rate(const std::vector<StudyRow>& rows, Column column);

struct ExpectedRates {
    double spatial_weak = 0.0;
    double temporal_weak = 0.0;
    double spatial_strong = 0.0;
    double temporal_strong = 0.0;
    bool beta_out_of_range = false;
};

ExpectedRates expected_rates(Equation kind, double beta, double rho, int p, int r);

struct StudyResult {
    StudyConfig config;
    double decay = 0.0;
    HsCondition condition;
    double tail_ratio = 0.0;
    std::vector<StudyRow> rows;
    std::optional<RateFit> weak_fit;
    std::optional<RateFit> strong_fit;
    ExpectedRates expected;
    double expected_weak = 0.0;
    double expected_strong = 0.0;
    bool weak_pass = false;
    bool strong_pass = false;

    bool passed() const { return weak_pass && strong_pass; }
};

// Builds the error-engine setup for one ladder level.
Setup level_setup(const StudyConfig& config, double resolution);

StudyResult run_study(const StudyConfig& config);

std::string format_csv(const StudyResult& result);
void emit_csv(const StudyResult& result, const std::filesystem::path& path);

// Rows of a file written by emit_csv.
std::vector<StudyRow> parse_csv(const std::filesystem::path& path);

std::string format_summary(const StudyResult& result);

}  // namespace levyspde

namespace levyspde {

struct LabelledSetup {
    std::string label;
    Setup setup;
};

// 3 equations x {spectral space with time steps, finite elements exact in
// time} x {smooth, rough covariance}, all with nonzero initial data.
std::vector<LabelledSetup> representation_sweep(const QuadratureOptions& quadrature = {});

struct RepresentationCheck {
    std::string label;
    double weak = 0.0;
    double representation = 0.0;
    double relative = 0.0;
};

// |rep - weak| / max(|weak|, 1e-14)
RepresentationCheck check_representation(const LabelledSetup& s);

}  // namespace levyspde
