#include "levyspde/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace levyspde {

namespace {

std::string num(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

double column_value(const StudyRow& r, Column c) {
    switch (c) {
        case Column::strong: return r.strong;
        case Column::weak: return r.weak_quad;
        case Column::representation: return r.representation;
        case Column::mc: return r.mc_estimate ? *r.mc_estimate : std::nan("");
    }
    return std::nan("");
}

int level_count(double resolution) { return static_cast<int>(std::lround(1.0 / resolution)); }

}  // namespace

double derived_decay(double beta, double rho) { return beta - 1.0 / rho + 0.5 + 0.05; }

RateFit fit_rate(const std::vector<StudyRow>& rows, Column column) {
    std::vector<double> xs, ys;
    for (const StudyRow& r : rows) {
        const double v = std::abs(column_value(r, column));
        if (std::isfinite(v) && v >= kFitFloor && r.resolution > 0.0) {
            xs.push_back(std::log(r.resolution));
            ys.push_back(std::log(v));
        }
    }
    if (xs.size() < 3) {
        throw InsufficientData("rate fit needs at least 3 levels above the floor, have " +
                               std::to_string(xs.size()));
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    RateFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    f.levels_used = static_cast<int>(xs.size());
    return f;
}

ExpectedRates expected_rates(Equation kind, double beta, double rho, int p, int r) {
    ExpectedRates e;
    switch (kind) {
        case Equation::heat:
            e = {2.0 * beta, beta, beta, beta / 2.0, false};
            e.beta_out_of_range = !(beta > 0.0 && beta <= 1.0);
            break;
        case Equation::volterra:
            e = {2.0 * beta, rho * beta, beta, rho * beta / 2.0, false};
            e.beta_out_of_range = !(beta > 0.0 && beta <= 1.0 / rho);
            break;
        case Equation::wave: {
            const double rr = r;
            const double pp = p;
            e.spatial_weak = std::min(2.0 * beta * rr / (rr + 1.0), rr);
            e.temporal_weak = std::min(2.0 * beta * pp / (pp + 1.0), 1.0);
            e.spatial_strong = std::min(beta * rr / (rr + 1.0), rr);
            e.temporal_strong = std::min(beta * pp / (pp + 1.0), 1.0);
            e.beta_out_of_range = !(beta > 0.0);
            break;
        }
    }
    return e;
}

Setup level_setup(const StudyConfig& c, double resolution) {
    Setup s;
    s.kind = c.kind;
    s.spectrum = dirichlet_spectrum(c.modes);
    s.covariance = CovarianceSpec::power_law(c.amplitude,
                                             c.decay ? *c.decay : derived_decay(c.beta, c.kind.order()));
    s.law = c.law;
    s.horizon = c.horizon;
    s.x0 = c.x0;
    s.quadrature = c.quadrature;
    s.beta = c.beta;
    auto fem_for = [&](double h) {
        const int M = level_count(h);
        if (std::abs(M * h - 1.0) > 1e-9) {
            throw std::invalid_argument("mesh width must be 1/M, got " + num(h));
        }
        if (M > c.modes) {
            throw std::invalid_argument("mesh with " + std::to_string(M) + " cells needs at least " +
                                        std::to_string(M) + " spectral modes; raise `modes`");
        }
        return std::make_shared<const FemSpace>(assemble_fem(M));
    };
    if (c.axis == Axis::temporal) {
        s.step = resolution;
        if (c.fixed_resolution) {
            s.fem = fem_for(*c.fixed_resolution);
        }
    } else {
        s.fem = fem_for(resolution);
        s.step = c.fixed_resolution;
    }
    return s;
}

StudyResult run_study(const StudyConfig& c) {
    if (c.ladder.size() < 4) {
        throw std::invalid_argument("a ladder needs at least 4 levels");
    }
    for (std::size_t i = 1; i < c.ladder.size(); ++i) {
        if (!(c.ladder[i] < c.ladder[i - 1])) {
            throw std::invalid_argument("ladder must be strictly decreasing");
        }
    }
    if (c.monte_carlo && !std::holds_alternative<CompoundPoisson>(c.law)) {
        throw UnsupportedOperation("Monte Carlo columns need compound_poisson noise");
    }
    StudyResult res;
    res.config = c;
    res.decay = c.decay ? *c.decay : derived_decay(c.beta, c.kind.order());
    const auto spectrum = dirichlet_spectrum(c.modes);
    const auto cov = CovarianceSpec::power_law(c.amplitude, res.decay);
    res.condition = hs_condition(spectrum, cov, c.beta, c.kind.order());
    if (res.condition.flag == ConditionFlag::diverges) {
        throw RegularityError("covariance diverges at beta = " + num(c.beta) +
                              ": exponent 2(s + 1/rho - beta) = " + num(*res.condition.exponent) +
                              " is not above 1");
    }
    res.tail_ratio = res.condition.tail_bound && res.condition.partial_sum > 0.0
                         ? *res.condition.tail_bound / res.condition.partial_sum
                         : 0.0;
    // validate every level before the expensive part
    for (double r : c.ladder) {
        validate_setup(level_setup(c, r));
    }
    for (std::size_t i = 0; i < c.ladder.size(); ++i) {
        const Setup s = level_setup(c, c.ladder[i]);
        const ErrorReport e = deterministic_errors(s);
        StudyRow row;
        row.level = static_cast<int>(i);
        row.resolution = c.ladder[i];
        row.strong = e.strong_error;
        row.weak_quad = e.weak_error_quadratic;
        row.representation = e.representation_value;
        if (c.monte_carlo) {
            const McResult mc = mc_weak_error(s, c.g, c.monte_carlo->paths, c.monte_carlo->seed);
            row.mc_estimate = mc.estimate;
            row.mc_stderr = mc.stderr_;
        }
        row.fitted = (std::abs(row.strong) >= kFitFloor ? 1 : 0) |
                     (std::abs(row.weak_quad) >= kFitFloor ? 2 : 0);
        res.rows.push_back(row);
    }
    const int p = c.kind.equation == Equation::wave ? scheme_order(c.kind.scheme) : 1;
    res.expected = expected_rates(c.kind.equation, c.beta, c.kind.rho, p, 2);
    const bool spatial = c.axis == Axis::spatial;
    res.expected_weak = spatial ? res.expected.spatial_weak : res.expected.temporal_weak;
    res.expected_strong = spatial ? res.expected.spatial_strong : res.expected.temporal_strong;
    try {
        res.weak_fit = fit_rate(res.rows, Column::weak);
        res.weak_pass = res.weak_fit->slope >= res.expected_weak - kSlopeTolerance;
    } catch (const InsufficientData&) {
    }
    try {
        res.strong_fit = fit_rate(res.rows, Column::strong);
        res.strong_pass = std::abs(res.strong_fit->slope - res.expected_strong) <= kSlopeTolerance;
    } catch (const InsufficientData&) {
    }
    return res;
}

std::string format_csv(const StudyResult& r) {
    std::ostringstream os;
    const StudyConfig& c = r.config;
    os << "# study: " << c.name << "\n";
    os << "# equation: " << equation_name(c.kind.equation);
    if (c.kind.equation == Equation::volterra) {
        os << " rho=" << num(c.kind.rho);
    }
    if (c.kind.equation == Equation::wave) {
        os << " scheme=" << scheme_name(c.kind.scheme);
    }
    os << "\n";
    os << "# axis: " << (c.axis == Axis::spatial ? "spatial" : "temporal") << "\n";
    os << "# beta: " << num(c.beta) << " decay: " << num(r.decay) << " amplitude: " << num(c.amplitude)
       << "\n";
    os << "# noise: " << law_name(c.law) << "\n";
    os << "# horizon: " << num(c.horizon) << " modes: " << c.modes << "\n";
    os << "# covariance partial sum: " << num(r.condition.partial_sum)
       << " tail bound: " << opt_num(r.condition.tail_bound) << " tail ratio: " << num(r.tail_ratio)
       << "\n";
    if (c.monte_carlo) {
        os << "# seed: " << c.monte_carlo->seed << " paths: " << c.monte_carlo->paths << "\n";
    }
    os << "level,resolution,strong,weak_quad,representation,mc_estimate,mc_stderr,fitted\n";
    for (const StudyRow& row : r.rows) {
        os << row.level << ',' << num(row.resolution) << ',' << num(row.strong) << ','
           << num(row.weak_quad) << ',' << num(row.representation) << ',' << opt_num(row.mc_estimate)
           << ',' << opt_num(row.mc_stderr) << ',' << row.fitted << "\n";
    }
    return os.str();
}

void emit_csv(const StudyResult& result, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << format_csv(result);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::vector<StudyRow> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::vector<StudyRow> rows;
    std::string line;
    bool header = false;
    auto parse_opt = [](const std::string& s) -> std::optional<double> {
        if (s == "nan") {
            return std::nullopt;
        }
        return std::stod(s);
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header) {
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 8) {
            throw std::runtime_error("malformed row: " + line);
        }
        StudyRow r;
        r.level = std::stoi(f[0]);
        r.resolution = std::stod(f[1]);
        r.strong = std::stod(f[2]);
        r.weak_quad = std::stod(f[3]);
        r.representation = std::stod(f[4]);
        r.mc_estimate = parse_opt(f[5]);
        r.mc_stderr = parse_opt(f[6]);
        r.fitted = std::stoi(f[7]);
        rows.push_back(r);
    }
    return rows;
}

std::string format_summary(const StudyResult& r) {
    std::ostringstream os;
    auto fit = [&](const char* what, const std::optional<RateFit>& f, double expected, bool pass) {
        os << what << " slope ";
        if (f) {
            os << num(f->slope) << " (r^2 " << num(f->r_squared) << ", " << f->levels_used << " levels)";
        } else {
            os << "n/a";
        }
        os << " expected " << num(expected) << " -> " << (pass ? "PASS" : "FAIL") << "\n";
    };
    os << "study " << r.config.name << "\n";
    fit("weak  ", r.weak_fit, r.expected_weak, r.weak_pass);
    fit("strong", r.strong_fit, r.expected_strong, r.strong_pass);
    if (r.expected.beta_out_of_range) {
        os << "warning: beta outside the range where the expected rates apply\n";
    }
    os << "covariance tail ratio " << num(r.tail_ratio) << "\n";
    return os.str();
}

}  // namespace levyspde

namespace levyspde {

std::vector<LabelledSetup> representation_sweep(const QuadratureOptions& quadrature) {
    std::vector<LabelledSetup> out;
    const EquationKind kinds[] = {EquationKind::heat(), EquationKind::volterra(1.5),
                                  EquationKind::wave(WaveScheme::crank_nicolson)};
    const double decays[] = {1.0, 0.3};
    auto fem = std::make_shared<const FemSpace>(assemble_fem(16));
    for (const EquationKind& kind : kinds) {
        for (int variant = 0; variant < 2; ++variant) {
            for (double s : decays) {
                Setup st;
                st.kind = kind;
                st.spectrum = dirichlet_spectrum(256);
                st.covariance = CovarianceSpec::power_law(1.0, s);
                st.horizon = kind.equation == Equation::wave ? 0.75 : 1.0;
                st.x0.first = {1.0, -0.5, 0.25, 0.125};
                if (kind.equation == Equation::wave) {
                    st.x0.second = {0.5, 2.0, 0.0, -1.0};
                }
                st.quadrature = quadrature;
                std::string label = equation_name(kind.equation);
                if (variant == 0) {
                    st.step = st.horizon / 32.0;
                    label += "/spectral+dt";
                } else {
                    st.fem = fem;
                    label += "/fem16";
                }
                label += "/s=" + num(s);
                out.push_back({label, st});
            }
        }
    }
    return out;
}

RepresentationCheck check_representation(const LabelledSetup& s) {
    const ErrorReport e = deterministic_errors(s.setup);
    RepresentationCheck c;
    c.label = s.label;
    c.weak = e.weak_error_quadratic;
    c.representation = e.representation_value;
    c.relative = std::abs(c.representation - c.weak) / std::max(std::abs(c.weak), 1e-14);
    return c;
}

}  // namespace levyspde
