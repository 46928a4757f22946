#include "levyspde/error_engine.hpp"
#include "levyspde/mittag_leffler.hpp"
#include "levyspde/parallel.hpp"
#include "levyspde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace levyspde {

namespace {

constexpr double kCouplingFloor = 1e-12;
constexpr double kHeatCutoff = 1e-13;

struct Coupling {
    int j;
    double d;
    double d2;
};

struct ModeSums {
    double strong = 0.0;
    double weak = 0.0;
    double representation = 0.0;
};

// Everything the error formulas need, in the two eigenbases.
class Model {
public:
    explicit Model(const Setup& s) : setup_(s), kind_(s.kind), T_(s.horizon), dt_(s.step) {
        K_ = s.spectrum.mode_count;
        lam_ = s.spectrum.eigenvalues;
        q_ = s.covariance.eigenvalues(s.spectrum);
        couplings_.resize(static_cast<std::size_t>(K_));
        resolved_.assign(static_cast<std::size_t>(K_), 0.0);
        if (!s.fem) {
            J_ = K_;
            mu_ = lam_;
            for (int k = 0; k < K_; ++k) {
                couplings_[static_cast<std::size_t>(k)] = {Coupling{k, 1.0, 1.0}};
                resolved_[static_cast<std::size_t>(k)] = 1.0;
            }
        } else {
            J_ = s.fem->interior_dim();
            mu_.assign(s.fem->eigenvalues.data(), s.fem->eigenvalues.data() + J_);
            D_ = projection_coordinates(*s.fem, s.spectrum);
            for (int k = 0; k < K_; ++k) {
                auto& c = couplings_[static_cast<std::size_t>(k)];
                double sum = 0.0;
                for (int j = 0; j < J_; ++j) {
                    const double d = D_(j, k);
                    if (std::abs(d) > kCouplingFloor) {
                        c.push_back(Coupling{j, d, d * d});
                        sum += d * d;
                    }
                }
                resolved_[static_cast<std::size_t>(k)] = sum;
            }
        }
        if (kind_.equation == Equation::volterra) {
            ml_ = mittag_leffler_evaluator(kind_.rho);
        }
        if (dt_) {
            N_ = s.steps();
            traj_.resize(static_cast<std::size_t>(J_));
            parallel_for(static_cast<std::size_t>(J_), [&](std::size_t j) {
                traj_[j] = discrete_noise_trajectory(kind_, mu_[j], *dt_, N_);
            });
        }
    }

    int K() const { return K_; }
    int J() const { return J_; }
    double q(int k) const { return q_[static_cast<std::size_t>(k)]; }
    double lambda(int k) const { return lam_[static_cast<std::size_t>(k)]; }
    double mu(int j) const { return mu_[static_cast<std::size_t>(j)]; }
    const std::vector<Coupling>& couplings(int k) const { return couplings_[static_cast<std::size_t>(k)]; }
    double resolved(int k) const { return resolved_[static_cast<std::size_t>(k)]; }
    bool spectral() const { return !setup_.fem; }
    double coordinate(int j, int k) const { return spectral() ? (j == k ? 1.0 : 0.0) : D_(j, k); }
    const std::optional<double>& dt() const { return dt_; }
    int N() const { return N_; }
    double T() const { return T_; }
    const EquationKind& kind() const { return kind_; }

    // response of the first component to a unit impulse in the noise channel
    double noise_entry(double lambda, double u) const {
        switch (kind_.equation) {
            case Equation::heat: return std::exp(-lambda * u);
            case Equation::volterra: return (*ml_)(lambda * std::pow(u, kind_.rho));
            case Equation::wave: {
                const double w = std::sqrt(lambda);
                return std::sin(w * u) / w;
            }
        }
        return 0.0;
    }

    double discrete_noise(int j, int n, double u) const {
        if (dt_) {
            return traj_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
        }
        return noise_entry(mu(j), u);
    }

    // first row of the exact / discrete operator at time t
    std::array<double, 2> exact_first_row(double lambda, double t) const {
        const ModeFactor f = exact_mode_factor(kind_, lambda, t);
        if (const auto* m = std::get_if<Mat2>(&f)) {
            return {m->a00, m->a01};
        }
        return {std::get<double>(f), 0.0};
    }

    std::array<double, 2> discrete_first_row(int j, int n, double t) const {
        if (!dt_) {
            return exact_first_row(mu(j), t);
        }
        if (kind_.equation == Equation::wave) {
            const Mat2 m = rational_wave_power(kind_.scheme, *dt_, mu(j), n);
            return {m.a00, m.a01};
        }
        return {traj_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)], 0.0};
    }

    int cell_of(double u) const {
        const int n = static_cast<int>(std::floor(u * N_ / T_)) + 1;
        return std::clamp(n, 1, N_);
    }

    int step_of(double t) const {
        if (!dt_ || t <= 0.0) {
            return 0;
        }
        const int n = static_cast<int>(std::ceil(t * N_ / T_ - 1e-12));
        return std::clamp(n, 0, N_);
    }

    void breakpoints(int k, std::vector<double>& pts) const;
    ModeSums mode_sums(int k, std::vector<double>& pts) const;

private:
    const Setup& setup_;
    EquationKind kind_;
    double T_;
    std::optional<double> dt_;
    int N_ = 0;
    int K_ = 0;
    int J_ = 0;
    std::vector<double> lam_, q_, mu_, resolved_;
    std::vector<std::vector<Coupling>> couplings_;
    Eigen::MatrixXd D_;
    std::vector<std::vector<double>> traj_;
    std::shared_ptr<const MittagLefflerNeg> ml_;
};

void Model::breakpoints(int k, std::vector<double>& pts) const {
    pts.clear();
    pts.push_back(0.0);
    pts.push_back(T_);
    if (dt_) {
        for (int n = 1; n < N_; ++n) {
            pts.push_back(T_ * n / N_);
        }
    }
    std::vector<double> rates{lambda(k)};
    if (!dt_) {
        for (const Coupling& c : couplings(k)) {
            rates.push_back(mu(c.j));
        }
    }
    auto add_uniform = [&](double step, double limit) {
        const auto count = static_cast<long>(limit / step);
        for (long m = 1; m <= count; ++m) {
            pts.push_back(step * static_cast<double>(m));
        }
    };
    switch (kind_.equation) {
        case Equation::heat:
            for (double r : rates) {
                add_uniform(2.0 / r, std::min(T_, 40.0 / r));
            }
            break;
        case Equation::volterra: {
            const double damp = std::max(std::abs(std::cos(std::numbers::pi / kind_.rho)), 0.05);
            double grade_from = 0.0;
            for (double r : rates) {
                const double nu = std::pow(r, 1.0 / kind_.rho);
                const double active = std::min(T_, 40.0 / (damp * nu));
                add_uniform(2.0 / nu, active);
                for (double u = active * 1.5; u < T_; u *= 1.5) {
                    pts.push_back(u);
                }
                grade_from = std::max(grade_from, 1.0 / nu);
            }
            grade_from = std::min(grade_from, T_);
            for (int m = 0; m <= 50; ++m) {
                pts.push_back(std::ldexp(grade_from, -m));
            }
            break;
        }
        case Equation::wave: {
            double w = 0.0;
            for (double r : rates) {
                w = std::max(w, std::sqrt(r));
            }
            add_uniform(2.0 / w, T_);
            break;
        }
    }
    std::sort(pts.begin(), pts.end());
    const double tiny = 1e-14 * T_;
    std::size_t out = 1;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i] > T_) {
            break;
        }
        if (pts[i] - pts[out - 1] > tiny) {
            pts[out++] = pts[i];
        }
    }
    pts.resize(out);
    if (pts.back() < T_) {
        pts.back() = T_;
    }
}

ModeSums Model::mode_sums(int k, std::vector<double>& pts) const {
    breakpoints(k, pts);
    const GaussRule& rule = gauss_rule(setup_.quadrature.nodes);
    const GaussRule& rep_rule = gauss_rule(setup_.quadrature.representation_nodes);
    const double cross_sign = setup_.quadrature.tamper_cross_term ? -2.0 : 2.0;
    const auto& cps = couplings(k);
    const double lam = lambda(k);
    const double unresolved = 1.0 - resolved(k);
    const bool heat = kind_.equation == Equation::heat;

    double strong = 0.0, weak = 0.0, rep = 0.0, mass = 0.0;
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        const double a = pts[p];
        const double b = pts[p + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        const int n = dt_ ? cell_of(mid) : 0;

        double s_strong = 0.0, s_weak = 0.0, s_mass = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
            const double u = mid + half * rule.nodes[static_cast<std::size_t>(i)];
            const double eta = noise_entry(lam, u);
            double disc2 = 0.0, f2 = 0.0;
            for (const Coupling& c : cps) {
                const double e = discrete_noise(c.j, n, u);
                disc2 += c.d2 * e * e;
                const double diff = e - eta;
                f2 += c.d2 * diff * diff;
            }
            f2 += eta * eta * unresolved;
            const double w = rule.weights[static_cast<std::size_t>(i)];
            s_strong += w * f2;
            s_weak += w * (disc2 - eta * eta);
            s_mass += w * (disc2 + eta * eta);
        }
        double s_rep = 0.0;
        for (int i = 0; i < rep_rule.size(); ++i) {
            const double u = mid + half * rep_rule.nodes[static_cast<std::size_t>(i)];
            const double eta = noise_entry(lam, u);
            double disc1 = 0.0, f2 = 0.0;
            for (const Coupling& c : cps) {
                const double e = discrete_noise(c.j, n, u);
                disc1 += c.d2 * e;
                const double diff = e - eta;
                f2 += c.d2 * diff * diff;
            }
            f2 += eta * eta * unresolved;
            const double cross = eta * disc1 - eta * eta;
            s_rep += rep_rule.weights[static_cast<std::size_t>(i)] * (f2 + cross_sign * cross);
        }
        strong += half * s_strong;
        weak += half * s_weak;
        rep += half * s_rep;
        mass += half * s_mass;

        if (heat && b < T_) {
            // both families decrease in u: bound what is left by its value at b
            double left = noise_entry(lam, b);
            left *= left;
            for (const Coupling& c : cps) {
                const double e = discrete_noise(c.j, n, b);
                left += c.d2 * e * e;
            }
            if (4.0 * (T_ - b) * left <= kHeatCutoff * mass) {
                break;
            }
        }
    }
    return ModeSums{strong, weak, rep};
}

struct InitialTerms {
    double strong = 0.0;
    double weak = 0.0;
    double representation = 0.0;
};

InitialTerms initial_terms(const Model& m, const Setup& s) {
    InitialTerms out;
    const auto& a = s.x0.first;
    const auto& b = s.x0.second;
    if (a.empty() && b.empty()) {
        return out;
    }
    auto coef = [](const std::vector<double>& v, int k) {
        return static_cast<std::size_t>(k) < v.size() ? v[static_cast<std::size_t>(k)] : 0.0;
    };
    const int K = m.K();
    const int J = m.J();
    // exact terminal first component in spectral coordinates
    std::vector<double> ex(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const auto row = m.exact_first_row(m.lambda(k), m.T());
        ex[static_cast<std::size_t>(k)] = row[0] * coef(a, k) + row[1] * coef(b, k);
    }
    // projected data, discrete terminal value, projection of the exact terminal value
    const int n = m.step_of(m.T());
    std::vector<double> w(static_cast<std::size_t>(J)), c(static_cast<std::size_t>(J));
    for (int j = 0; j < J; ++j) {
        double ya = 0.0, yb = 0.0, cj = 0.0;
        for (int k = 0; k < K; ++k) {
            const double d = m.coordinate(j, k);
            if (d == 0.0) {
                continue;
            }
            ya += d * coef(a, k);
            yb += d * coef(b, k);
            cj += d * ex[static_cast<std::size_t>(k)];
        }
        const auto row = m.discrete_first_row(j, n, m.T());
        w[static_cast<std::size_t>(j)] = row[0] * ya + row[1] * yb;
        c[static_cast<std::size_t>(j)] = cj;
    }
    double ex2 = 0.0, w2 = 0.0, c2 = 0.0, wc = 0.0, diff2 = 0.0;
    for (double v : ex) {
        ex2 += v * v;
    }
    for (int j = 0; j < J; ++j) {
        const double wj = w[static_cast<std::size_t>(j)];
        const double cj = c[static_cast<std::size_t>(j)];
        w2 += wj * wj;
        c2 += cj * cj;
        wc += wj * cj;
        diff2 += (wj - cj) * (wj - cj);
    }
    const double complement = m.spectral() ? 0.0 : ex2 - c2;
    const double sign = s.quadrature.tamper_cross_term ? -2.0 : 2.0;
    out.strong = diff2 + complement;
    out.weak = w2 - ex2;
    out.representation = diff2 + complement + sign * (wc - ex2);
    return out;
}

double energy_factor(double lambda) { return lambda; }

}  // namespace

int Setup::steps() const {
    if (!step) {
        return 0;
    }
    const double r = horizon / *step;
    const long n = std::lround(r);
    if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * r) {
        throw std::invalid_argument("time step must divide the horizon");
    }
    return static_cast<int>(n);
}

void validate_setup(const Setup& s) {
    if (s.spectrum.mode_count < 1) {
        throw std::invalid_argument("setup needs at least one mode");
    }
    if (s.spectrum.domain_length != 1.0) {
        throw std::invalid_argument("setup requires the unit interval");
    }
    if (!(s.horizon > 0.0)) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (s.step) {
        if (!(*s.step > 0.0)) {
            throw std::invalid_argument("time step must be positive");
        }
        (void)s.steps();
    }
    if (s.kind.equation == Equation::volterra && !(s.kind.rho > 1.0 && s.kind.rho < 2.0)) {
        throw std::invalid_argument("volterra requires rho in (1, 2)");
    }
    if (s.kind.equation == Equation::wave) {
        std::vector<double> grid;
        for (int i = -400; i <= 400; ++i) {
            grid.push_back(std::ldexp(static_cast<double>(i), -4) * std::pow(1.05, std::abs(i)));
        }
        const auto st = i_stability_check(s.kind.scheme, grid);
        if (!st.stable) {
            throw std::invalid_argument("scheme " + scheme_name(s.kind.scheme) +
                                        " is not I-stable (max |R(iy)| = " +
                                        std::to_string(st.max_modulus) + ")");
        }
    } else if (!s.x0.second.empty()) {
        throw std::invalid_argument("a second initial component is only meaningful for wave");
    }
    if (s.quadrature.nodes < 1 || s.quadrature.representation_nodes < 1) {
        throw std::invalid_argument("quadrature node counts must be positive");
    }
    (void)gauss_rule(s.quadrature.nodes);
    (void)gauss_rule(s.quadrature.representation_nodes);
    if (s.beta && !s.covariance.is_zero()) {
        const auto hs = hs_condition(s.spectrum, s.covariance, *s.beta, s.kind.order());
        if (hs.flag == ConditionFlag::diverges) {
            throw RegularityError("covariance too rough for beta = " + std::to_string(*s.beta) +
                                  ": exponent 2(s + 1/rho - beta) = " +
                                  std::to_string(*hs.exponent) + " must exceed 1");
        }
    }
}

ErrorReport deterministic_errors(const Setup& setup) {
    validate_setup(setup);
    const Model m(setup);
    const InitialTerms init = initial_terms(m, setup);
    ErrorReport r;
    if (setup.covariance.is_zero()) {
        r.strong_error = std::sqrt(std::max(init.strong, 0.0));
        r.weak_error_quadratic = init.weak;
        r.representation_value = init.representation;
        return r;
    }
    const auto K = static_cast<std::size_t>(m.K());
    std::vector<double> strong(K), weak(K), rep(K);
    parallel_for(K, [&](std::size_t k) {
        thread_local std::vector<double> pts;
        const ModeSums ms = m.mode_sums(static_cast<int>(k), pts);
        const double q = m.q(static_cast<int>(k));
        strong[k] = q * ms.strong;
        weak[k] = q * ms.weak;
        rep[k] = q * ms.representation;
    });
    r.strong_error = std::sqrt(std::max(init.strong + pairwise_sum(strong), 0.0));
    r.weak_error_quadratic = init.weak + pairwise_sum(weak);
    r.representation_value = init.representation + pairwise_sum(rep);
    return r;
}

double strong_error(const Setup& setup) { return deterministic_errors(setup).strong_error; }

double weak_error_quadratic(const Setup& setup) {
    return deterministic_errors(setup).weak_error_quadratic;
}

double representation_quadratic(const Setup& setup) {
    return deterministic_errors(setup).representation_value;
}

TestFunction TestFunction::cosine(std::vector<int> modes, std::vector<double> weights) {
    if (modes.empty() || modes.size() != weights.size()) {
        throw std::invalid_argument("cosine test function needs matching modes and weights");
    }
    TestFunction g;
    g.kind = Kind::cosine;
    g.modes = std::move(modes);
    g.weights = std::move(weights);
    return g;
}

namespace {

CoupledSample coupled_sample_impl(const Model& m, const Setup& s, std::uint64_t seed,
                                  std::uint32_t path_index) {
    const int K = m.K();
    const int J = m.J();
    const JumpPath path = sample_jump_path(s.law, s.horizon, K, StreamKey{seed, path_index, 0});
    auto coef = [](const std::vector<double>& v, int k) {
        return static_cast<std::size_t>(k) < v.size() ? v[static_cast<std::size_t>(k)] : 0.0;
    };
    CoupledSample out;
    out.exact.resize(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const auto row = m.exact_first_row(m.lambda(k), s.horizon);
        double x = row[0] * coef(s.x0.first, k) + row[1] * coef(s.x0.second, k);
        const double sq = std::sqrt(m.q(k));
        for (const Jump& jp : path.modes[static_cast<std::size_t>(k)]) {
            x += sq * jp.size * m.noise_entry(m.lambda(k), s.horizon - jp.time);
        }
        out.exact[static_cast<std::size_t>(k)] = x;
    }

    // projected initial data
    std::vector<double> ya(static_cast<std::size_t>(J), 0.0), yb(static_cast<std::size_t>(J), 0.0);
    for (int j = 0; j < J; ++j) {
        for (int k = 0; k < K; ++k) {
            const double d = m.coordinate(j, k);
            if (d != 0.0) {
                ya[static_cast<std::size_t>(j)] += d * coef(s.x0.first, k);
                yb[static_cast<std::size_t>(j)] += d * coef(s.x0.second, k);
            }
        }
    }
    out.discrete.resize(static_cast<std::size_t>(J));
    if (!s.step) {
        for (int j = 0; j < J; ++j) {
            const auto row = m.exact_first_row(m.mu(j), s.horizon);
            double y = row[0] * ya[static_cast<std::size_t>(j)] + row[1] * yb[static_cast<std::size_t>(j)];
            for (int k = 0; k < K; ++k) {
                const double d = m.coordinate(j, k);
                if (d == 0.0) {
                    continue;
                }
                const double sq = d * std::sqrt(m.q(k));
                for (const Jump& jp : path.modes[static_cast<std::size_t>(k)]) {
                    y += sq * jp.size * m.noise_entry(m.mu(j), s.horizon - jp.time);
                }
            }
            out.discrete[static_cast<std::size_t>(j)] = y;
        }
        return out;
    }

    const int N = m.N();
    const auto inc = increments_from_path(path, uniform_grid(s.horizon, N));
    const double dt = *s.step;
    std::optional<CqWeights> weights;
    if (m.kind().equation == Equation::volterra) {
        weights = cq_weights(m.kind().rho, dt, N);
    }
    std::vector<double> forcing(static_cast<std::size_t>(N));
    for (int j = 0; j < J; ++j) {
        std::fill(forcing.begin(), forcing.end(), 0.0);
        for (int k = 0; k < K; ++k) {
            const double d = m.coordinate(j, k);
            if (d == 0.0) {
                continue;
            }
            const double sq = d * std::sqrt(m.q(k));
            const auto& row = inc[static_cast<std::size_t>(k)];
            for (int n = 0; n < N; ++n) {
                forcing[static_cast<std::size_t>(n)] += sq * row[static_cast<std::size_t>(n)];
            }
        }
        const double mu = m.mu(j);
        double y = 0.0;
        switch (m.kind().equation) {
            case Equation::heat: {
                const double r = 1.0 / (1.0 + dt * mu);
                y = ya[static_cast<std::size_t>(j)];
                for (int n = 0; n < N; ++n) {
                    y = r * (y + forcing[static_cast<std::size_t>(n)]);
                }
                break;
            }
            case Equation::volterra:
                y = cq_mode_solve(mu, *weights, N, forcing, ya[static_cast<std::size_t>(j)]).back();
                break;
            case Equation::wave: {
                const Mat2 R = rational_wave_mode(m.kind().scheme, dt, mu);
                double z0 = ya[static_cast<std::size_t>(j)];
                double z1 = yb[static_cast<std::size_t>(j)];
                for (int n = 0; n < N; ++n) {
                    const auto z = R.apply(z0, z1 + forcing[static_cast<std::size_t>(n)]);
                    z0 = z[0];
                    z1 = z[1];
                }
                y = z0;
                break;
            }
        }
        out.discrete[static_cast<std::size_t>(j)] = y;
    }
    return out;
}

double apply_test_function(const Model& m, const TestFunction& g, const std::vector<double>& coords,
                           bool discrete) {
    if (g.kind == TestFunction::Kind::quadratic) {
        double s = 0.0;
        for (double v : coords) {
            s += v * v;
        }
        return s;
    }
    double arg = 0.0;
    for (std::size_t i = 0; i < g.modes.size(); ++i) {
        const int k = g.modes[i] - 1;
        double proj = 0.0;
        if (k >= 0 && k < m.K()) {
            if (!discrete) {
                proj = coords[static_cast<std::size_t>(k)];
            } else {
                for (int j = 0; j < m.J(); ++j) {
                    proj += m.coordinate(j, k) * coords[static_cast<std::size_t>(j)];
                }
            }
        }
        arg += g.weights[i] * proj;
    }
    return std::cos(arg);
}

}  // namespace

CoupledSample coupled_sample(const Setup& setup, std::uint64_t seed, std::uint32_t path) {
    validate_setup(setup);
    const Model m(setup);
    return coupled_sample_impl(m, setup, seed, path);
}

McResult mc_weak_error(const Setup& setup, const TestFunction& g, std::size_t n_paths,
                       std::uint64_t seed) {
    validate_setup(setup);
    if (!std::holds_alternative<CompoundPoisson>(setup.law)) {
        throw UnsupportedOperation("Monte Carlo needs jump times; " + law_name(setup.law) +
                                   " has no exact reference here");
    }
    if (n_paths < 1) {
        throw std::invalid_argument("need at least one path");
    }
    for (int k : g.modes) {
        if (k < 1 || k > setup.spectrum.mode_count) {
            throw std::invalid_argument("test function mode out of range");
        }
    }
    const Model m(setup);
    std::vector<double> values(n_paths);
    parallel_for(n_paths, [&](std::size_t p) {
        const CoupledSample cs = coupled_sample_impl(m, setup, seed, static_cast<std::uint32_t>(p));
        values[p] = apply_test_function(m, g, cs.discrete, true) -
                    apply_test_function(m, g, cs.exact, false);
    });
    McResult r;
    r.estimate = pairwise_sum(values) / static_cast<double>(n_paths);
    if (n_paths > 1) {
        std::vector<double> dev(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            dev[p] = (values[p] - r.estimate) * (values[p] - r.estimate);
        }
        const double var = pairwise_sum(dev) / static_cast<double>(n_paths - 1);
        r.stderr_ = std::sqrt(var / static_cast<double>(n_paths));
    }
    return r;
}

std::vector<double> propagator_error_profile(const Setup& setup, const std::vector<double>& s_grid) {
    validate_setup(setup);
    const Model m(setup);
    std::vector<double> out;
    out.reserve(s_grid.size());
    const bool wave = setup.kind.equation == Equation::wave;
    for (double s : s_grid) {
        if (!(s > 0.0) || s > setup.horizon) {
            throw std::invalid_argument("profile times must lie in (0, T]");
        }
        const int n = m.step_of(s);
        double worst = 0.0;
        for (int k = 0; k < m.K(); ++k) {
            const double lam = m.lambda(k);
            const auto ex = m.exact_first_row(lam, s);
            const double scale = wave ? energy_factor(lam) : 0.0;
            double err2 = (ex[0] * ex[0] + scale * ex[1] * ex[1]) * (1.0 - m.resolved(k));
            for (const Coupling& c : m.couplings(k)) {
                const auto d = m.discrete_first_row(c.j, n, s);
                const double e0 = d[0] - ex[0];
                const double e1 = d[1] - ex[1];
                err2 += c.d2 * (e0 * e0 + scale * e1 * e1);
            }
            worst = std::max(worst, std::sqrt(std::max(err2, 0.0)));
        }
        out.push_back(worst);
    }
    return out;
}

}  // namespace levyspde
