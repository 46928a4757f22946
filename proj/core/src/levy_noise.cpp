#include "levyspde/levy_noise.hpp"
#include "levyspde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace levyspde {

namespace {

constexpr std::uint32_t kSubordinatorStream = 0xFFFFFFFFu;
constexpr std::size_t kMaxExactJumps = std::size_t{1} << 18;

// dyadic quantum for jump sizes of scale sigma; 30 bits below the leading bit
double jump_quantum(double sigma) { return std::ldexp(1.0, std::ilogb(sigma) - 30); }

double quantize(double x, double quantum) { return std::nearbyint(x / quantum) * quantum; }

}  // namespace

CovarianceSpec CovarianceSpec::power_law(double c, double s) {
    if (!(c >= 0.0) || !(s >= 0.0)) {
        throw std::invalid_argument("covariance needs amplitude >= 0 and decay >= 0");
    }
    CovarianceSpec cov;
    cov.amplitude = c;
    cov.decay = s;
    return cov;
}

CovarianceSpec CovarianceSpec::sequence(std::vector<double> q) {
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!(q[i] > 0.0) || (i > 0 && q[i] > q[i - 1])) {
            throw std::invalid_argument("explicit covariance must be positive and nonincreasing");
        }
    }
    CovarianceSpec cov;
    cov.explicit_values = std::move(q);
    return cov;
}

double CovarianceSpec::eigenvalue(const DirichletSpectrum& spec, int k) const {
    if (decay) {
        return amplitude * std::pow(spec.eigenvalue(k), -*decay);
    }
    if (k < 1 || static_cast<std::size_t>(k) > explicit_values.size()) {
        throw std::invalid_argument("explicit covariance shorter than the mode count");
    }
    return explicit_values[static_cast<std::size_t>(k - 1)];
}

std::vector<double> CovarianceSpec::eigenvalues(const DirichletSpectrum& spec) const {
    std::vector<double> q(static_cast<std::size_t>(spec.mode_count));
    for (int k = 1; k <= spec.mode_count; ++k) {
        q[static_cast<std::size_t>(k - 1)] = eigenvalue(spec, k);
    }
    return q;
}

bool CovarianceSpec::is_zero() const { return decay && amplitude == 0.0; }

std::string law_name(const LevyLaw& law) {
    struct {
        std::string operator()(const VarianceGamma&) const { return "variance_gamma"; }
        std::string operator()(const CompoundPoisson&) const { return "compound_poisson"; }
        std::string operator()(const SubordinatedWiener&) const {
            return "gamma_subordinated_wiener";
        }
    } v;
    return std::visit(v, law);
}

double jump_second_moment(const LevyLaw&) {
    // all laws are normalised to E L_k(t)^2 = t
    return 1.0;
}

HsCondition hs_condition(const DirichletSpectrum& spec, const CovarianceSpec& cov, double beta,
                         double rho) {
    if (!(rho >= 1.0 && rho < 2.0)) {
        throw std::invalid_argument("rho must lie in [1, 2)");
    }
    HsCondition out;
    const double e = beta - 1.0 / rho;
    double sum = 0.0;
    for (int k = 1; k <= spec.mode_count; ++k) {
        sum += std::pow(spec.eigenvalue(k), e) * cov.eigenvalue(spec, k);
    }
    out.partial_sum = sum;
    if (!cov.decay) {
        out.flag = ConditionFlag::unknown;
        return out;
    }
    const double p = 2.0 * (*cov.decay + 1.0 / rho - beta);
    out.exponent = p;
    if (p > 1.0) {
        out.flag = ConditionFlag::converges;
        const double base = std::numbers::pi / spec.domain_length;
        out.tail_bound = cov.amplitude * std::pow(base, -p) *
                         std::pow(static_cast<double>(spec.mode_count), 1.0 - p) / (p - 1.0);
    } else {
        out.flag = ConditionFlag::diverges;
    }
    return out;
}

double weqii_functional(const DirichletSpectrum& spec, const CovarianceSpec& cov,
                        const std::vector<double>& second_moments, double beta, int m) {
    if (m < 1 || m > spec.mode_count) {
        throw std::invalid_argument("truncation outside the spectrum");
    }
    double sum = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double m2 = second_moments.empty() ? 1.0
                                                 : second_moments.at(static_cast<std::size_t>(k - 1));
        // |Lambda^{-1/2} y| |Lambda^{beta-1/2} y| for y on the k-th axis
        const double lam = spec.eigenvalue(k);
        sum += m2 * cov.eigenvalue(spec, k) * std::pow(lam, beta - 1.0);
    }
    return sum;
}

std::vector<double> sample_increments(const LevyLaw& law, double dt, int K, StreamKey key) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("increment span must be positive");
    }
    std::vector<double> out(static_cast<std::size_t>(K));
    if (const auto* vg = std::get_if<VarianceGamma>(&law)) {
        for (int k = 0; k < K; ++k) {
            RandomStream rs(key.seed, key.path, static_cast<std::uint32_t>(k), key.substream);
            std::gamma_distribution<double> gam(dt / vg->nu, vg->nu);
            const double z = gam(rs);
            std::normal_distribution<double> nd(0.0, 1.0);
            out[static_cast<std::size_t>(k)] = std::sqrt(z) * nd(rs);
        }
    } else if (const auto* cp = std::get_if<CompoundPoisson>(&law)) {
        const double sigma = 1.0 / std::sqrt(cp->intensity);
        for (int k = 0; k < K; ++k) {
            RandomStream rs(key.seed, key.path, static_cast<std::uint32_t>(k), key.substream);
            std::poisson_distribution<long> pd(cp->intensity * dt);
            const long n = pd(rs);
            double x = 0.0;
            if (n > 0) {
                if (cp->jumps == JumpLaw::two_point) {
                    long net = 0;
                    for (long i = 0; i < n; ++i) {
                        net += (rs() & 1u) ? 1 : -1;
                    }
                    x = static_cast<double>(net) * sigma;
                } else {
                    std::normal_distribution<double> nd(0.0, 1.0);
                    x = std::sqrt(static_cast<double>(n)) * sigma * nd(rs);
                }
            }
            out[static_cast<std::size_t>(k)] = x;
        }
    } else {
        const auto& sw = std::get<SubordinatedWiener>(law);
        RandomStream zs(key.seed, key.path, kSubordinatorStream, key.substream);
        std::gamma_distribution<double> gam(dt / sw.nu, sw.nu);
        const double z = gam(zs);
        for (int k = 0; k < K; ++k) {
            RandomStream rs(key.seed, key.path, static_cast<std::uint32_t>(k), key.substream);
            std::normal_distribution<double> nd(0.0, 1.0);
            out[static_cast<std::size_t>(k)] = std::sqrt(z) * nd(rs);
        }
    }
    return out;
}

JumpPath sample_jump_path(const LevyLaw& law, double T, int K, StreamKey key) {
    const auto* cp = std::get_if<CompoundPoisson>(&law);
    if (cp == nullptr) {
        throw UnsupportedOperation("jump paths are only available for compound_poisson noise, not " +
                                   law_name(law));
    }
    if (!(T >= 0.0)) {
        throw std::invalid_argument("horizon must be nonnegative");
    }
    JumpPath path;
    path.horizon = T;
    path.modes.resize(static_cast<std::size_t>(K));
    if (T == 0.0) {
        return path;
    }
    const double sigma = 1.0 / std::sqrt(cp->intensity);
    const double quantum = jump_quantum(sigma);
    const double two_point = quantize(sigma, quantum);
    for (int k = 0; k < K; ++k) {
        RandomStream rs(key.seed, key.path, static_cast<std::uint32_t>(k), key.substream);
        std::poisson_distribution<long> pd(cp->intensity * T);
        const auto n = static_cast<std::size_t>(pd(rs));
        if (n > kMaxExactJumps) {
            throw std::invalid_argument("too many jumps per mode for exact path sums");
        }
        auto& jumps = path.modes[static_cast<std::size_t>(k)];
        jumps.resize(n);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (auto& j : jumps) {
            j.time = T * (1.0 - rs.uniform());
            if (cp->jumps == JumpLaw::two_point) {
                j.size = (rs() & 1u) ? two_point : -two_point;
            } else {
                j.size = quantize(sigma * nd(rs), quantum);
            }
        }
        std::sort(jumps.begin(), jumps.end(),
                  [](const Jump& a, const Jump& b) { return a.time < b.time; });
    }
    return path;
}

std::vector<double> uniform_grid(double T, int N) {
    if (N < 1) {
        throw std::invalid_argument("grid needs at least one cell");
    }
    std::vector<double> g(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        g[static_cast<std::size_t>(n)] = T * n / N;
    }
    return g;
}

std::vector<std::vector<double>> increments_from_path(const JumpPath& path,
                                                      const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() != 0.0 || grid.back() > path.horizon) {
        throw std::invalid_argument("grid must start at 0 and end within the path horizon");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("grid must be strictly increasing");
        }
    }
    const std::size_t cells = grid.size() - 1;
    std::vector<std::vector<double>> out(path.modes.size(), std::vector<double>(cells, 0.0));
    for (std::size_t k = 0; k < path.modes.size(); ++k) {
        for (const Jump& j : path.modes[k]) {
            // first grid point >= tau closes the cell (t_{n-1}, t_n] containing tau
            const auto it = std::lower_bound(grid.begin(), grid.end(), j.time);
            if (it == grid.end()) {
                continue;
            }
            const auto n = static_cast<std::size_t>(it - grid.begin());
            if (n == 0) {
                continue;
            }
            out[k][n - 1] += j.size;
        }
    }
    return out;
}

double terminal_value(const JumpPath& path, int mode_index) {
    double s = 0.0;
    for (const Jump& j : path.modes.at(static_cast<std::size_t>(mode_index))) {
        s += j.size;
    }
    return s;
}

}  // namespace levyspde
