// One line per acceptance criterion; exit status is nonzero if any criterion fails.
// Pass criterion numbers as arguments to run a subset.

#include "levyspde/error_engine.hpp"
#include "levyspde/mittag_leffler.hpp"
#include "levyspde/parallel.hpp"
#include "levyspde/study.hpp"
#include "levyspde_cli/cli.hpp"
#include "levyspde_cli/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace levyspde;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

StudyResult preset(const std::string& name) {
    return run_study(cli::load_study_config(std::string(LEVYSPDE_PRESET_DIR) + "/" + name + ".json"));
}

double weak_slope(const StudyResult& r) { return r.weak_fit ? r.weak_fit->slope : std::nan(""); }
double strong_slope(const StudyResult& r) { return r.strong_fit ? r.strong_fit->slope : std::nan(""); }

Outcome heat_temporal() {
    const auto r = preset("heat-temporal-beta1");
    const double w = weak_slope(r), s = strong_slope(r);
    const bool ok = within(w, 0.85, 1.20) && within(s, 0.40, 0.60) && w >= 1.8 * s;
    return {ok, fmt("weak slope %.4f in [0.85, 1.20]; strong slope %.4f in [0.40, 0.60]; weak/strong %.3f >= 1.8",
                    w, s, w / s)};
}

Outcome heat_spatial() {
    const auto r = preset("heat-spatial");
    const double w = weak_slope(r), s = strong_slope(r);
    return {within(w, 1.35, 1.75) && within(s, 0.60, 0.90),
            fmt("weak slope %.4f in [1.35, 1.75]; strong slope %.4f in [0.60, 0.90]", w, s)};
}

Outcome volterra_temporal() {
    const auto r = preset("volterra-temporal");
    const double w = weak_slope(r), s = strong_slope(r);
    return {within(w, 0.60, 0.90) && within(s, 0.28, 0.48),
            fmt("weak slope %.4f in [0.60, 0.90]; strong slope %.4f in [0.28, 0.48]", w, s)};
}

Outcome wave_rates() {
    const auto t = preset("wave-temporal");
    const auto x = preset("wave-spatial");
    const double wt = weak_slope(t), st = strong_slope(t), wx = weak_slope(x), sx = strong_slope(x);
    const bool ok = within(wt, 0.85, 1.15) && within(wx, 0.85, 1.15) && within(st, 0.35, 0.65) &&
                    within(sx, 0.35, 0.65);
    return {ok, fmt("temporal weak %.4f, spatial weak %.4f in [0.85, 1.15]; temporal strong %.4f, spatial "
                    "strong %.4f in [0.35, 0.65]",
                    wt, wx, st, sx)};
}

Outcome representation() {
    double worst = 0.0;
    const auto sweep = representation_sweep();
    for (const auto& s : sweep) {
        worst = std::max(worst, check_representation(s).relative);
    }
    return {worst <= 1e-8 && sweep.size() == 12,
            fmt("max relative discrepancy %.3e <= 1e-8 over %zu setups", worst, sweep.size())};
}

Outcome monte_carlo() {
    Setup s;
    s.kind = EquationKind::heat();
    s.spectrum = dirichlet_spectrum(64);
    s.covariance = CovarianceSpec::power_law(1.0, derived_decay(1.0, 1.0));
    s.law = CompoundPoisson{5.0, JumpLaw::two_point};
    s.horizon = 1.0;
    s.step = 1.0 / 16;
    s.x0.first = {1.0, 0.5};
    const double det = weak_error_quadratic(s);
    int hits = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto mc = mc_weak_error(s, TestFunction::quadratic(), 10000, 1000 + seed);
        const double z = std::abs(mc.estimate - det) / mc.stderr_;
        worst = std::max(worst, z);
        hits += z <= 3.0 ? 1 : 0;
    }
    return {hits >= 19, fmt("%d/20 seeds within 3 stderr of %.6e (largest |z| %.2f)", hits, det, worst)};
}

Outcome weqii_identity() {
    const auto full = dirichlet_spectrum(4096);
    const auto cov = CovarianceSpec::power_law(1.0, 0.55);
    double worst = 0.0;
    for (int m = 1; m <= 4096; ++m) {
        const double w = weqii_functional(full, cov, {}, 1.0, m);
        const double h = hs_condition(dirichlet_spectrum(m), cov, 1.0, 1.0).partial_sum;
        worst = std::max(worst, std::abs(w - h) / h);
    }
    return {worst <= 4 * std::numeric_limits<double>::epsilon(),
            fmt("max relative difference %.3e over m = 1..4096", worst)};
}

Outcome kernels() {
    double e_exp = 0.0, e_cos = 0.0;
    for (int i = 0; i <= 5000; ++i) {
        const double x = 0.01 * i;
        e_exp = std::max(e_exp, std::abs(mittag_leffler_neg(1.0, x) - std::exp(-x)));
        e_cos = std::max(e_cos, std::abs(mittag_leffler_neg(2.0, x) - std::cos(std::sqrt(x))));
    }
    bool monotone = true;
    for (double rho : {1.1, 1.5, 1.9}) {
        const auto w = cq_weights(rho, 1e-4, 10000);
        monotone = monotone && w.weights[0] > 0.0;
        for (std::size_t k = 1; k < w.weights.size(); ++k) {
            monotone = monotone && w.weights[k] > 0.0 && w.weights[k] <= w.weights[k - 1];
        }
    }
    double order = 1e300;
    for (double rho : {1.1, 1.5, 1.9}) {
        const double lam = 4.0;
        const double exact = mittag_leffler_neg(rho, lam);
        double prev = 0.0;
        for (int N : {250, 500, 1000, 2000}) {
            const double err = std::abs(cq_mode_solve(lam, cq_weights(rho, 1.0 / N, N), N, {}, 1.0).back() - exact);
            if (prev > 0.0) {
                order = std::min(order, std::log2(prev / err));
            }
            prev = err;
        }
    }
    const bool ok = e_exp <= 1e-10 && e_cos <= 1e-8 && monotone && order >= 0.9;
    return {ok, fmt("|E_1 - exp| %.2e <= 1e-10; |E_2 - cos sqrt| %.2e <= 1e-8; weights positive and "
                    "nonincreasing: %s; smallest CQ order %.3f >= 0.9",
                    e_exp, e_cos, monotone ? "yes" : "no", order)};
}

Outcome wave_structure() {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double exact_drift = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double lam = std::exp(8.0 * u(gen) + 4.0);
        const double t = std::abs(u(gen));
        const auto e = std::get<Mat2>(exact_mode_factor(EquationKind::wave(WaveScheme::crank_nicolson), lam, t));
        const double a = u(gen), b = u(gen);
        const auto v = e.apply(a, b);
        const double e0 = a * a + b * b / lam;
        exact_drift = std::max(exact_drift, std::abs(v[0] * v[0] + v[1] * v[1] / lam - e0) / e0);
    }
    const double lam = 100.0;
    const Mat2 step = rational_wave_mode(WaveScheme::crank_nicolson, 1e-3, lam);
    std::array<double, 2> v{1.0, 3.0};
    const double e0 = v[0] * v[0] + v[1] * v[1] / lam;
    for (int n = 0; n < 1000; ++n) {
        v = step.apply(v[0], v[1]);
    }
    const double cn_drift = std::abs(v[0] * v[0] + v[1] * v[1] / lam - e0) / e0;
    std::vector<double> y;
    for (int i = -1000; i <= 1000; ++i) {
        y.push_back(0.01 * i * (1.0 + std::abs(i) / 10.0));
    }
    const bool cn = i_stability_check(WaveScheme::crank_nicolson, y).stable;
    const bool be = i_stability_check(WaveScheme::backward_euler, y).stable;
    const bool ee = i_stability_check(WaveScheme::explicit_euler, y).stable;
    const bool ok = exact_drift <= 1e-12 && cn_drift <= 1e-10 && cn && be && !ee;
    return {ok, fmt("exact energy drift %.2e <= 1e-12; CN 1000-step drift %.2e <= 1e-10; I-stable CN %s, BE %s, "
                    "explicit Euler %s",
                    exact_drift, cn_drift, cn ? "yes" : "no", be ? "yes" : "no", ee ? "yes" : "no")};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "levyspde_acceptance";
    std::filesystem::remove_all(dir);
    const std::string config = std::string(LEVYSPDE_PRESET_DIR) + "/heat-spatial-mc.json";
    std::vector<std::string> outputs;
    int codes = 0;
    for (const char* threads : {"1", "1", "8"}) {
        const auto sub = dir / (std::string("run") + std::to_string(outputs.size()));
        std::vector<std::string> args{"levyspde", "--threads", threads, "study", config, "--out-dir", sub.string()};
        std::vector<char*> argv;
        for (auto& a : args) {
            argv.push_back(a.data());
        }
        std::ostringstream sink;
        auto* old = std::cout.rdbuf(sink.rdbuf());
        codes |= cli::run(static_cast<int>(argv.size()), argv.data());
        std::cout.rdbuf(old);
        outputs.push_back(read_file(sub / "heat-spatial-mc.csv"));
    }
    set_max_threads(0);
    std::filesystem::remove_all(dir);
    const bool same_runs = !outputs[0].empty() && outputs[0] == outputs[1];
    const bool same_threads = outputs[0] == outputs[2];
    return {same_runs && same_threads && codes != 1,
            fmt("seeded Monte Carlo study CSV (%zu bytes): two runs identical %s; threads 1 vs 8 identical %s",
                outputs[0].size(), same_runs ? "yes" : "no", same_threads ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"heat temporal rate", heat_temporal},
        {"heat spatial rate", heat_spatial},
        {"volterra temporal rate", volterra_temporal},
        {"wave temporal and spatial rates", wave_rates},
        {"representation identity", representation},
        {"monte carlo consistency", monte_carlo},
        {"symmetric condition identity", weqii_identity},
        {"kernel correctness", kernels},
        {"wave structure", wave_structure},
        {"determinism", determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.contains(id)) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
