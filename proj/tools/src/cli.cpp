#include "levyspde_cli/cli.hpp"
#include "levyspde_cli/config.hpp"

#include "levyspde/mittag_leffler.hpp"
#include "levyspde/parallel.hpp"
#include "levyspde/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace levyspde::cli {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* flag_name(ConditionFlag f) {
    switch (f) {
        case ConditionFlag::converges: return "converges";
        case ConditionFlag::diverges: return "diverges";
        case ConditionFlag::unknown: return "unknown";
    }
    return "?";
}

int cmd_study(const std::string& path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    StudyConfig config = load_study_config(path);
    if (seed) {
        if (!config.monte_carlo) {
            std::cerr << "note: --seed given but the config has no monte_carlo block\n";
        } else {
            config.monte_carlo->seed = *seed;
        }
    }
    const StudyResult r = run_study(config);
    const auto out = resolve_output(config, out_dir);
    emit_csv(r, out);
    std::cout << format_summary(r) << "csv written to " << out.string() << "\n";
    return r.passed() ? kOk : kAcceptanceFailure;
}

int cmd_check_condition(const std::string& equation, double beta, double rho, double s, double amplitude,
                        int K) {
    if (equation == "volterra") {
        if (!(rho > 1.0 && rho < 2.0)) {
            throw ConfigError("volterra needs --rho in (1, 2)");
        }
    } else if (equation == "heat" || equation == "wave") {
        rho = 1.0;
    } else {
        throw ConfigError("unknown equation '" + equation + "'");
    }
    if (K < 1) {
        throw ConfigError("--K must be positive");
    }
    const auto spec = dirichlet_spectrum(K);
    const auto cov = CovarianceSpec::power_law(amplitude, s);
    const HsCondition hs = hs_condition(spec, cov, beta, rho);
    std::cout << "hs_partial_sum " << num(hs.partial_sum) << "\n";
    std::cout << "hs_tail_bound " << (hs.tail_bound ? num(*hs.tail_bound) : "unavailable") << "\n";
    std::cout << "hs_exponent " << (hs.exponent ? num(*hs.exponent) : "unavailable") << "\n";
    std::cout << "hs_flag " << flag_name(hs.flag) << "\n";
    // the asymmetric wave condition against the symmetric one (rho = 1)
    const HsCondition sym = hs_condition(spec, cov, beta, 1.0);
    const double weqii = weqii_functional(spec, cov, {}, beta, K);
    std::cout << "weqii " << num(weqii) << "\n";
    std::cout << "hs_norm_squared " << num(sym.partial_sum) << "\n";
    std::cout << "weqii_equals_hs_squared " << (weqii == sym.partial_sum ? "true" : "false")
              << " (difference " << num(weqii - sym.partial_sum) << ")\n";
    return kOk;
}

int cmd_verify(const std::string& path, bool tamper) {
    QuadratureOptions q;
    q.tamper_cross_term = tamper;
    std::vector<LabelledSetup> setups;
    if (path.empty()) {
        setups = representation_sweep(q);
    } else {
        StudyConfig c = load_study_config(path);
        c.quadrature.tamper_cross_term = tamper;
        for (double r : c.ladder) {
            setups.push_back({c.name + "@" + num(r), level_setup(c, r)});
        }
    }
    double worst = 0.0;
    for (const auto& s : setups) {
        const RepresentationCheck c = check_representation(s);
        std::cout << c.label << " weak " << num(c.weak) << " representation " << num(c.representation)
                  << " relative " << num(c.relative) << "\n";
        worst = std::max(worst, c.relative);
    }
    const bool ok = worst <= 1e-8;
    std::cout << "max_relative_discrepancy " << num(worst) << " " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kAcceptanceFailure;
}

int cmd_ml_eval(double rho, const std::vector<double>& xs) {
    const auto ml = mittag_leffler_evaluator(rho);
    for (double x : xs) {
        std::cout << num(x) << " " << num((*ml)(x)) << "\n";
    }
    return kOk;
}

int cmd_cq_weights(double rho, double dt, int N) {
    const CqWeights w = cq_weights(rho, dt, N);
    for (std::size_t k = 0; k < w.weights.size(); ++k) {
        std::cout << k << " " << num(w.weights[k]) << "\n";
    }
    return kOk;
}

int cmd_sample_path(const std::string& law_name_in, double intensity, const std::string& jumps, double nu,
                    double T, int K, int steps, std::uint64_t seed) {
    LevyLaw law;
    if (law_name_in == "compound_poisson") {
        if (!(intensity > 0.0)) {
            throw ConfigError("--intensity must be positive");
        }
        CompoundPoisson cp{intensity, JumpLaw::two_point};
        if (jumps == "normal") {
            cp.jumps = JumpLaw::normal;
        } else if (jumps != "two_point") {
            throw ConfigError("--jumps must be two_point or normal");
        }
        law = cp;
    } else if (law_name_in == "variance_gamma") {
        law = VarianceGamma{nu};
    } else if (law_name_in == "gamma_subordinated_wiener") {
        law = SubordinatedWiener{nu};
    } else {
        throw ConfigError("unknown law '" + law_name_in + "'");
    }
    if (K < 1 || !(T > 0.0) || steps < 1) {
        throw ConfigError("need K >= 1, T > 0 and steps >= 1");
    }
    std::cout << "# law " << law_name(law) << " seed " << seed << "\n";
    if (std::holds_alternative<CompoundPoisson>(law)) {
        const JumpPath p = sample_jump_path(law, T, K, StreamKey{seed, 0, 0});
        std::cout << "mode time size\n";
        for (std::size_t k = 0; k < p.modes.size(); ++k) {
            for (const Jump& j : p.modes[k]) {
                std::cout << k + 1 << " " << num(j.time) << " " << num(j.size) << "\n";
            }
        }
        return kOk;
    }
    // pure-jump laws without a finite jump list: print grid increments
    std::cout << "step mode increment\n";
    const double dt = T / steps;
    for (int n = 0; n < steps; ++n) {
        const auto inc = sample_increments(law, dt, K, StreamKey{seed, 0, static_cast<std::uint32_t>(n)});
        for (int k = 0; k < K; ++k) {
            std::cout << n + 1 << " " << k + 1 << " " << num(inc[static_cast<std::size_t>(k)]) << "\n";
        }
    }
    return kOk;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Space-time discretisation errors for Levy-driven heat, Volterra and wave equations"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Maximum worker threads (0 = all cores)");

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    auto* study = app.add_subcommand("study", "Run a convergence study from a JSON config");
    study->add_option("config", config_path, "Study config file")->required();
    study->add_option("--out-dir", out_dir, "Directory for relative CSV outputs");
    study->add_option("--seed", seed, "Override the Monte Carlo seed");

    std::string equation = "heat";
    double beta = 1.0, rho = 1.0, decay = 0.55, amplitude = 1.0;
    int K = 4096;
    auto* check = app.add_subcommand("check-condition", "Print the covariance regularity conditions");
    check->add_option("--equation", equation, "heat, volterra or wave");
    check->add_option("--beta", beta, "Target regularity")->required();
    check->add_option("--rho", rho, "Kernel order (volterra)");
    check->add_option("--s", decay, "Covariance decay exponent in q_k = c lambda_k^-s")->required();
    check->add_option("--amplitude", amplitude, "Covariance amplitude c");
    check->add_option("--K", K, "Mode truncation");

    std::string verify_path;
    bool tamper = false;
    auto* verify = app.add_subcommand("verify-representation",
                                      "Compare the error representation with the direct weak error");
    verify->add_option("config", verify_path, "Optional study config; default is the built-in sweep");
    verify->add_flag("--tamper-cross-term", tamper)->group("");

    double ml_rho = 1.0;
    std::vector<double> ml_x;
    auto* ml = app.add_subcommand("ml-eval", "Evaluate E_rho(-x)");
    ml->add_option("rho", ml_rho)->required();
    ml->add_option("x", ml_x)->required();

    double cq_rho = 1.5, cq_dt = 0.1;
    int cq_n = 4;
    auto* cq = app.add_subcommand("cq-weights", "Print convolution quadrature weights");
    cq->add_option("rho", cq_rho)->required();
    cq->add_option("dt", cq_dt)->required();
    cq->add_option("N", cq_n)->required();

    std::string sp_law = "compound_poisson", sp_jumps = "two_point";
    double sp_intensity = 1.0, sp_nu = 1.0, sp_T = 1.0;
    int sp_K = 4, sp_steps = 16;
    std::uint64_t sp_seed = 0;
    auto* sp = app.add_subcommand("sample-path", "Sample a noise path");
    sp->add_option("--law", sp_law, "compound_poisson, variance_gamma or gamma_subordinated_wiener");
    sp->add_option("--intensity", sp_intensity, "Jump intensity (compound_poisson)");
    sp->add_option("--jumps", sp_jumps, "two_point or normal");
    sp->add_option("--nu", sp_nu, "Subordinator variance rate");
    sp->add_option("--T", sp_T, "Horizon");
    sp->add_option("--K", sp_K, "Number of modes");
    sp->add_option("--steps", sp_steps, "Grid cells for laws without a jump list");
    sp->add_option("--seed", sp_seed, "Seed (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    set_max_threads(threads);
    try {
        if (study->parsed()) {
            return cmd_study(config_path, out_dir, seed);
        }
        if (check->parsed()) {
            return cmd_check_condition(equation, beta, rho, decay, amplitude, K);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_path, tamper);
        }
        if (ml->parsed()) {
            return cmd_ml_eval(ml_rho, ml_x);
        }
        if (cq->parsed()) {
            return cmd_cq_weights(cq_rho, cq_dt, cq_n);
        }
        if (sp->parsed()) {
            return cmd_sample_path(sp_law, sp_intensity, sp_jumps, sp_nu, sp_T, sp_K, sp_steps, sp_seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace levyspde::cli
