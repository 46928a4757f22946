#include "levyspde_cli/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace levyspde::cli {

namespace {

using json = nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

const json& need(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) {
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        throw ConfigError(where + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(where + ": must be finite");
    }
    return x;
}

double positive(const json& v, const std::string& where) {
    const double x = number(v, where);
    if (!(x > 0.0)) {
        throw ConfigError(where + ": must be positive");
    }
    return x;
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) {
        throw ConfigError(where + ": expected a string");
    }
    return v.get<std::string>();
}

std::int64_t integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        throw ConfigError(where + ": expected an integer");
    }
    return v.get<std::int64_t>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw ConfigError(where + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

EquationKind parse_equation(const json& e) {
    only_keys(e, "equation", {"kind", "rho", "scheme"});
    const std::string kind = text(need(e, "equation", "kind"), "equation.kind");
    if (kind == "heat") {
        if (e.contains("rho") || e.contains("scheme")) {
            throw ConfigError("equation: heat takes no rho or scheme");
        }
        return EquationKind::heat();
    }
    if (kind == "volterra") {
        if (e.contains("scheme")) {
            throw ConfigError("equation: volterra takes no scheme");
        }
        const double rho = number(need(e, "equation", "rho"), "equation.rho");
        if (!(rho > 1.0 && rho < 2.0)) {
            throw ConfigError("equation.rho: must lie strictly inside (1, 2)");
        }
        return EquationKind::volterra(rho);
    }
    if (kind == "wave") {
        if (e.contains("rho")) {
            throw ConfigError("equation: wave takes no rho");
        }
        const std::string s =
            e.contains("scheme") ? text(e.at("scheme"), "equation.scheme") : "crank_nicolson";
        if (s == "crank_nicolson") {
            return EquationKind::wave(WaveScheme::crank_nicolson);
        }
        if (s == "backward_euler") {
            return EquationKind::wave(WaveScheme::backward_euler);
        }
        if (s == "explicit_euler") {
            return EquationKind::wave(WaveScheme::explicit_euler);
        }
        throw ConfigError("equation.scheme: unknown scheme '" + s + "'");
    }
    throw ConfigError("equation.kind: unknown equation '" + kind + "'");
}

LevyLaw parse_noise(const json& n) {
    only_keys(n, "noise", {"law", "intensity", "jumps", "nu"});
    const std::string law = text(need(n, "noise", "law"), "noise.law");
    if (law == "compound_poisson") {
        if (n.contains("nu")) {
            throw ConfigError("noise: compound_poisson takes no nu");
        }
        CompoundPoisson cp;
        cp.intensity = n.contains("intensity") ? positive(n.at("intensity"), "noise.intensity") : 1.0;
        if (n.contains("jumps")) {
            const std::string j = text(n.at("jumps"), "noise.jumps");
            if (j == "two_point") {
                cp.jumps = JumpLaw::two_point;
            } else if (j == "normal") {
                cp.jumps = JumpLaw::normal;
            } else {
                throw ConfigError("noise.jumps: expected two_point or normal");
            }
        }
        return cp;
    }
    if (law == "variance_gamma" || law == "gamma_subordinated_wiener") {
        if (n.contains("intensity") || n.contains("jumps")) {
            throw ConfigError("noise: " + law + " takes only nu");
        }
        const double nu = n.contains("nu") ? positive(n.at("nu"), "noise.nu") : 1.0;
        if (law == "variance_gamma") {
            return VarianceGamma{nu};
        }
        return SubordinatedWiener{nu};
    }
    throw ConfigError("noise.law: unknown law '" + law + "'");
}

std::vector<double> parse_ladder(const json& l, double horizon) {
    if (l.is_array()) {
        return numbers(l, "ladder");
    }
    only_keys(l, "ladder", {"dyadic_from", "dyadic_to", "scale"});
    const auto from = integer(need(l, "ladder", "dyadic_from"), "ladder.dyadic_from");
    const auto to = integer(need(l, "ladder", "dyadic_to"), "ladder.dyadic_to");
    const double scale = l.contains("scale") ? positive(l.at("scale"), "ladder.scale") : horizon;
    if (from < 0 || to < from || to > 40) {
        throw ConfigError("ladder: need 0 <= dyadic_from <= dyadic_to <= 40");
    }
    std::vector<double> out;
    for (auto e = from; e <= to; ++e) {
        out.push_back(std::ldexp(scale, -static_cast<int>(e)));
    }
    return out;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    only_keys(root, "config",
              {"schema_version", "name", "equation", "axis", "beta", "covariance", "noise", "horizon",
               "ladder", "fixed_resolution", "modes", "initial", "test_function", "monte_carlo",
               "quadrature", "output"});
    const auto version = integer(need(root, "config", "schema_version"), "schema_version");
    if (version != kSchemaVersion) {
        throw ConfigError("schema_version: expected " + std::to_string(kSchemaVersion) + ", got " +
                          std::to_string(version));
    }
    StudyConfig c;
    c.name = text(need(root, "config", "name"), "name");
    c.kind = parse_equation(need(root, "config", "equation"));
    const std::string axis = text(need(root, "config", "axis"), "axis");
    if (axis == "temporal") {
        c.axis = Axis::temporal;
    } else if (axis == "spatial") {
        c.axis = Axis::spatial;
    } else {
        throw ConfigError("axis: expected temporal or spatial");
    }
    c.beta = number(need(root, "config", "beta"), "beta");
    if (root.contains("covariance")) {
        const json& cv = root.at("covariance");
        only_keys(cv, "covariance", {"amplitude", "decay"});
        if (cv.contains("amplitude")) {
            c.amplitude = number(cv.at("amplitude"), "covariance.amplitude");
            if (c.amplitude < 0.0) {
                throw ConfigError("covariance.amplitude: must be nonnegative");
            }
        }
        if (cv.contains("decay")) {
            c.decay = number(cv.at("decay"), "covariance.decay");
            if (*c.decay < 0.0) {
                throw ConfigError("covariance.decay: must be nonnegative");
            }
        }
    }
    c.law = root.contains("noise") ? parse_noise(root.at("noise")) : LevyLaw{CompoundPoisson{}};
    c.horizon = root.contains("horizon") ? positive(root.at("horizon"), "horizon") : 1.0;
    c.ladder = parse_ladder(need(root, "config", "ladder"), c.axis == Axis::temporal ? c.horizon : 1.0);
    for (double r : c.ladder) {
        if (!(r > 0.0)) {
            throw ConfigError("ladder: resolutions must be positive");
        }
    }
    if (root.contains("fixed_resolution") && !root.at("fixed_resolution").is_null()) {
        c.fixed_resolution = positive(root.at("fixed_resolution"), "fixed_resolution");
    }
    if (root.contains("modes")) {
        const auto m = integer(root.at("modes"), "modes");
        if (m < 1 || m > (1 << 20)) {
            throw ConfigError("modes: must lie in [1, 2^20]");
        }
        c.modes = static_cast<int>(m);
    }
    if (root.contains("initial")) {
        const json& in = root.at("initial");
        only_keys(in, "initial", {"first", "second"});
        if (in.contains("first")) {
            c.x0.first = numbers(in.at("first"), "initial.first");
        }
        if (in.contains("second")) {
            c.x0.second = numbers(in.at("second"), "initial.second");
        }
    }
    if (root.contains("test_function")) {
        const json& g = root.at("test_function");
        only_keys(g, "test_function", {"kind", "modes", "weights"});
        const std::string kind = text(need(g, "test_function", "kind"), "test_function.kind");
        if (kind == "quadratic") {
            if (g.contains("modes") || g.contains("weights")) {
                throw ConfigError("test_function: quadratic takes no modes or weights");
            }
            c.g = TestFunction::quadratic();
        } else if (kind == "cosine") {
            std::vector<int> modes;
            const json& m = need(g, "test_function", "modes");
            if (!m.is_array()) {
                throw ConfigError("test_function.modes: expected an array");
            }
            for (std::size_t i = 0; i < m.size(); ++i) {
                const auto k = integer(m[i], "test_function.modes");
                if (k < 1 || k > c.modes) {
                    throw ConfigError("test_function.modes: mode out of range");
                }
                modes.push_back(static_cast<int>(k));
            }
            auto weights = numbers(need(g, "test_function", "weights"), "test_function.weights");
            if (weights.size() != modes.size() || modes.empty()) {
                throw ConfigError("test_function: modes and weights must match and be nonempty");
            }
            c.g = TestFunction::cosine(std::move(modes), std::move(weights));
        } else {
            throw ConfigError("test_function.kind: expected quadratic or cosine");
        }
    }
    if (root.contains("monte_carlo") && !root.at("monte_carlo").is_null()) {
        const json& mc = root.at("monte_carlo");
        only_keys(mc, "monte_carlo", {"paths", "seed"});
        const auto paths = integer(need(mc, "monte_carlo", "paths"), "monte_carlo.paths");
        if (paths < 1) {
            throw ConfigError("monte_carlo.paths: must be positive");
        }
        McSettings s;
        s.paths = static_cast<std::size_t>(paths);
        if (mc.contains("seed")) {
            if (!mc.at("seed").is_number_unsigned()) {
                throw ConfigError("monte_carlo.seed: expected an unsigned integer");
            }
            s.seed = mc.at("seed").get<std::uint64_t>();
        }
        c.monte_carlo = s;
    }
    if (root.contains("quadrature")) {
        const json& q = root.at("quadrature");
        only_keys(q, "quadrature", {"nodes", "representation_nodes"});
        auto rule = [&](const char* key) {
            const auto n = integer(q.at(key), std::string("quadrature.") + key);
            if (n != 4 && n != 8 && n != 16 && n != 32) {
                throw ConfigError(std::string("quadrature.") + key + ": expected 4, 8, 16 or 32");
            }
            return static_cast<int>(n);
        };
        if (q.contains("nodes")) {
            c.quadrature.nodes = rule("nodes");
        }
        if (q.contains("representation_nodes")) {
            c.quadrature.representation_nodes = rule("representation_nodes");
        }
    }
    c.output = root.contains("output") ? text(root.at("output"), "output") : c.name + ".csv";
    return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_study_config(ss.str());
}

std::filesystem::path resolve_output(const StudyConfig& config, const std::string& out_dir) {
    const std::filesystem::path p(config.output);
    if (p.is_absolute()) {
        return p;
    }
    if (!out_dir.empty()) {
        return std::filesystem::path(out_dir) / p;
    }
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        return std::filesystem::path(env) / p;
    }
    return p;
}

}  // namespace levyspde::cli
