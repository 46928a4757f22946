#include <doctest.h>

#include "levyspde/parallel.hpp"
#include "levyspde/study.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace levyspde;

namespace {

std::vector<StudyRow> synthetic(double (*model)(double)) {
    std::vector<StudyRow> rows;
    for (int e = 4; e <= 10; ++e) {
        StudyRow r;
        r.level = e - 4;
        r.resolution = std::ldexp(1.0, -e);
        r.weak_quad = model(r.resolution);
        r.strong = r.weak_quad;
        rows.push_back(r);
    }
    return rows;
}

StudyConfig small_config() {
    StudyConfig c;
    c.name = "small";
    c.kind = EquationKind::heat();
    c.beta = 1.0;
    c.modes = 64;
    c.law = CompoundPoisson{5.0};
    for (int e = 3; e <= 7; ++e) {
        c.ladder.push_back(std::ldexp(1.0, -e));
    }
    c.monte_carlo = McSettings{200, 31};
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("derived decay") {
    CHECK(derived_decay(1.0, 1.0) == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(derived_decay(0.75, 1.0) == doctest::Approx(0.30).epsilon(1e-15));
    CHECK(derived_decay(0.5, 1.5) == doctest::Approx(0.5 - 1.0 / 1.5 + 0.55).epsilon(1e-15));
}

TEST_CASE("rate fits") {
    const auto pure = fit_rate(synthetic([](double d) { return 3.0 * d; }), Column::weak);
    CHECK(std::abs(pure.slope - 1.0) <= 1e-12);
    CHECK(pure.levels_used == 7);

    // numpy polyfit of log(dt (1 + |log dt|)) over dt = 2^-4..2^-10
    const auto logged = fit_rate(synthetic([](double d) { return d * (1.0 + std::abs(std::log(d))); }),
                                 Column::weak);
    CHECK(std::abs(logged.slope - 0.82310747741778079) <= 1e-12);

    auto rows = synthetic([](double d) { return 0.2 * std::pow(d, 0.7); });
    const double s0 = fit_rate(rows, Column::strong).slope;
    for (auto& r : rows) {
        r.strong *= 123.456;
    }
    CHECK(std::abs(fit_rate(rows, Column::strong).slope - s0) <= 1e-12);

    auto floor_rows = synthetic([](double) { return 1e-15; });
    CHECK_THROWS_AS(fit_rate(floor_rows, Column::weak), InsufficientData);
}

TEST_CASE("expected rates") {
    const auto h = expected_rates(Equation::heat, 1.0, 1.0, 1, 2);
    CHECK(h.spatial_weak == 2.0);
    CHECK(h.temporal_weak == 1.0);
    CHECK(h.spatial_strong == 1.0);
    CHECK(h.temporal_strong == 0.5);

    const auto w = expected_rates(Equation::wave, 0.75, 1.0, 2, 2);
    CHECK(w.spatial_weak == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.temporal_weak == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.spatial_strong == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.temporal_strong == doctest::Approx(0.5).epsilon(1e-15));

    const auto v = expected_rates(Equation::volterra, 0.5, 1.5, 1, 2);
    CHECK(v.spatial_weak == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.temporal_weak == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(v.spatial_strong == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(v.temporal_strong == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("heat temporal study rows") {
    StudyConfig c;
    c.name = "heat";
    c.kind = EquationKind::heat();
    c.beta = 1.0;
    c.modes = 4096;
    for (int e = 4; e <= 10; ++e) {
        c.ladder.push_back(std::ldexp(1.0, -e));
    }
    const auto r = run_study(c);
    REQUIRE(r.rows.size() == 7);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        CHECK(std::abs(r.rows[i].weak_quad) < std::abs(r.rows[i - 1].weak_quad));
        CHECK(r.rows[i].strong < r.rows[i - 1].strong);
    }
    CHECK(r.decay == doctest::Approx(0.55));
    // closed-form geometric sums per mode, summed and fitted in numpy
    REQUIRE(r.weak_fit);
    CHECK(r.weak_fit->slope == doctest::Approx(0.7815904091500481).epsilon(1e-8));
    CHECK(std::abs(r.rows[0].weak_quad - -0.005096356703135752) < 1e-12);
    REQUIRE(r.strong_fit);
    CHECK(r.strong_pass);
}

TEST_CASE("refusals") {
    StudyConfig c = small_config();
    c.monte_carlo.reset();
    c.kind = EquationKind::wave(WaveScheme::explicit_euler);
    CHECK_THROWS(run_study(c));

    c = small_config();
    c.axis = Axis::spatial;
    c.ladder = {1.0 / 128};
    CHECK_THROWS(level_setup(c, 1.0 / 128));

    c = small_config();
    c.decay = 0.2;  // too rough for beta = 1
    CHECK_THROWS_AS(run_study(c), RegularityError);
}

TEST_CASE("csv output") {
    const auto dir = std::filesystem::temp_directory_path() / "levyspde_test_study";
    std::filesystem::create_directories(dir);

    StudyResult empty;
    empty.config = small_config();
    emit_csv(empty, dir / "empty.csv");
    CHECK(parse_csv(dir / "empty.csv").empty());
    std::string last;
    std::istringstream lines(slurp(dir / "empty.csv"));
    for (std::string l; std::getline(lines, l);) {
        if (!l.empty() && l[0] != '#') {
            last = l;
        }
    }
    CHECK(last == "level,resolution,strong,weak_quad,representation,mc_estimate,mc_stderr,fitted");

    const auto r = run_study(small_config());
    emit_csv(r, dir / "small.csv");
    const auto back = parse_csv(dir / "small.csv");
    REQUIRE(back.size() == r.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].resolution == r.rows[i].resolution);
        CHECK(back[i].strong == r.rows[i].strong);
        CHECK(back[i].weak_quad == r.rows[i].weak_quad);
        CHECK(back[i].representation == r.rows[i].representation);
        CHECK(back[i].mc_estimate == r.rows[i].mc_estimate);
        CHECK(back[i].mc_stderr == r.rows[i].mc_stderr);
        CHECK(back[i].fitted == r.rows[i].fitted);
    }
    std::istringstream body(format_csv(r));
    for (std::string l; std::getline(body, l);) {
        if (!l.empty() && l[0] != '#') {
            CHECK(std::count(l.begin(), l.end(), ',') == 7);
        }
    }
    CHECK(format_csv(r).find("# seed: 31") != std::string::npos);
    CHECK_THROWS(emit_csv(r, dir / "empty.csv" / "x.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("studies are reproducible across runs and thread counts") {
    set_max_threads(1);
    const auto a = format_csv(run_study(small_config()));
    const auto b = format_csv(run_study(small_config()));
    set_max_threads(8);
    const auto c = format_csv(run_study(small_config()));
    set_max_threads(0);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("representation sweep") {
    const auto sweep = representation_sweep();
    CHECK(sweep.size() == 12);
    for (const auto& s : {sweep.front(), sweep.back()}) {
        const auto r = check_representation(s);
        CHECK(r.relative <= 1e-8);
    }
}
