#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "conesq/config.hpp"
#include "conesq/report.hpp"
#include "conesq/squarefn.hpp"

using namespace conesq;

namespace {

std::vector<std::pair<double, double>> points(int k0, int k1, const std::function<double(double)>& ratio) {
    std::vector<std::pair<double, double>> v;
    for (int k = k0; k <= k1; ++k) {
        double d = std::ldexp(1.0, -k);
        v.push_back({d, ratio(d)});
    }
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fit exponent") {
    auto f = fit_exponent(points(3, 10, [](double d) { return 1 / std::sqrt(d); }));
    CHECK(f.alpha == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.residual < 1e-12);
    CHECK(f.prefactor == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit_exponent(points(3, 10, [](double) { return 4.2; })).alpha == doctest::Approx(0.0).scale(1));
    // log(1/delta) masquerades as a small power; closed-form least squares over k = 3..10
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = 3; k <= 10; ++k) {
        double x = k * std::log(2.0), y = std::log(x);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    double want = (8 * sxy - sx * sy) / (8 * sxx - sx * sx);
    double a = fit_exponent(points(3, 10, [](double d) { return std::log(1 / d); })).alpha;
    CHECK(a == doctest::Approx(want).epsilon(1e-12));
    CHECK(a == doctest::Approx(0.2413).epsilon(1e-3));
    // constant factors move only the prefactor
    auto g = fit_exponent(points(3, 10, [](double d) { return 7 * std::pow(d, -0.3); }));
    CHECK(g.alpha == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(g.prefactor == doctest::Approx(7).epsilon(1e-12));
    CHECK_THROWS_AS(fit_exponent(points(3, 4, [](double) { return 1.0; })), DomainError);
    CHECK_THROWS_AS(fit_exponent(points(3, 6, [](double) { return 0.0; })), DomainError);
}

TEST_CASE("single-piece ratio fits exponent zero") {
    std::vector<std::pair<double, double>> pts;
    for (int k = 2; k <= 5; ++k) {
        GridSpec g(2, 16L << (k - 2), 4);
        Rng rng(static_cast<std::uint64_t>(k));
        Field fh = random_frequency_field(g, [](const Vec3& x) { return x.norm() > 0.25 && x.norm() < 1; }, rng);
        pts.push_back({std::ldexp(1.0, -k), square_ratio(fh, cap_family({Cap(2, Vec3::UnitX(), 2 * kPi)}), 4)});
    }
    FitResult f = fit_exponent(pts);
    CHECK(std::abs(f.alpha) < 1e-12);
    CHECK(f.residual < 1e-12);
}

TEST_CASE("delta lists") {
    auto d = parse_deltas("2^-3:2^-6");
    REQUIRE(d.size() == 4);
    CHECK(d[0] == 0.125);
    CHECK(d[3] == 1.0 / 64);
    auto e = parse_deltas("0.25, 2^-4,0.015625");
    REQUIRE(e.size() == 3);
    CHECK(e[1] == 1.0 / 16);
    CHECK_THROWS(parse_deltas("2^-3:x"));
}

TEST_CASE("config file") {
    const std::string text = "threads = 2\nseed = 5\n\n[cone_l8]\np = 16\nengine = overlap\ndeltas = 2^-4:2^-6\n\n"
                             "[cordoba2d]\np = 4\nengine = fft\n";
    ExperimentConfig c = parse_config(text, "cone_l8");
    CHECK(c.experiment == "cone_l8");
    CHECK(c.p == 16);
    CHECK(c.threads == 2);
    CHECK(c.seed == 5);
    CHECK(c.deltas.size() == 3);
    ExperimentConfig c2 = parse_config(text, "cordoba2d");
    CHECK(c2.engine == "fft");
    CHECK(c2.p == 4);
    CHECK_THROWS_AS(parse_config("bogus = 1\n"), DomainError);
    ExperimentConfig bad = c;
    bad.deltas = {0.25, 0.5};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad.deltas = {0.3};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("memory ceiling from the environment") {
    ::setenv("CONESQ_MEMORY_MB", "123", 1);
    CHECK(memory_ceiling_mb(7) == 123);
    ::unsetenv("CONESQ_MEMORY_MB");
    CHECK(memory_ceiling_mb(7) == 7);
}

TEST_CASE("csv") {
    CHECK(to_csv({}) == csv_header());
    CHECK(csv_header() == "experiment,n,p,delta,engine,seed,ratio,stderr,alpha,prefactor,residual,expected_alpha,pass\n");
    ExperimentConfig c;
    c.experiment = "cone_l8";
    c.p = 16;
    c.deltas = parse_deltas("2^-4:2^-7");
    auto r1 = run_sweep(c), r2 = run_sweep(c);
    std::string a = to_csv(r1);
    CHECK(a == to_csv(r2));
    CHECK(to_csv(from_csv(a)) == a);

    auto dir = (std::filesystem::temp_directory_path() / "conesq_unit_report").string();
    std::filesystem::remove_all(dir);
    auto written = write_report(r1, dir);
    CHECK(written.size() == 1 + r1.size());
    CHECK(slurp(dir + "/results.csv") == a);
    std::string svg = to_svg(r1[0]);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("fft sizing refuses instead of degrading") {
    CHECK_THROWS_AS(cone_grid(1.0 / 64, 16), SizingError);
    try {
        cone_grid(1.0 / 64, 16);
    } catch (const SizingError& e) {
        CHECK(std::string(e.what()).find("smallest feasible delta") != std::string::npos);
    }
    GridSpec g = cone_grid(1.0 / 16, 4096);
    CHECK(g.N == 256);
    CHECK(g.L == 64);
}

}
