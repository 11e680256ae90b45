#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "conesq/grid.hpp"

using namespace conesq;

namespace {

// Direct DFT with the same conventions: centered integer frequencies k, fhat(k) = sum_x f(x) e^{-2 pi i k.x/L} h^d.
Field direct_dft(const Field& f) {
    const GridSpec& g = f.spec;
    Field out(g, Side::frequency, f.role);
    for (std::size_t a = 0; a < g.size(); ++a) {
        Vec3 xi = g.frequency(a);
        cplx acc = 0;
        for (std::size_t b = 0; b < g.size(); ++b) acc += f.values[b] * std::exp(cplx(0, -2 * kPi * xi.dot(g.position(b))));
        out.values[a] = acc * g.cell_volume_physical();
    }
    return out;
}

Field random_field(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    return random_physical_field(g, rng);
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("grid spec validation") {
    CHECK_THROWS_AS(GridSpec(2, 48, 1.0), DomainError);
    CHECK_THROWS_AS(GridSpec(4, 16, 1.0), DomainError);
    CHECK_THROWS_AS(GridSpec(2, 16, 0.0), DomainError);
    GridSpec g(3, 32, 4.0);
    CHECK(g.spacing() * g.freq_spacing() * g.N == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.nyquist() == 4.0);
    CHECK(g.size() == 32u * 32u * 32u);
}

TEST_CASE("constant field transforms to a DC spike") {
    GridSpec g(2, 32, 1.0);
    Field f(g, Side::physical);
    for (auto& v : f.values) v = 1.0;
    Field F = forward_transform(f);
    long zero[3] = {0, 0, 0};
    std::size_t dc = g.index_of_frequency(zero);
    CHECK(std::abs(F.values[dc]) > 0.5);
    for (std::size_t i = 0; i < F.size(); ++i)
        if (i != dc) CHECK(std::abs(F.values[i]) < 1e-12);
}

TEST_CASE("pure mode lands on one frequency") {
    GridSpec g(2, 16, 2.0);
    const long m[2] = {3, -5};
    Field f(g, Side::physical);
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vec3 x = g.position(i);
        f.values[i] = std::exp(cplx(0, 2 * kPi * (m[0] * x[0] + m[1] * x[1]) / g.L));
    }
    Field F = forward_transform(f);
    long k[3] = {m[0], m[1], 0};
    std::size_t at = g.index_of_frequency(k);
    CHECK((g.frequency(at) - Vec3(3 / 2.0, -5 / 2.0, 0)).norm() < 1e-14);
    for (std::size_t i = 0; i < F.size(); ++i)
        if (i != at) CHECK(std::abs(F.values[i]) < 1e-12);
}

TEST_CASE("fft agrees with a direct DFT on small grids") {
    for (int dim : {2, 3}) {
        GridSpec g(dim, 8, 1.5);
        Field f = random_field(g, 11 + dim);
        CHECK(relative_l2_diff(forward_transform(f), direct_dft(f)) < 1e-13);
    }
}

TEST_CASE("plancherel and round trip") {
    GridSpec g(2, 64, 3.0);
    Field f = random_field(g, 5);
    Field F = forward_transform(f);
    CHECK(lp_norm(F, 2) / lp_norm(f, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(relative_l2_diff(inverse_transform(F), f) < 1e-12);
}

TEST_CASE("parseval for products") {
    GridSpec g(3, 16, 2.0);
    Field f = random_field(g, 1), h = random_field(g, 2);
    cplx a = inner(f, h), b = inner(forward_transform(f), forward_transform(h));
    CHECK(std::abs(a - b) / std::abs(a) < 1e-10);
}

TEST_CASE("side tags are enforced") {
    GridSpec g(2, 8, 1.0);
    Field f(g, Side::frequency);
    CHECK_THROWS_AS(forward_transform(f), ContractError);
    Field p(g, Side::physical);
    CHECK_THROWS_AS(inverse_transform(p), ContractError);
}

TEST_CASE("lp norms") {
    GridSpec g(2, 32, 1.0);
    Field one(g, Side::physical);
    for (auto& v : one.values) v = 1.0;
    CHECK(lp_norm(one, 4) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lp_norm(one, INFINITY) == 1.0);
    Field half(g, Side::physical);
    for (std::size_t i = 0; i < g.size(); i += 2) half.values[i] = 1.0;
    CHECK(lp_norm(half, 2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(lp_norm(one, 0.5), DomainError);
}

TEST_CASE("lp norm is homogeneous and monotone") {
    GridSpec g(2, 32, 1.0);
    Field f = random_field(g, 9);
    Field twice = f, bigger = f;
    for (auto& v : twice.values) v *= 2.5;
    for (auto& v : bigger.values) v *= 1 + 0.1 * std::abs(v);
    for (double p : {1.0, 2.0, 3.5, 8.0}) {
        CHECK(lp_norm(twice, p) == doctest::Approx(2.5 * lp_norm(f, p)).epsilon(1e-13));
        CHECK(lp_norm(bigger, p) >= lp_norm(f, p));
    }
}

TEST_CASE("binary container round trip") {
    GridSpec g(3, 8, 2.5);
    Field f = random_field(g, 3);
    f.role = "g_tau_high";
    auto dir = std::filesystem::temp_directory_path() / "conesq_unit";
    std::filesystem::create_directories(dir);
    std::string p64 = (dir / "f64.field").string(), p32 = (dir / "f32.field").string();
    write_field(f, p64);
    Field r = read_field(p64);
    CHECK(r.spec == f.spec);
    CHECK(r.side == Side::physical);
    CHECK(r.role == "g_tau_high");
    CHECK(relative_l2_diff(r, f) == 0.0);
    write_field(f, p32, true);
    CHECK(relative_l2_diff(read_field(p32), f) < 1e-6);
    CHECK_THROWS_AS(read_field((dir / "missing.field").string()), IoError);
}

}
