#include <cmath>

#include "doctest.h"
#include "conesq/experiments.hpp"
#include "conesq/operators.hpp"
#include "conesq/packets.hpp"

using namespace conesq;

namespace {

ExtremizerConfig cfg_of(ExtremizerKind k, int n, double delta, double p) {
    ExtremizerConfig c;
    c.kind = k;
    c.n = n;
    c.delta = delta;
    c.p = p;
    return c;
}

Plank square2d(const Vec3& c, double a, double b) {
    Plank p;
    p.dim = 2;
    p.center = c;
    p.half = Vec3(a, b, 1);
    return p;
}

}  // namespace

TEST_SUITE("packets") {

TEST_CASE("expected exponents") {
    CHECK(expected_exponent(ExtremizerKind::cone_L8_A2, 3, 8) == 0.0);
    CHECK(expected_exponent(ExtremizerKind::cone_L8_A2, 3, 16) == doctest::Approx(0.125));
    CHECK(expected_exponent(ExtremizerKind::sharp_cutoff_A1, 2, 4) == doctest::Approx(0.0));
    CHECK(expected_exponent(ExtremizerKind::bochner_riesz, 2, 6) == doctest::Approx(1.0 / 6));
    CHECK(build_extremizer(cfg_of(ExtremizerKind::cone_L8_A2, 3, 1.0 / 64, 16)).expected_exponent == doctest::Approx(0.125));
}

TEST_CASE("wave packet L2 norm matches the frequency side") {
    GridSpec g(2, 256, 16);
    WavePacketSpec s{square2d(Vec3(1, 0.5, 0), 0.5, 0.25), Vec3(3, 2, 0), 1.0, true};
    Field f = synthesize_packet(s, g);
    // quadrature of (phi / |R|)^2 on a fine independent mesh
    BumpProfile prof;
    double vol = 4 * 0.5 * 0.25, acc = 0;
    const int M = 2000;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            double u = -2 + 4 * (i + 0.5) / M, v = -2 + 4 * (j + 0.5) / M;
            double w = prof(u) * prof(v) / vol;
            acc += w * w;
        }
    double l2 = std::sqrt(acc * (4.0 / M * 0.5) * (4.0 / M * 0.25));
    CHECK(lp_norm(f, 2) == doctest::Approx(l2).epsilon(0.01));
}

TEST_CASE("packet synthesis: delta-like extreme, modulation, localization") {
    GridSpec g(2, 64, 8);
    const double nyq = g.nyquist();
    WavePacketSpec full{square2d(Vec3::Zero(), nyq / 2.2, nyq / 2.2), Vec3::Zero(), 1.0, true};
    Field f = synthesize_packet(full, g);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(f.values[i]) > std::abs(f.values[arg])) arg = i;
    CHECK(arg == 0);
    double near = 0, tot = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double m = std::norm(f.values[i]);
        tot += m;
        if (g.position_centered(i).norm() < 1) near += m;
    }
    CHECK(near / tot > 0.9);

    WavePacketSpec a{square2d(Vec3(0.5, 0.25, 0), 0.5, 0.5), Vec3(1, 2, 0), 1.0, true};
    WavePacketSpec b = a;
    Vec3 v(0.75, -0.5, 0);  // a multiple of the frequency spacing
    b.box.center += v;
    Field fa = synthesize_packet(a, g), fb = synthesize_packet(b, g);
    Field mod = fa;
    for (std::size_t i = 0; i < g.size(); ++i) mod.values[i] *= std::exp(cplx(0, 2 * kPi * v.dot(g.position(i) - a.position)));
    CHECK(relative_l2_diff(fb, mod) < 1e-12);

    WavePacketSpec wide{square2d(Vec3::Zero(), nyq, 1), Vec3::Zero(), 1.0, true};
    CHECK_THROWS_AS(synthesize_packet(wide, g), BandwidthError);
}

TEST_CASE("cone-plank packet concentrates on its dual box") {
    GridSpec g = cone_grid(1.0 / 16, 4096);
    Plank tau = cone_planks(1.0 / 16)[4];
    WavePacketSpec s{tau, Vec3(5, -3, 2), 1.0, true};
    Field f = synthesize_packet(s, g);
    Plank box = dual_box(tau).dilated(2).recentered(s.position);
    double in = 0, tot = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double m = std::norm(f.values[i]);
        tot += m;
        Vec3 d = g.position(i) - s.position;
        for (int a = 0; a < 3; ++a) d[a] -= g.L * std::round(d[a] / g.L);
        if (box.contains(s.position + d)) in += m;
    }
    CHECK(in / tot >= 0.5);
}

TEST_CASE("dilation trick") {
    Plank cube;
    cube.half = Vec3(0.5, 0.5, 0.5);
    auto r = dilation_trick(cube, 2);
    CHECK(r.dual_relation);
    CHECK(r.theta.half[2] == 0.25);
    CHECK(r.theta.center[2] == 0.25);
    auto r2 = dilation_trick(r.theta, 2);
    CHECK(r2.dual_relation);
    CHECK(dual_box(r2.theta).half[2] == doctest::Approx(4 * dual_box(cube).half[2]));
    Plank tau = cone_planks(1.0 / 64)[7];
    auto rt = dilation_trick(tau, 1);  // along t(tau)
    CHECK(rt.dual_relation);
    CHECK(dual_box(rt.theta).half[1] == doctest::Approx(2 * dual_box(tau).half[1]));
    CHECK_THROWS_AS(dilation_trick(tau, 3), DomainError);
}

TEST_CASE("extremizer tubes are disjoint and the pieces focus") {
    struct Case {
        ExtremizerKind k;
        int n;
        double delta, p;
    };
    for (const Case& c : {Case{ExtremizerKind::cone_L8_A2, 3, 1.0 / 256, 8}, Case{ExtremizerKind::sharp_cutoff_A1, 2, 1.0 / 64, 6},
                          Case{ExtremizerKind::sharp_cutoff_A1, 3, 1.0 / 16, 6},
                          Case{ExtremizerKind::bochner_riesz, 2, 1.0 / 1024, 6}}) {
        Extremizer ex = build_extremizer(cfg_of(c.k, c.n, c.delta, c.p));
        REQUIRE(ex.tubes.size() >= 2);
        CHECK(intersecting_pairs(ex.tubes.boxes, c.n) == 0);
        REQUIRE(ex.pieces.focal.has_value());
        CHECK(focal_overlap(ex.pieces, *ex.pieces.focal) == static_cast<long>(ex.pieces.size()));
    }
}

TEST_CASE("aligned phases interfere constructively at the focus") {
    ExtremizerConfig c = cfg_of(ExtremizerKind::cone_L8_A2, 3, 1.0 / 16, 8);
    Extremizer ex = build_extremizer(c);
    GridSpec g(3, 256, 32);
    Field fh = forward_transform(synthesize_extremizer(ex, g));
    cplx total = 0;
    double mods = 0;
    const double dv = g.cell_volume_frequency();
    for (const auto& tau : ex.frequency_planks) {
        // value of the projected piece at the focus x = 0 is its frequency-side integral
        Multiplier m = adapted_bump(tau);
        cplx v = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (fh.values[i] != cplx(0, 0)) v += m(g.frequency(i)) * fh.values[i] * dv;
        total += v;
        mods += std::abs(v);
    }
    CHECK(mods > 0);
    CHECK(std::abs(total) >= 0.5 * mods);
}

TEST_CASE("cone family norm scales like delta^{-2/p}") {
    for (double p : {8.0, 16.0}) {
        std::vector<std::pair<double, double>> pts;
        for (int k = 6; k <= 10; ++k) {
            double d = std::ldexp(1.0, -k);
            Extremizer ex = build_extremizer(cfg_of(ExtremizerKind::cone_L8_A2, 3, d, p));
            SamplerConfig sc;
            sc.samples = 20000;
            sc.mode = SamplerMode::importance;
            pts.push_back({d, counting_lp(ex.tubes, p, sc).value});
        }
        CHECK(std::abs(fit_exponent(pts).alpha - 2 / p) <= 0.1);
    }
}

TEST_CASE("builds are deterministic") {
    ExtremizerConfig c = cfg_of(ExtremizerKind::sharp_cutoff_A1, 3, 1.0 / 16, 6);
    c.phase_mode = PhaseMode::random;
    c.seed = 42;
    Extremizer a = build_extremizer(c), b = build_extremizer(c);
    REQUIRE(a.tubes.size() == b.tubes.size());
    for (std::size_t i = 0; i < a.tubes.size(); ++i) {
        CHECK(a.tubes.amplitudes[i] == b.tubes.amplitudes[i]);
        CHECK((a.tubes.boxes[i].center - b.tubes.boxes[i].center).norm() == 0);
    }
    CHECK_THROWS_AS(build_extremizer(cfg_of(ExtremizerKind::cone_L8_A2, 2, 1.0 / 16, 8)), DomainError);
    CHECK_THROWS_AS(build_extremizer(cfg_of(ExtremizerKind::cone_L8_A2, 3, 0.1, 8)), DomainError);
}

}
