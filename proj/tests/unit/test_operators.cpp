#include <cmath>

#include "doctest.h"
#include "conesq/operators.hpp"

using namespace conesq;

namespace {

Field band(const GridSpec& g, std::uint64_t seed, const std::function<bool(const Vec3&)>& admit) {
    Rng rng(seed);
    return random_frequency_field(g, admit, rng);
}

bool annulus(const Vec3& x) { return x.norm() > 0.5 && x.norm() <= 1.5; }

Field sum(const Field& a, const Field& b) {
    Field c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.values[i] += b.values[i];
    return c;
}

RBuf constant(const GridSpec& g, double c) { return RBuf(g.size(), c); }

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("one cap equal to 1 on the support is the identity") {
    GridSpec g(2, 64, 16);
    Field fh = band(g, 1, [](const Vec3& x) { return x.norm() > 0.5 && x.norm() < 1 && x.x() > 0.9 * x.norm(); });
    Cap c(2, Vec3::UnitX(), 1.2);
    auto fam = cap_family({c});
    auto out = apply_projection(fam, fh);
    REQUIRE(out.size() == 1);
    CHECK(relative_l2_diff(out[0], inverse_transform(fh)) < 1e-13);
}

TEST_CASE("sharp sectors partition the grid") {
    GridSpec g(2, 64, 16);
    auto polys = planar_sectors(8);
    auto fam = sharp_family(polys);
    // support in sector 0 only
    auto labels = sharp_labels(g, polys);
    Field fh = band(g, 2, [&](const Vec3& x) { return x.norm() > 0.3 && x.norm() < 1.5; });
    for (std::size_t i = 0; i < g.size(); ++i)
        if (labels[i] != 0) fh.values[i] = 0;
    auto out = apply_projection(fam, fh);
    Field f = inverse_transform(fh);
    CHECK(relative_l2_diff(out[0], f) < 1e-13);
    for (std::size_t j = 1; j < out.size(); ++j) CHECK(lp_norm(out[j], 2) < 1e-13 * lp_norm(f, 2));
    // every nonzero frequency gets exactly one label
    long zero[3] = {0, 0, 0};
    std::size_t dc = g.index_of_frequency(zero);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (i != dc) CHECK(labels[i] >= 0);
}

TEST_CASE("sharp piece of a smooth piece") {
    GridSpec g(2, 128, 16);
    auto polys = planar_sectors(8);
    Field fh = band(g, 3, annulus);
    // bump equal to 1 on the whole sector direction set
    Cap wide(2, Vec3(std::cos(kPi / 8), std::sin(kPi / 8), 0), 4 * kPi / 8 + 1e-6);
    Field Tf = forward_transform(apply_projection(cap_family({wide}), fh)[0]);
    Field S = apply_projection(sharp_family({polys[0]}), fh)[0];
    Field ST = apply_projection(sharp_family({polys[0]}), Tf)[0];
    CHECK(relative_l2_diff(ST, S) < 1e-10);
}

TEST_CASE("projections are linear, sharp pieces idempotent, smooth pieces commute with translation") {
    GridSpec g(2, 64, 16);
    Field a = band(g, 4, annulus), b = band(g, 5, annulus);
    auto sharp = sharp_family(planar_sectors(6));
    auto pa = apply_projection(sharp, a), pb = apply_projection(sharp, b), pab = apply_projection(sharp, sum(a, b));
    for (std::size_t j = 0; j < pa.size(); ++j) CHECK(relative_l2_diff(pab[j], sum(pa[j], pb[j])) < 1e-13);
    for (std::size_t j = 0; j < pa.size(); ++j) {
        Field twice = apply_projection(sharp_family({sharp.polys[j]}), forward_transform(pa[j]))[0];
        CHECK(relative_l2_diff(twice, pa[j]) < 1e-12);
    }
    auto smooth = cap_family(separated_caps(2, 2 * kPi / 16));
    // translate f by (3 grid cells, -5 grid cells)
    const double h = g.spacing();
    Field at = a;
    for (std::size_t i = 0; i < g.size(); ++i) at.values[i] *= std::exp(cplx(0, -2 * kPi * g.frequency(i).dot(Vec3(3 * h, -5 * h, 0))));
    auto p0 = apply_projection(smooth, a), p1 = apply_projection(smooth, at);
    for (std::size_t j = 0; j < p0.size(); ++j) {
        Field shifted(g, Side::physical);
        long idx[3];
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.unravel(i, idx);
            long x = (idx[0] - 3 + g.N) % g.N, y = (idx[1] + 5) % g.N;
            shifted.values[i] = p0[j].values[static_cast<std::size_t>(x * g.N + y)];
        }
        CHECK(relative_l2_diff(p1[j], shifted) < 1e-10);
    }
}

TEST_CASE("bandwidth is checked") {
    GridSpec g(2, 16, 4);
    Plank big;
    big.dim = 2;
    big.half = Vec3(3, 3, 1);
    Field fh(g, Side::frequency);
    CHECK_THROWS_AS(project(adapted_bump(big), fh), BandwidthError);
}

TEST_CASE("littlewood-paley split") {
    GridSpec g(2, 128, 16);
    Field fh = band(g, 6, [](const Vec3& x) { return x.norm() > 0.3; });
    Field f = inverse_transform(fh);
    const int m = 4;
    Field rec(g, Side::physical);
    for (int i = 0; i < m; ++i) {
        auto parts = littlewood_paley_split(fh, i, m);
        for (std::size_t a = 1; a < parts.size(); ++a) CHECK(parts[a].first - parts[a - 1].first >= m);
        for (const auto& [k, pk] : parts) {
            CHECK(((k % m) + m) % m == i);
            rec = sum(rec, pk);
        }
    }
    CHECK(relative_l2_diff(rec, f) < 1e-10);

    // one annulus: only the neighbors of k survive
    Field one = band(g, 7, [](const Vec3& x) { return x.norm() >= 1.6 && x.norm() <= 2.4; });
    for (int i = 0; i < m; ++i)
        for (const auto& [k, pk] : littlewood_paley_split(one, i, m))
            if (k < 0 || k > 2) CHECK(lp_norm(pk, 2) < 1e-12 * lp_norm(one, 2));
}

TEST_CASE("directional maximal operator") {
    GridSpec g(2, 64, 8);
    MaximalConfig cfg;
    CHECK_THROWS_AS(directional_maximal(g, constant(g, 1), cfg), DomainError);
    for (const auto& c : separated_caps(2, 2 * kPi / 16)) cfg.directions.push_back(c.center);
    RBuf out = directional_maximal(g, constant(g, 2.5), cfg);
    for (double v : out) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

    // a horizontal segment
    RBuf seg(g.size(), 0.0);
    for (long x = 10; x < 26; ++x) seg[static_cast<std::size_t>(x * g.N + 30)] = 1;
    RBuf m = maximal_line(g, seg, Vec3::UnitX());
    for (long x = 10; x < 26; ++x) CHECK(m[static_cast<std::size_t>(x * g.N + 30)] >= 0.5);

    // sublinear and monotone
    Rng rng(3);
    std::uniform_real_distribution<double> U(0, 1);
    RBuf a(g.size()), b(g.size()), ab(g.size()), big(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        a[i] = U(rng);
        b[i] = U(rng);
        ab[i] = a[i] + b[i];
        big[i] = a[i] + 0.1;
    }
    RBuf Ma = directional_maximal(g, a, cfg), Mb = directional_maximal(g, b, cfg), Mab = directional_maximal(g, ab, cfg),
         Mbig = directional_maximal(g, big, cfg);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(Mab[i] <= Ma[i] + Mb[i] + 1e-12);
        CHECK(Ma[i] <= Mbig[i] + 1e-12);
    }
}

TEST_CASE("maximal norms grow slowly with the number of directions") {
    GridSpec g(2, 128, 16);
    Rng rng(12);
    std::uniform_real_distribution<double> U(0, 1);
    RBuf w(g.size());
    for (auto& v : w) v = U(rng);
    std::vector<std::pair<double, double>> pts;
    double base = lp_norm_abs(g, w.data(), 2);
    for (int dirs : {16, 32, 64}) {
        MaximalConfig cfg;
        for (const auto& c : separated_caps(2, 2 * kPi / dirs)) cfg.directions.push_back(c.center);
        RBuf m = directional_maximal(g, w, cfg);
        pts.push_back({1.0 / dirs, lp_norm_abs(g, m.data(), 2) / base});
    }
    double slope = std::log(pts[2].second / pts[0].second) / std::log(4.0);
    CHECK(slope < 0.1);
}

TEST_CASE("weighted l2 and plank lp checks reduce to bessel") {
    GridSpec g(2, 64, 16);
    Plank R;
    R.dim = 2;
    R.center = Vec3(1, 0.5, 0);
    R.half = Vec3(0.25, 0.25, 1);
    auto fam = plank_family({R});
    Field fh = band(g, 8, [&](const Vec3& x) { return R.dilated(1.5).contains(x); });
    CHECK(weighted_l2_check(fam, fh, constant(g, 1)).ratio <= 1 + 1e-6);
    CHECK(plank_lp_check(fam, fh, 2).ratio <= 1 + 1e-6);
    Plank R2 = R;
    R2.half = Vec3(0.5, 0.25, 1);
    CHECK_THROWS_AS(weighted_l2_check(plank_family({R, R2}), fh, constant(g, 1)), ContractError);
    CHECK_THROWS_AS(plank_lp_check(fam, fh, 4, dual_box(R).dilated(0.5)), ContractError);
}

TEST_CASE("plank check ratios are invariant under scaling f") {
    GridSpec g(2, 64, 16);
    std::vector<Plank> ps;
    for (int i = -2; i < 2; ++i)
        for (int j = -2; j < 2; ++j) {
            Plank R;
            R.dim = 2;
            R.center = Vec3(0.5 * i + 0.25, 0.5 * j + 0.25, 0);
            R.half = Vec3(0.25, 0.25, 1);
            ps.push_back(R);
        }
    auto fam = plank_family(ps);
    Field fh = band(g, 9, [](const Vec3& x) { return x.lpNorm<Eigen::Infinity>() < 1; });
    Field fh3 = fh;
    for (auto& v : fh3.values) v *= 3.0;
    Rng rng(1);
    std::uniform_real_distribution<double> U(0, 1);
    RBuf w(g.size());
    for (auto& v : w) v = U(rng);
    CHECK(weighted_l2_check(fam, fh3, w).ratio == doctest::Approx(weighted_l2_check(fam, fh, w).ratio).epsilon(1e-12));
    CHECK(plank_lp_check(fam, fh3, 4).ratio == doctest::Approx(plank_lp_check(fam, fh, 4).ratio).epsilon(1e-12));
    CHECK(plank_lp_check(fam, fh, 4).ratio <= 10);
}

}
