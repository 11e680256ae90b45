#include <cmath>
#include <sstream>

#include "doctest.h"
#include "conesq/geometry.hpp"

using namespace conesq;

namespace {

Vec3 random_cone_point(Rng& rng, double delta) {
    // uniform-ish point of {dist <= delta, 1/2 <= xi_3 <= 1}
    std::uniform_real_distribution<double> U(0, 1);
    double z = 0.5 + 0.5 * U(rng), phi = 2 * kPi * U(rng), off = (2 * U(rng) - 1) * delta;
    Mat3 F = cone_frame(phi);
    Vec3 on(z * std::cos(phi), z * std::sin(phi), z);
    return on + off * F.col(0);
}

// Vertices of the two slabs of a theta_tau box lying beyond the low box along the long axis.
std::vector<Vec3> high_vertices(const Plank& tt, const Plank& low) {
    std::vector<Vec3> out;
    for (double sgn : {-1.0, 1.0})
        for (double a : {-1.0, 1.0})
            for (double b : {-1.0, 1.0})
                for (double c : {low.half[2], tt.half[2]})
                    out.push_back(tt.global(Vec3(a * tt.half[0], b * tt.half[1], sgn * c)));
    return out;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("separated caps on the circle") {
    auto caps = separated_caps(2, 2 * kPi / 16);
    REQUIRE(caps.size() == 16);
    for (std::size_t i = 0; i < caps.size(); ++i)
        CHECK(angle_between(caps[i].center, caps[(i + 1) % 16].center) == doctest::Approx(2 * kPi / 16).epsilon(1e-9));
}

TEST_CASE("separated caps on the sphere: separation, maximality, counts") {
    Rng rng(7);
    for (double d : {0.5, 0.1}) {
        auto caps = separated_caps(3, d);
        for (std::size_t i = 0; i < caps.size(); ++i)
            for (std::size_t j = i + 1; j < caps.size(); ++j)
                CHECK(angle_between(caps[i].center, caps[j].center) >= d * (1 - 1e-9));
        for (int t = 0; t < 2000; ++t) {
            Vec3 u = random_unit(rng, 3);
            double best = 10;
            for (const auto& c : caps) best = std::min(best, angle_between(u, c.center));
            CHECK(best <= 2 * d);
        }
        if (d == 0.5) {
            CHECK(caps.size() >= 4);
            CHECK(caps.size() <= 64);
        } else {
            // area counting: disjoint d/2-caps give at most 16/d^2, 2d-caps covering the sphere need at least 1/d^2
            CHECK(caps.size() >= 100);
            CHECK(caps.size() <= 1600);
        }
    }
    CHECK_THROWS_AS(separated_caps(3, 0.6), DomainError);
    CHECK(separated_caps(3, 0.2).size() == separated_caps(3, 0.2).size());
}

TEST_CASE("cone planks: count, centers, coverage, multiplicity") {
    auto taus = cone_planks(1.0 / 16);
    CHECK(taus.size() == 25);
    for (const auto& t : taus) {
        CHECK(distance_to_cone(t.center) <= 1.0 / 16);
        t.validate();
    }
    Rng rng(3);
    for (double d : {1.0 / 16, 1.0 / 256}) {
        auto tt = cone_planks(d);
        int worst = 0;
        for (int i = 0; i < 10000; ++i) {
            Vec3 x = random_cone_point(rng, d);
            int cnt = 0;
            for (const auto& t : tt) cnt += t.contains(x);
            CHECK(cnt >= 1);
            worst = std::max(worst, cnt);
        }
        CHECK(worst <= 4);
    }
    CHECK_THROWS_AS(cone_planks(0.1), DomainError);
    CHECK_THROWS_AS(cone_planks(1.0 / 8), DomainError);
}

TEST_CASE("refine planks") {
    auto tau = cone_planks(1.0 / 64)[5];
    auto one = refine_planks(tau, 1);
    REQUIRE(one.size() == 1);
    CHECK((one[0].center - tau.center).norm() == 0);
    auto two = refine_planks(tau, 0.5);
    REQUIRE(two.size() == 2);
    CHECK(two[0].volume() + two[1].volume() == doctest::Approx(tau.volume()).epsilon(1e-14));
    CHECK_FALSE(two[0].contains(two[1].center));
    auto four = refine_planks(tau, 0.25);
    REQUIRE(four.size() == 4);
    double vol = 0;
    for (const auto& t : four) {
        CHECK(t.half[tau.longest_axis()] == doctest::Approx(0.125));
        vol += t.volume();
    }
    CHECK(vol == doctest::Approx(tau.volume()).epsilon(1e-14));
    CHECK_THROWS_AS(refine_planks(tau, 1.0 / 16), DomainError);
}

TEST_CASE("dual box") {
    Plank u;
    u.center = Vec3(3, -1, 2);
    u.half = Vec3(0.5, 0.5, 0.5);
    Plank d = dual_box(u);
    CHECK(d.center.norm() == 0);
    CHECK((d.half - Vec3(0.5, 0.5, 0.5)).norm() < 1e-15);
    auto tau = cone_planks(1.0 / 64)[3];
    Plank ts = dual_box(tau);
    for (int i = 0; i < 3; ++i) CHECK(ts.half[i] * tau.half[i] == doctest::Approx(kDualFactor));
    Plank dd = dual_box(dual_box(tau));
    CHECK(dd.center.norm() == 0);
    CHECK((dd.half - tau.half).norm() < 1e-15);
    CHECK((dd.axes - tau.axes).norm() == 0);
}

TEST_CASE("omega cover") {
    const double delta = 1.0 / 64;
    CHECK_THROWS_AS(omega_cover(1, 2, delta), DomainError);
    auto oc = omega_cover(1, 4, delta);
    REQUIRE(oc.omegas.size() >= 2);
    CHECK(oc.phis[1] - oc.phis[0] == doctest::Approx(2 * kPi / std::lround(2 * kPi / std::sqrt(delta))));
    auto taus = cone_planks(delta);
    for (const auto& t : taus) {
        Plank tt = theta_tau(t, 1);
        Plank lo = theta_tau_low(tt, 1, 4);
        int w = oc.assign(t);
        const Plank& om = oc.omegas[w];
        Plank re = reflect_origin(om);
        Plank wide = om.dilated(100);
        for (const auto& v : tt.vertices()) CHECK(wide.contains(v, 1e-9));
        for (const auto& v : high_vertices(tt, lo)) {
            CHECK((om.contains(v, 1e-9) || re.contains(v, 1e-9)));
        }
        // negative control: the diametrically opposite omega
        const Plank& far = oc.omegas[(w + oc.omegas.size() / 2) % oc.omegas.size()];
        bool all_far = true;
        for (const auto& v : high_vertices(tt, lo)) all_far = all_far && far.contains(v, 1e-9);
        CHECK_FALSE(all_far);
    }
}

TEST_CASE("u tiling") {
    auto oc = omega_s_cover(1, 8, 1.0 / 8);
    const double R = 64, s = 1.0 / 8;
    Tiling T = u_tiling(oc.omegas[0], R, s, 1, 200);
    CHECK(T.base.half[0] * 2 == doctest::Approx(R));
    CHECK(T.base.half[1] * 2 == doctest::Approx(R * s));
    CHECK(T.base.half[2] * 2 == doctest::Approx(R * s * s));
    Rng rng(1);
    std::uniform_real_distribution<double> U(0, 200);
    for (int i = 0; i < 2000; ++i) {
        Vec3 x(U(rng), U(rng), U(rng));
        auto idx = T.index_of(x);
        CHECK(T.tile(idx).contains(x, 1e-12));
        for (int a = 0; a < 3; ++a) {
            CHECK(idx[a] >= T.index_min[a]);
            CHECK(idx[a] <= T.index_max[a]);
        }
    }
    CHECK_THROWS_AS(u_tiling(oc.omegas[0], R, 1.0 / 64, 1, 200), DomainError);
}

TEST_CASE("minkowski disjointness criterion") {
    auto caps = separated_caps(2, 2 * kPi / 64);
    Cap a = caps[0], b = caps[16];
    CHECK_FALSE(minkowski_disjointness(a, a, {20, 2, 10, 12}, 8).applicable);
    CHECK_FALSE(minkowski_disjointness(a, b, {5, 2, 5, 12}, 8).applicable);
    auto r = minkowski_disjointness(a, b, {20, 2, 10, 12}, 8);
    CHECK(r.applicable);
    CHECK(r.disjoint);
    Rng rng(2);
    CHECK(minkowski_sample_hits(a, b, {20, 2, 10, 12}, rng, 500, 100) == 0);
}

TEST_CASE("one-dimensional families") {
    CHECK(check_one_dimensional(planar_sectors(12, 3), 1e-9).one_dimensional);
    CHECK(check_one_dimensional(planar_sectors(12, 3), 1e-9).poles.size() == 1);
    CHECK(check_one_dimensional(pyramid_family(6), 1e-9).one_dimensional);
    // normals delta-dense on the sphere
    std::vector<Polyhedron> dense;
    for (const auto& c : separated_caps(3, 0.3)) dense.push_back(attached_cube(any_orthogonal(c.center), c.center, 0.05));
    CHECK_FALSE(check_one_dimensional(dense, 1e-3).one_dimensional);
}

TEST_CASE("one-dimensionality is rotation invariant") {
    Rng rng(5);
    auto fam = pyramid_family(5);
    for (int t = 0; t < 5; ++t) {
        Mat3 Q = Eigen::Quaterniond(Eigen::Vector4d::Random().normalized()).toRotationMatrix();
        auto rot = fam;
        for (auto& P : rot) {
            for (auto& n : P.normals) n = Q * n;
            P.anchor = Q * P.anchor;
        }
        CHECK(check_one_dimensional(rot, 1e-9).one_dimensional);
    }
}

TEST_CASE("box intersection") {
    Plank a, b;
    a.half = b.half = Vec3(1, 1, 1);
    b.center = Vec3(2, 0, 0);
    CHECK(boxes_intersect(a, b));  // touching
    b.center = Vec3(2.01, 0, 0);
    CHECK_FALSE(boxes_intersect(a, b));
    b.axes = frame_from_axis(Vec3(1, 1, 0).normalized());
    b.center = Vec3(2.3, 0, 0);
    CHECK(boxes_intersect(a, b));
    CHECK(box_meets_ball(a, Vec3(2.5, 0, 0), 1.5));
    CHECK_FALSE(box_meets_ball(a, Vec3(2.5, 0, 0), 1.4));
}

TEST_CASE("geometry text round trip") {
    auto taus = cone_planks(1.0 / 16);
    std::stringstream ss;
    write_geometry(ss, taus);
    auto back = read_planks(ss);
    REQUIRE(back.size() == taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        CHECK((back[i].center - taus[i].center).norm() < 1e-9);
        CHECK((back[i].half - taus[i].half).norm() < 1e-9);
        CHECK(back[i].role == PlankRole::tau);
    }
}

}
