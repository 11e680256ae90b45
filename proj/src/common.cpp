#include "conesq/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace conesq {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

bool is_dyadic(double x) {
    if (!(x > 0) || !std::isfinite(x)) return false;
    int e = 0;
    double m = std::frexp(x, &e);
    return m == 0.5;
}

double dyadic_floor(double x) {
    if (!(x > 0)) throw DomainError("dyadic_floor: nonpositive argument");
    int e = 0;
    double m = std::frexp(x, &e);
    return m == 0.5 ? x : std::ldexp(1.0, e - 1);
}

Vec3 any_orthogonal(const Vec3& v) {
    Vec3 a = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 w = a - a.dot(v) * v / v.squaredNorm();
    return w.normalized();
}

Mat3 frame_from_axis(const Vec3& axis) {
    Vec3 c = axis.normalized();
    Vec3 a = any_orthogonal(c);
    Vec3 b = c.cross(a);
    Mat3 m;
    m.col(0) = a;
    m.col(1) = b;
    m.col(2) = c;
    return m;
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

Vec3 random_unit(Rng& rng, int dim) {
    std::normal_distribution<double> g;
    Vec3 v = Vec3::Zero();
    do {
        for (int i = 0; i < dim; ++i) v[i] = g(rng);
    } while (v.norm() < 1e-12);
    return v.normalized();
}

double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of empty set");
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt_num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace conesq
