#include "conesq/geometry.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace conesq {

namespace {

constexpr double kAngTol = 1e-12;

Vec3 random_in_cap(const Cap& c, Rng& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    if (c.dim == 2) {
        double a = std::atan2(c.center.y(), c.center.x()) + (2 * U(rng) - 1) * c.radius;
        return Vec3(std::cos(a), std::sin(a), 0);
    }
    // area-uniform on the cap
    double cz = 1 - U(rng) * (1 - std::cos(c.radius));
    double s = std::sqrt(std::max(0.0, 1 - cz * cz));
    double ph = 2 * kPi * U(rng);
    Mat3 F = frame_from_axis(c.center);
    return F * Vec3(s * std::cos(ph), s * std::sin(ph), cz);
}

Vec3 sample_conic_tube(const Cap& c, int k, Rng& rng) {
    std::uniform_real_distribution<double> U(std::ldexp(1.0, k - 2), std::ldexp(1.0, k + 2));
    return random_in_cap(c, rng) * U(rng);
}

bool in_conic_tube(const Cap& c, int k, const Vec3& x) {
    double r = x.norm();
    if (r < std::ldexp(1.0, k - 2) || r > std::ldexp(1.0, k + 2)) return false;
    return angle_between(x, c.center) <= c.radius;
}

struct CellKey {
    long a, b, c;
    bool operator==(const CellKey& o) const { return a == o.a && b == o.b && c == o.c; }
};
struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        return std::hash<long>()(k.a * 73856093L ^ k.b * 19349663L ^ k.c * 83492791L);
    }
};

}  // namespace

Cap::Cap(int dim_, const Vec3& c, double r) : dim(dim_), center(c.normalized()), radius(r) {
    if (dim != 2 && dim != 3) throw DomainError("Cap: dim must be 2 or 3");
    if (!(r > 0)) throw DomainError("Cap: radius must be positive");
    if (dim == 2 && std::abs(c.z()) > 1e-12) throw DomainError("Cap: 2D cap must lie in the plane");
}

bool Cap::contains_direction(const Vec3& u) const { return angle_between(u, center) <= radius + kAngTol; }

bool Polyhedron::contains(const Vec3& xi) const {
    double r = xi.norm();
    if (r == 0) return false;
    for (std::size_t i = 0; i < normals.size(); ++i)
        if (xi.dot(normals[i]) > offsets[i] * r) return false;
    return true;
}

bool Polyhedron::check_regular(Rng& rng, int samples) const {
    Cap probe(dim, anchor, 2 * outer_C * delta);
    for (int s = 0; s < samples; ++s) {
        Vec3 u = random_in_cap(probe, rng);
        double a = angle_between(u, anchor);
        bool in = contains(u);
        if (a <= inner_c * delta && !in) return false;
        if (in && a > outer_C * delta) return false;
    }
    // anchor itself and the inner boundary
    return contains(anchor);
}

std::string role_name(PlankRole r) {
    switch (r) {
        case PlankRole::tau: return "tau";
        case PlankRole::theta: return "theta";
        case PlankRole::omega: return "omega";
        case PlankRole::omega_s: return "omega_s";
        case PlankRole::theta_star: return "theta_star";
        case PlankRole::U: return "U";
        case PlankRole::R: return "R";
        default: return "generic";
    }
}

PlankRole role_from_name(const std::string& s) {
    for (auto r : {PlankRole::tau, PlankRole::theta, PlankRole::omega, PlankRole::omega_s,
                   PlankRole::theta_star, PlankRole::U, PlankRole::R, PlankRole::generic})
        if (role_name(r) == s) return r;
    throw IoError("unknown plank role: " + s);
}

bool Plank::contains(const Vec3& x, double rel_slack) const {
    Vec3 l = local(x);
    for (int i = 0; i < dim; ++i)
        if (std::abs(l[i]) > half[i] * (1 + rel_slack) + 1e-14 * (1 + std::abs(half[i]))) return false;
    return true;
}

double Plank::volume() const {
    double v = 1;
    for (int i = 0; i < dim; ++i) v *= 2 * half[i];
    return v;
}

std::vector<Vec3> Plank::vertices() const {
    std::vector<Vec3> out;
    int nv = 1 << dim;
    for (int m = 0; m < nv; ++m) {
        Vec3 l = Vec3::Zero();
        for (int i = 0; i < dim; ++i) l[i] = (m >> i & 1) ? half[i] : -half[i];
        out.push_back(global(l));
    }
    return out;
}

Plank Plank::dilated(double f) const {
    Plank p = *this;
    p.half *= f;
    return p;
}

Plank Plank::dilated_axis(int axis, double f) const {
    Plank p = *this;
    p.half[axis] *= f;
    return p;
}

Plank Plank::translated(const Vec3& v) const {
    Plank p = *this;
    p.center += v;
    return p;
}

Plank Plank::recentered(const Vec3& c) const {
    Plank p = *this;
    p.center = c;
    return p;
}

int Plank::longest_axis() const {
    int best = 0;
    for (int i = 1; i < dim; ++i)
        if (half[i] > half[best]) best = i;
    return best;
}

void Plank::validate() const {
    Mat3 A = axes;
    if (dim == 2) {
        Eigen::Matrix2d B = A.topLeftCorner<2, 2>();
        if ((B.transpose() * B - Eigen::Matrix2d::Identity()).norm() > 1e-10)
            throw ContractError("Plank: axes not orthonormal");
    } else if ((A.transpose() * A - Mat3::Identity()).norm() > 1e-10) {
        throw ContractError("Plank: axes not orthonormal");
    }
    for (int i = 0; i < dim; ++i)
        if (!(half[i] > 0)) throw ContractError("Plank: half-widths must be positive");
}

std::array<long, 3> Tiling::index_of(const Vec3& x) const {
    std::array<long, 3> idx{0, 0, 0};
    Vec3 d = x - base.center;
    for (int i = 0; i < base.dim; ++i)
        idx[i] = static_cast<long>(std::floor(d.dot(base.axes.col(i)) / (2 * base.half[i]) + 0.5));
    return idx;
}

Plank Tiling::tile(const std::array<long, 3>& idx) const {
    Vec3 c = base.center;
    for (int i = 0; i < base.dim; ++i) c += static_cast<double>(idx[i]) * lattice[i];
    return base.recentered(c);
}

long Tiling::flat_index(const std::array<long, 3>& idx) const {
    long f = 0;
    for (int i = 0; i < base.dim; ++i) {
        long span = index_max[i] - index_min[i] + 1;
        long j = idx[i] - index_min[i];
        if (j < 0 || j >= span) return -1;
        f = f * span + j;
    }
    return f;
}

long Tiling::tile_count() const {
    long c = 1;
    for (int i = 0; i < base.dim; ++i) c *= index_max[i] - index_min[i] + 1;
    return c;
}

Mat3 cone_frame(double phi) {
    const double r = 1 / std::sqrt(2.0);
    Mat3 m;
    m.col(0) = Vec3(std::cos(phi) * r, std::sin(phi) * r, -r);
    m.col(1) = Vec3(-std::sin(phi), std::cos(phi), 0);
    m.col(2) = Vec3(std::cos(phi) * r, std::sin(phi) * r, r);
    return m;
}

double azimuth(const Vec3& v) { return std::atan2(v.y(), v.x()); }

double distance_to_cone(const Vec3& xi) {
    double rho = std::hypot(xi.x(), xi.y());
    return std::abs(rho - std::abs(xi.z())) / std::sqrt(2.0);
}

std::vector<Cap> separated_caps(int n, double delta, const std::optional<Cap>& region) {
    if (n != 2 && n != 3) throw DomainError("separated_caps: n must be 2 or 3");
    if (!(delta > 0) || delta > 0.5) throw DomainError("separated_caps: delta must lie in (0, 1/2]");
    const double sep = delta * (1 - 1e-9);
    std::vector<Vec3> centers;
    if (n == 2) {
        // candidate angles on a fine regular grid, walked in order
        long M = static_cast<long>(std::ceil(2 * kPi / delta)) * 64;
        double a0 = 0, span = 2 * kPi;
        if (region) {
            a0 = azimuth(region->center) - region->radius;
            span = 2 * region->radius;
        }
        for (long i = 0; i < M; ++i) {
            double a = a0 + span * static_cast<double>(i) / static_cast<double>(M);
            Vec3 u(std::cos(a), std::sin(a), 0);
            if (region && !region->contains_direction(u)) continue;
            bool ok = true;
            for (const auto& c : centers)
                if (angle_between(u, c) < sep) {
                    ok = false;
                    break;
                }
            if (ok) centers.push_back(u);
        }
    } else {
        // Fibonacci lattice candidates, spacing about delta/4, greedy with a hash grid
        double area = 4 * kPi;
        if (region) area = 2 * kPi * (1 - std::cos(region->radius));
        long M = std::max<long>(64, static_cast<long>(16.0 * area / (delta * delta)) + 1);
        long Mtot = region ? static_cast<long>(M * 4 * kPi / area) + 1 : M;
        const double golden = kPi * (3 - std::sqrt(5.0));
        const double cell = delta;
        std::unordered_map<CellKey, std::vector<int>, CellHash> hash;
        auto key = [&](const Vec3& v) {
            return CellKey{static_cast<long>(std::floor(v.x() / cell)), static_cast<long>(std::floor(v.y() / cell)),
                           static_cast<long>(std::floor(v.z() / cell))};
        };
        for (long i = 0; i < Mtot; ++i) {
            double z = 1 - 2 * (static_cast<double>(i) + 0.5) / static_cast<double>(Mtot);
            double r = std::sqrt(std::max(0.0, 1 - z * z));
            double ph = golden * static_cast<double>(i);
            Vec3 u(r * std::cos(ph), r * std::sin(ph), z);
            if (region && !region->contains_direction(u)) continue;
            CellKey k = key(u);
            bool ok = true;
            for (long da = -1; da <= 1 && ok; ++da)
                for (long db = -1; db <= 1 && ok; ++db)
                    for (long dc = -1; dc <= 1 && ok; ++dc) {
                        auto it = hash.find(CellKey{k.a + da, k.b + db, k.c + dc});
                        if (it == hash.end()) continue;
                        for (int j : it->second)
                            if (angle_between(u, centers[j]) < sep) {
                                ok = false;
                                break;
                            }
                    }
            if (!ok) continue;
            hash[k].push_back(static_cast<int>(centers.size()));
            centers.push_back(u);
        }
    }
    std::vector<Cap> out;
    out.reserve(centers.size());
    for (const auto& c : centers) out.emplace_back(n, c, delta / 2);
    return out;
}

std::vector<Plank> cone_planks(double delta, bool both_nappes) {
    if (!(delta > 0) || delta > 1.0 / 16 || !is_dyadic(delta))
        throw DomainError("cone_planks: delta must be dyadic in (0, 1/16]");
    const long K = std::lround(2 * kPi / std::sqrt(delta));
    const double dphi = 2 * kPi / static_cast<double>(K);
    std::vector<Plank> out;
    for (long j = 0; j < K; ++j) {
        double phi = dphi * static_cast<double>(j);
        Plank p;
        p.dim = 3;
        p.axes = cone_frame(phi);
        p.center = 0.75 * Vec3(std::cos(phi), std::sin(phi), 1.0);
        p.half = Vec3(9 * delta / 8, (1 + 2 * delta) * dphi / 2, 0.5);
        p.role = PlankRole::tau;
        p.delta = delta;
        out.push_back(p);
    }
    if (both_nappes) {
        std::size_t m = out.size();
        for (std::size_t i = 0; i < m; ++i) out.push_back(reflect_origin(out[i]));
    }
    return out;
}

Plank reflect_origin(const Plank& p) {
    Plank q = p;
    q.center = -p.center;
    return q;
}

std::vector<Plank> refine_planks(const Plank& tau, double gamma) {
    if (!is_dyadic(gamma) || gamma > 1) throw DomainError("refine_planks: gamma must be dyadic and <= 1");
    if (tau.delta > 0 && gamma < std::sqrt(tau.delta) * (1 - 1e-12))
        throw DomainError("refine_planks: gamma below delta^{1/2}");
    if (gamma == 1) return {tau};
    const long pieces = std::lround(1 / gamma);
    const int ax = tau.longest_axis();
    const double h = tau.half[ax] / static_cast<double>(pieces);
    std::vector<Plank> out;
    for (long i = 0; i < pieces; ++i) {
        Plank t = tau;
        t.half[ax] = h;
        double off = -tau.half[ax] + h * static_cast<double>(2 * i + 1);
        t.center = tau.center + off * tau.axes.col(ax);
        t.role = PlankRole::theta;
        out.push_back(t);
    }
    return out;
}

Plank dual_box(const Plank& b) {
    Plank d = b;
    d.center = Vec3::Zero();
    for (int i = 0; i < b.dim; ++i) d.half[i] = kDualFactor / b.half[i];
    d.role = PlankRole::theta_star;
    return d;
}

Plank theta_tau(const Plank& tau, double gamma) {
    Plank t = tau;
    t.center = Vec3::Zero();
    t.half = 4 * tau.half;
    t.half[2] = 4 * tau.half[2] * gamma;  // the refined length gamma * (long side)
    t.role = PlankRole::generic;
    return t;
}

Plank theta_tau_low(const Plank& tt, double gamma, double K, double C) {
    Plank l = tt;
    l.half[2] = std::min(tt.half[2], C * gamma / K);
    return l;
}

int OmegaCover::assign(const Plank& tau) const {
    double a = azimuth(tau.axes.col(2));
    int best = 0;
    double bd = 1e300;
    for (std::size_t i = 0; i < phis.size(); ++i) {
        double d = std::abs(std::remainder(a - phis[i], 2 * kPi));
        if (d < bd - 1e-12) {
            bd = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

OmegaCover omega_cover(double gamma, double K, double delta) {
    if (K < 4) throw DomainError("omega_cover: K must be >= 4");
    if (!is_dyadic(gamma) || gamma > 1 || gamma < std::sqrt(delta) * (1 - 1e-12))
        throw DomainError("omega_cover: gamma must be dyadic in [delta^{1/2}, 1]");
    OmegaCover oc{gamma, K, delta, {}, {}};
    const long M = std::max<long>(1, std::lround(2 * kPi * gamma / std::sqrt(delta)));
    const double amax = kPi / static_cast<double>(M);
    // The boxes to be covered: theta_tau high parts in their own frame, plus N_{delta/gamma}(Gamma_gamma).
    const long Kt = std::lround(2 * kPi / std::sqrt(delta));
    const double An = 4 * 9 * delta / 8;
    const double At = 4 * (1 + 2 * delta) * (kPi / static_cast<double>(Kt));
    const double c1 = std::min(2.0 * gamma / K, std::sqrt(2.0) * gamma / K);
    const double c2 = std::max(2.0 * gamma, std::sqrt(2.0) * gamma + delta / gamma);
    const double sa = std::sin(amax), ca = std::cos(amax);
    // Rotation by |alpha| <= amax about the vertical axis, triangle-inequality bounds.
    double hn = An + At * sa / std::sqrt(2.0) + c2 * (1 - ca) / 2;
    hn = std::max(hn, 2 * delta / gamma);
    double ht = An * sa / std::sqrt(2.0) + At + c2 * sa / std::sqrt(2.0);
    double clo = c1 * (1 + ca) / 2 - An * (1 - ca) / 2 - At * sa / std::sqrt(2.0) - delta / gamma;
    double chi = c2 + At * sa / std::sqrt(2.0) + delta / gamma;
    clo = std::max(clo, 0.0);
    for (long m = 0; m < M; ++m) {
        double psi = 2 * kPi * static_cast<double>(m) / static_cast<double>(M);
        Plank w;
        w.dim = 3;
        w.axes = cone_frame(psi);
        w.half = Vec3(hn * 1.001, ht * 1.001, (chi - clo) / 2 * 1.001);
        w.center = w.axes.col(2) * (chi + clo) / 2;
        w.role = PlankRole::omega;
        w.delta = delta;
        oc.omegas.push_back(w);
        oc.phis.push_back(psi);
    }
    return oc;
}

OmegaCover omega_s_cover(double gamma, double K, double s) {
    OmegaCover oc = omega_cover(gamma, K, s * s * gamma * gamma);
    for (auto& w : oc.omegas) w.role = PlankRole::omega_s;
    return oc;
}

Tiling u_tiling(const Plank& omega_s, double R, double s, double gamma, double box_side, int dim) {
    if (!(R >= 1)) throw DomainError("u_tiling: R must be >= 1");
    double smin = dyadic_floor(1 / std::sqrt(R));
    if (!is_dyadic(s) || s > 1 || s < smin * (1 - 1e-12)) throw DomainError("u_tiling: s outside [R^{-1/2}, 1]");
    Tiling T;
    T.base.dim = dim;
    T.base.axes = omega_s.axes;
    T.base.center = Vec3::Zero();
    T.base.role = PlankRole::U;
    T.base.half = Vec3(R / gamma, R * s / gamma, R * s * s / gamma) / 2;
    if (dim == 2) T.base.half[2] = 1;
    for (int i = 0; i < 3; ++i) T.lattice[i] = 2 * T.base.half[i] * T.base.axes.col(i);
    // index range spanning [0, box_side)^dim
    std::array<long, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int i = 0; i < dim; ++i) {
        lo[i] = std::numeric_limits<long>::max();
        hi[i] = std::numeric_limits<long>::min();
    }
    for (int m = 0; m < (1 << dim); ++m) {
        Vec3 x = Vec3::Zero();
        for (int i = 0; i < dim; ++i) x[i] = (m >> i & 1) ? box_side : 0.0;
        auto idx = T.index_of(x);
        for (int i = 0; i < dim; ++i) {
            lo[i] = std::min(lo[i], idx[i]);
            hi[i] = std::max(hi[i], idx[i]);
        }
    }
    T.index_min = lo;
    T.index_max = hi;
    return T;
}

MinkowskiResult minkowski_disjointness(const Cap& c1, const Cap& c2, const std::array<int, 4>& k, int m) {
    MinkowskiResult r;
    if (angle_between(c1.center, c2.center) < 1e-12) return r;  // j1 == j2
    int g1 = k[0] - k[2], g2 = k[3] - k[1];
    if (g1 == 0 || g2 == 0) return r;  // A/B cases: no scale difference to exploit
    if (std::abs(g1) < m || std::abs(g2) < m) return r;
    r.applicable = true;
    // tau_{j,K} - tau_{j,k} (K > k) sits in the cone around +c of half-angle radius + asin(2^{4-gap}).
    auto spread = [](int gap) { return std::asin(std::min(1.0, std::ldexp(1.0, 4 - std::abs(gap)))); };
    Vec3 d1 = (g1 > 0 ? 1.0 : -1.0) * c1.center;
    Vec3 d2 = (g2 > 0 ? 1.0 : -1.0) * c2.center;
    r.separation = angle_between(d1, d2);
    r.needed = c1.radius + c2.radius + spread(g1) + spread(g2);
    r.disjoint = r.separation > r.needed;
    return r;
}

long minkowski_sample_hits(const Cap& c1, const Cap& c2, const std::array<int, 4>& k, Rng& rng, int outer,
                           int inner) {
    long hits = 0;
    for (int i = 0; i < outer; ++i) {
        Vec3 x = sample_conic_tube(c1, k[0], rng) + sample_conic_tube(c2, k[1], rng);
        for (int j = 0; j < inner; ++j) {
            Vec3 a = sample_conic_tube(c1, k[2], rng);
            if (in_conic_tube(c2, k[3], x - a)) {
                ++hits;
                break;
            }
        }
    }
    return hits;
}

OneDimResult check_one_dimensional(const std::vector<Polyhedron>& polys, double tol, int max_circles) {
    std::vector<Vec3> N;
    for (const auto& p : polys)
        for (const auto& n : p.normals) N.push_back(n.normalized());
    OneDimResult res;
    res.circle_of_normal.assign(N.size(), -1);
    std::vector<int> all(N.size());
    std::iota(all.begin(), all.end(), 0);

    std::vector<Vec3> chosen;
    std::function<bool(const std::vector<int>&, int)> search = [&](const std::vector<int>& U, int depth) -> bool {
        if (U.empty()) return true;
        if (depth == 0) return false;
        const Vec3& u0 = N[U[0]];
        // candidate poles through u0 and a spread of partners
        std::vector<std::pair<long, Vec3>> cand;
        std::size_t stride = std::max<std::size_t>(1, U.size() / 256);
        for (std::size_t i = 1; i < U.size(); i += stride) {
            Vec3 pole = u0.cross(N[U[i]]);
            if (pole.norm() < 1e-9) continue;
            pole.normalize();
            long cnt = 0;
            for (int j : U)
                if (std::abs(N[j].dot(pole)) <= tol) ++cnt;
            cand.emplace_back(cnt, pole);
        }
        if (cand.empty()) {  // everything parallel to u0
            chosen.push_back(any_orthogonal(u0));
            return true;
        }
        std::stable_sort(cand.begin(), cand.end(), [](auto& a, auto& b) { return a.first > b.first; });
        // prune: remaining circles cannot cover more than depth * best
        if (static_cast<long>(U.size()) > static_cast<long>(depth) * cand[0].first) return false;
        std::vector<Vec3> tried;
        int attempts = 0;
        for (const auto& [cnt, pole] : cand) {
            if (attempts >= 8) break;
            bool dup = false;
            for (const auto& t : tried)
                if (std::abs(std::abs(t.dot(pole)) - 1) < 1e-9) dup = true;
            if (dup) continue;
            tried.push_back(pole);
            ++attempts;
            std::vector<int> rest;
            for (int j : U)
                if (std::abs(N[j].dot(pole)) > tol) rest.push_back(j);
            chosen.push_back(pole);
            if (search(rest, depth - 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    res.one_dimensional = search(all, max_circles);
    if (res.one_dimensional) {
        res.poles = chosen;
        for (std::size_t i = 0; i < N.size(); ++i)
            for (std::size_t c = 0; c < chosen.size(); ++c)
                if (std::abs(N[i].dot(chosen[c])) <= tol) {
                    res.circle_of_normal[i] = static_cast<int>(c);
                    break;
                }
    }
    return res;
}

std::vector<Polyhedron> planar_sectors(int count, int dim) {
    if (count < 3) throw DomainError("planar_sectors: need at least 3 sectors");
    std::vector<Polyhedron> out;
    const double w = 2 * kPi / count;
    for (int j = 0; j < count; ++j) {
        double a0 = w * j, a1 = w * (j + 1);
        Polyhedron P;
        P.dim = dim;
        P.normals = {Vec3(std::sin(a0), -std::cos(a0), 0), Vec3(-std::sin(a1), std::cos(a1), 0)};
        P.offsets = {0, 0};
        double am = (a0 + a1) / 2;
        P.anchor = Vec3(std::cos(am), std::sin(am), 0);
        P.delta = 1.0 / count;
        out.push_back(P);
    }
    return out;
}

std::vector<Polyhedron> pyramid_family(int N) {
    if (N < 1) throw DomainError("pyramid_family: N must be positive");
    std::vector<Polyhedron> out;
    for (int b1 = -N; b1 < N; ++b1)
        for (int b2 = -N; b2 < N; ++b2) {
            Polyhedron P;
            P.dim = 3;
            double l1 = static_cast<double>(b1) / N, u1 = static_cast<double>(b1 + 1) / N;
            double l2 = static_cast<double>(b2) / N, u2 = static_cast<double>(b2 + 1) / N;
            P.normals = {-Vec3(1, 0, l1).normalized(), Vec3(1, 0, u1).normalized(), -Vec3(0, 1, l2).normalized(),
                         Vec3(0, 1, u2).normalized()};
            P.offsets = {0, 0, 0, 0};
            P.anchor = Vec3((l1 + u1) / 2, (l2 + u2) / 2, -1).normalized();
            P.delta = 1.0 / N;
            out.push_back(P);
        }
    return out;
}

Polyhedron attached_cube(const Vec3& xi, const Vec3& m, double delta) {
    Vec3 x = xi.normalized();
    Vec3 mm = (m - m.dot(x) * x).normalized();
    Vec3 e = x.cross(mm);
    double c = std::cos(delta / 2), s = std::sin(delta / 2);
    Polyhedron P;
    P.dim = 3;
    P.normals = {mm * c - x * s, -mm * c - x * s, e * c - x * s, -e * c - x * s};
    P.offsets = {0, 0, 0, 0};
    P.anchor = x;
    P.delta = delta;
    return P;
}

bool boxes_intersect(const Plank& a, const Plank& b) {
    const int d = std::max(a.dim, b.dim);
    std::vector<Vec3> axes;
    for (int i = 0; i < d; ++i) {
        axes.push_back(a.axes.col(i));
        axes.push_back(b.axes.col(i));
    }
    if (d == 3)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Vec3 c = a.axes.col(i).cross(b.axes.col(j));
                if (c.norm() > 1e-9) axes.push_back(c.normalized());
            }
    Vec3 t = b.center - a.center;
    if (d == 2) t.z() = 0;
    for (const auto& L : axes) {
        double ra = 0, rb = 0;
        for (int i = 0; i < d; ++i) {
            ra += a.half[i] * std::abs(a.axes.col(i).dot(L));
            rb += b.half[i] * std::abs(b.axes.col(i).dot(L));
        }
        if (std::abs(t.dot(L)) > ra + rb) return false;
    }
    return true;
}

bool box_meets_ball(const Plank& b, const Vec3& center, double radius) {
    Vec3 l = b.local(center);
    double d2 = 0;
    for (int i = 0; i < b.dim; ++i) {
        double e = std::max(0.0, std::abs(l[i]) - b.half[i]);
        d2 += e * e;
    }
    return d2 <= radius * radius;
}

void write_geometry(std::ostream& os, const std::vector<Plank>& planks) {
    os << "# plank role dim delta cx cy cz e1x e1y e1z e2x e2y e2z e3x e3y e3z h1 h2 h3\n";
    for (const auto& p : planks) {
        os << "plank " << role_name(p.role) << ' ' << p.dim << ' ' << fmt_num(p.delta);
        for (int i = 0; i < 3; ++i) os << ' ' << fmt_num(p.center[i]);
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < 3; ++i) os << ' ' << fmt_num(p.axes(i, c));
        for (int i = 0; i < 3; ++i) os << ' ' << fmt_num(p.half[i]);
        os << '\n';
    }
}

void write_caps(std::ostream& os, const std::vector<Cap>& caps) {
    os << "# cap dim cx cy cz radius\n";
    for (const auto& c : caps) {
        os << "cap " << c.dim;
        for (int i = 0; i < 3; ++i) os << ' ' << fmt_num(c.center[i]);
        os << ' ' << fmt_num(c.radius) << '\n';
    }
}

std::vector<Plank> read_planks(std::istream& is) {
    std::vector<Plank> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag, role;
        ss >> tag;
        if (tag != "plank") continue;
        Plank p;
        ss >> role >> p.dim >> p.delta;
        p.role = role_from_name(role);
        for (int i = 0; i < 3; ++i) ss >> p.center[i];
        for (int c = 0; c < 3; ++c)
            for (int i = 0; i < 3; ++i) ss >> p.axes(i, c);
        for (int i = 0; i < 3; ++i) ss >> p.half[i];
        if (!ss) throw IoError("malformed plank line: " + line);
        out.push_back(p);
    }
    return out;
}

}  // namespace conesq
