#include "conesq/packets.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace conesq {

namespace {

// Per-axis |xi_i| bound of a plank scaled by f about its center.
void frequency_aabb(const Plank& b, double f, Vec3& lo, Vec3& hi) {
    lo.setZero();
    hi.setZero();
    for (int i = 0; i < b.dim; ++i) {
        double r = 0;
        for (int j = 0; j < b.dim; ++j) r += std::abs(b.axes(i, j)) * b.half[j] * f;
        lo[i] = b.center[i] - r;
        hi[i] = b.center[i] + r;
    }
}

double box_volume_dim(const Plank& b) {
    double v = 1;
    for (int i = 0; i < b.dim; ++i) v *= 2 * b.half[i];
    return v;
}

// Visits grid frequencies inside the bounding box of the packet support.
template <class Fn>
void for_support(const GridSpec& g, const Plank& box, double outer, Fn&& fn) {
    Vec3 lo, hi;
    frequency_aabb(box, outer, lo, hi);
    const long half = g.N / 2;
    long a[3] = {0, 0, 0}, z[3] = {0, 0, 0};
    for (int i = 0; i < g.dim; ++i) {
        a[i] = std::max(-half, static_cast<long>(std::ceil(lo[i] * g.L - 1e-9)));
        z[i] = std::min(half - 1, static_cast<long>(std::floor(hi[i] * g.L + 1e-9)));
        if (a[i] > z[i]) return;
    }
    long k[3] = {0, 0, 0};
    for (k[0] = a[0]; k[0] <= z[0]; ++k[0])
        for (k[1] = a[1]; k[1] <= z[1]; ++k[1])
            for (k[2] = a[2]; k[2] <= z[2]; ++k[2]) {
                Vec3 xi(k[0] / g.L, k[1] / g.L, g.dim == 3 ? k[2] / g.L : 0.0);
                fn(g.index_of_frequency(k), xi);
            }
}

double packet_weight(const WavePacketSpec& s, const BumpProfile& prof, const Vec3& xi) {
    Vec3 l = s.box.local(xi);
    if (!s.smooth) {
        for (int i = 0; i < s.box.dim; ++i)
            if (std::abs(l[i]) > s.box.half[i] * (1 + 1e-12)) return 0;
        return 1;
    }
    double v = 1;
    for (int i = 0; i < s.box.dim && v != 0; ++i) v *= prof(l[i] / s.box.half[i]);
    return v;
}

cplx carrier(const Vec3& x0, const Vec3& xi) {
    double ph = -2 * kPi * x0.dot(xi);
    return {std::cos(ph), std::sin(ph)};
}

Plank make_box(int dim, const Vec3& center, const Mat3& axes, const Vec3& half, PlankRole role, double delta) {
    Plank p;
    p.dim = dim;
    p.center = center;
    p.axes = axes;
    p.half = half;
    if (dim == 2) {
        p.center[2] = 0;
        p.half[2] = 1;
    }
    p.role = role;
    p.delta = delta;
    return p;
}

// 2D frame with first column u; 3D frame with third column u.
Mat3 frame_along(int dim, const Vec3& u) {
    if (dim == 3) return frame_from_axis(u);
    Mat3 m = Mat3::Identity();
    m.col(0) = Vec3(u.x(), u.y(), 0);
    m.col(1) = Vec3(-u.y(), u.x(), 0);
    return m;
}
int long_axis(int dim) { return dim == 3 ? 2 : 0; }

std::vector<Vec3> direction_set(int dim, double sep, Rng& rng, bool rotate) {
    std::vector<Vec3> out;
    if (dim == 2) {
        long M = static_cast<long>(std::floor(2 * kPi / sep));
        double a0 = rotate ? std::uniform_real_distribution<double>(0, 2 * kPi / M)(rng) : 0.0;
        for (long j = 0; j < M; ++j) {
            double a = a0 + 2 * kPi * j / M;
            out.emplace_back(std::cos(a), std::sin(a), 0);
        }
        return out;
    }
    Mat3 R = Mat3::Identity();
    if (rotate) {
        Eigen::Quaterniond q(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng),
                             std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
        R = q.normalized().toRotationMatrix();
    }
    for (const auto& c : separated_caps(3, sep)) out.push_back(R * c.center);
    return out;
}

}  // namespace

void add_packet(Field& fhat, const WavePacketSpec& s, const BumpProfile& prof) {
    if (fhat.side != Side::frequency) throw ContractError("add_packet expects a frequency-side field");
    s.box.validate();
    const double vol = box_volume_dim(s.box);
    const double outer = s.smooth ? prof.outer() : 1.0;
    for_support(fhat.spec, s.box, outer, [&](std::size_t idx, const Vec3& xi) {
        double w = packet_weight(s, prof, xi);
        if (w != 0) fhat.values[idx] += s.amplitude * w / vol * carrier(s.position, xi);
    });
}

Field synthesize_packet(const WavePacketSpec& spec, const GridSpec& grid, const BumpProfile& prof) {
    Vec3 lo, hi;
    frequency_aabb(spec.box, spec.smooth ? prof.outer() : 1.0, lo, hi);
    const double nyq = grid.nyquist();
    for (int i = 0; i < grid.dim; ++i)
        if (lo[i] < -nyq || hi[i] >= nyq)
            throw BandwidthError("packet support exceeds the frequency box (nyquist " + fmt_num(nyq) + ")");
    Field fhat(grid, Side::frequency, "packet");
    add_packet(fhat, spec, prof);
    return inverse_transform(fhat);
}

DilationResult dilation_trick(const Plank& theta_prime, int axis) {
    if (axis < 0 || axis >= theta_prime.dim) throw DomainError("dilation_trick: axis out of range");
    DilationResult r;
    r.theta = theta_prime;
    r.theta.half[axis] = theta_prime.half[axis] / 2;
    r.theta.center = theta_prime.center + theta_prime.axes.col(axis) * (theta_prime.half[axis] / 2);
    Plank a = dual_box(r.theta);
    Plank b = dual_box(theta_prime).dilated_axis(axis, 2);
    r.dual_relation = (a.half - b.half).cwiseAbs().maxCoeff() <= 1e-12 * b.half.cwiseAbs().maxCoeff() &&
                      (a.axes - b.axes).cwiseAbs().maxCoeff() <= 1e-12;
    return r;
}

const char* kind_name(ExtremizerKind k) {
    switch (k) {
        case ExtremizerKind::bochner_riesz: return "bochner_riesz";
        case ExtremizerKind::sharp_cutoff_A1: return "sharp_cutoff_A1";
        case ExtremizerKind::cone_L8_A2: return "cone_L8_A2";
    }
    return "?";
}

ExtremizerKind kind_from_name(const std::string& s) {
    if (s == "bochner_riesz") return ExtremizerKind::bochner_riesz;
    if (s == "sharp_cutoff_A1") return ExtremizerKind::sharp_cutoff_A1;
    if (s == "cone_L8_A2") return ExtremizerKind::cone_L8_A2;
    throw DomainError("unknown extremizer kind: " + s);
}

void ExtremizerConfig::validate() const {
    if (!(delta > 0) || delta >= 1 || !is_dyadic(delta)) throw DomainError("extremizer delta must be dyadic in (0,1)");
    if (!(p >= 2)) throw DomainError("extremizer p must be >= 2");
    if (n != 2 && n != 3) throw DomainError("extremizer dimension must be 2 or 3");
    if (kind == ExtremizerKind::cone_L8_A2 && n != 3) throw DomainError("cone extremizer requires n = 3");
    if (kind == ExtremizerKind::cone_L8_A2 && delta > 1.0 / 16) throw DomainError("cone extremizer requires delta <= 1/16");
    if (dilation < 0 || thinning < 0) throw DomainError("dilation and thinning must be nonnegative");
    profile.validate();
}

double expected_exponent(ExtremizerKind kind, int n, double p) {
    if (kind == ExtremizerKind::cone_L8_A2) return 0.25 - 2 / p;
    return (n - 1) / 2.0 - n / p;
}

Extremizer build_extremizer(const ExtremizerConfig& cfg) {
    cfg.validate();
    Extremizer ex;
    ex.cfg = cfg;
    ex.expected_exponent = expected_exponent(cfg.kind, cfg.n, cfg.p);
    const int n = cfg.n;
    const double d = cfg.delta;
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> U01(0, 1);
    auto phase = [&]() -> cplx {
        if (cfg.phase_mode == PhaseMode::aligned) return 1.0;
        double a = 2 * kPi * U01(rng);
        return {std::cos(a), std::sin(a)};
    };
    ex.tubes.dim = ex.pieces.dim = n;

    switch (cfg.kind) {
        case ExtremizerKind::bochner_riesz: {
            // theta: R^{-1/2} (tangential) x R^{-1} (normal) caps of the unit sphere's 1/R-neighbourhood.
            const double R = 1 / d;
            const double D = cfg.dilation > 0 ? cfg.dilation : 8;
            const double k = cfg.thinning > 0 ? cfg.thinning : 4;
            ex.dilation = D;
            ex.thinning = k;
            ex.coherent = true;
            if (R < 64) throw DomainError("bochner_riesz needs R = 1/delta >= 64");
            auto dirs = direction_set(n, k / std::sqrt(R), rng, cfg.random_rotation);
            for (const auto& u : dirs) {
                Mat3 fr = frame_along(n, u);
                Vec3 half = Vec3::Constant(0.5 / std::sqrt(R));
                half[long_axis(n)] = 0.5 / R;
                Plank theta = make_box(n, u, fr, half, PlankRole::theta, d);
                Plank theta_p = theta.dilated_axis(long_axis(n), D);
                Plank T = dual_box(theta_p).recentered(u * (3 * R / 8));
                T.role = PlankRole::generic;
                cplx a = phase();
                ex.packets.push_back({theta_p, T.center, a, true});
                ex.tubes.add(T, a);
                // |theta| / |theta'| = 1/D: the cut keeps that share of the packet's frequency mass.
                ex.pieces.add(T.dilated_axis(long_axis(n), D), a / D);
            }
            ex.pieces.focal = Ball{Vec3::Zero(), 1.0};
            break;
        }
        case ExtremizerKind::sharp_cutoff_A1: {
            // Slabs delta x ... x delta x delta^2 straddling faces of delta-cubes; the sharp cut halves each slab.
            const double D = cfg.dilation > 0 ? cfg.dilation : 2;
            const double k = cfg.thinning > 0 ? cfg.thinning : 5;
            ex.dilation = D;
            ex.thinning = k;
            if (k * d > 0.5) throw DomainError("sharp_cutoff_A1: thinning * delta must be <= 1/2");
            auto normals = direction_set(n, k * d, rng, cfg.random_rotation);
            // Tube centres: far enough out that k*delta-separated directions keep the tubes disjoint,
            // close enough that the D-dilation still reaches the focal ball.
            const double len = 1 / (d * d), wid = 1 / d;
            const double dist = len * (0.5 + 1.5 / k);
            const double rf = wid / 4;
            if (dist + rf > D * len / 2) throw DomainError("sharp_cutoff_A1: dilation too small to reach the focus");
            // Face centres w_j perpendicular to the normals, greedily spread so the cubes are disjoint.
            const double cell = 2 * d;
            std::unordered_map<long long, std::vector<Vec3>> used;
            auto hkey = [&](const Vec3& v, long da, long db, long dc) {
                long a = static_cast<long>(std::floor(v.x() / cell)) + da;
                long b = static_cast<long>(std::floor(v.y() / cell)) + db;
                long c = static_cast<long>(std::floor(v.z() / cell)) + dc;
                return (a * 1000003LL + b) * 1000003LL + c;
            };
            for (const auto& nu : normals) {
                Vec3 w;
                Vec3 anchor;
                if (n == 2) {
                    w = Vec3(-nu.y(), nu.x(), 0);
                    anchor = w;
                } else {
                    Vec3 e1 = any_orthogonal(nu), e2 = nu.cross(e1);
                    double a0 = 2 * kPi * U01(rng);
                    bool found = false;
                    double c = std::cos(d / 2), s = std::sin(d / 2);
                    for (int t = 0; t < 256 && !found; ++t) {
                        double a = a0 + 2 * kPi * t / 256;
                        Vec3 cand = std::cos(a) * e1 + std::sin(a) * e2;
                        Vec3 anc = cand * c - nu * s;
                        bool ok = true;
                        for (long da = -1; da <= 1 && ok; ++da)
                            for (long db = -1; db <= 1 && ok; ++db)
                                for (long dc = -1; dc <= 1 && ok; ++dc) {
                                    auto it = used.find(hkey(anc, da, db, dc));
                                    if (it == used.end()) continue;
                                    for (const auto& q : it->second)
                                        if (angle_between(q, anc) < 1.5 * d) {
                                            ok = false;
                                            break;
                                        }
                                }
                        if (ok) {
                            w = cand;
                            anchor = anc;
                            found = true;
                        }
                    }
                    if (!found) continue;  // no room on this great circle; the family stays delta-dense
                    used[hkey(anchor, 0, 0, 0)].push_back(anchor);
                    ex.polys.push_back(attached_cube(anchor, w * s + nu * c, d));
                }
                Mat3 fr = frame_along(n, nu);
                Vec3 half = Vec3::Constant(d / 2);
                half[long_axis(n)] = d * d / 2;
                Plank slab = make_box(n, w, fr, half, PlankRole::R, d);
                Plank T = dual_box(slab).recentered(nu * dist);
                T.role = PlankRole::generic;
                cplx a = phase();
                ex.packets.push_back({slab, T.center, a, true});
                ex.tubes.add(T, a);
                ex.pieces.add(T.dilated_axis(long_axis(n), D), a / D);
            }
            if (n == 2) {
                // Sectors of width delta whose first face has normal nu.
                for (const auto& nu : normals) {
                    double a = std::atan2(nu.y(), nu.x()) + kPi / 2;
                    Polyhedron P;
                    P.dim = 2;
                    P.normals = {Vec3(std::sin(a), -std::cos(a), 0), Vec3(-std::sin(a + d), std::cos(a + d), 0)};
                    P.offsets = {0, 0};
                    P.anchor = Vec3(std::cos(a + d / 2), std::sin(a + d / 2), 0);
                    P.delta = d;
                    ex.polys.push_back(P);
                }
            }
            ex.pieces.focal = Ball{Vec3::Zero(), rf};
            break;
        }
        case ExtremizerKind::cone_L8_A2: {
            const double D = cfg.dilation > 0 ? cfg.dilation : 8;
            ex.dilation = D;
            ex.thinning = D;
            const std::vector<Plank> cover = cone_planks(d);
            const long K = static_cast<long>(cover.size());
            const long G = static_cast<long>(std::floor(K / D));
            if (G < 2) throw DomainError("cone_L8_A2: fewer than two planks survive the dilation");
            const double dphi = 2 * kPi / static_cast<double>(K);
            const double phi0 = cfg.random_rotation ? dphi * U01(rng) : 0.0;
            // Radius of the hyperboloid x1^2 + x2^2 - x3^2 = rho^2 carrying the planks.
            const double rho = 0.25 / std::sqrt(d);
            for (long g = 0; g < G; ++g) {
                double phi = phi0 + dphi * static_cast<double>(g) * std::floor(D);
                Plank tau = cover[0];
                tau.axes = cone_frame(phi);
                tau.center = 0.75 * Vec3(std::cos(phi), std::sin(phi), 1.0);
                Plank tau_p = tau.dilated_axis(1, D);
                Vec3 t = tau.axes.col(1);
                Plank P = dual_box(tau_p).recentered(-rho * t);
                P.role = PlankRole::generic;
                cplx a = phase();
                ex.packets.push_back({tau_p, P.center, a, true});
                ex.frequency_planks.push_back(tau);
                ex.tubes.add(P, a);
                ex.pieces.add(P.dilated_axis(1, D), a / D);
            }
            ex.pieces.focal = Ball{Vec3::Zero(), 0.25};
            break;
        }
    }
    ex.tubes.focal = ex.pieces.focal;
    return ex;
}

void check_extremizer_grid(const Extremizer& ex, const GridSpec& grid) {
    if (grid.dim != ex.cfg.n) throw SizingError("grid dimension differs from the extremizer's");
    const double outer = ex.cfg.profile.outer();
    const double nyq = grid.nyquist();
    for (const auto& pk : ex.packets) {
        Vec3 lo, hi;
        frequency_aabb(pk.box, pk.smooth ? outer : 1.0, lo, hi);
        for (int i = 0; i < grid.dim; ++i)
            if (lo[i] < -nyq || hi[i] >= nyq)
                throw SizingError("packet support exceeds nyquist " + fmt_num(nyq) + "; increase N/L");
        double thin = 2 * pk.box.half.head(grid.dim).minCoeff();
        if (grid.freq_spacing() > thin / 4)
            throw SizingError("frequency spacing " + fmt_num(grid.freq_spacing()) + " does not resolve side " +
                              fmt_num(thin) + "; increase L");
    }
    for (const auto* fam : {&ex.tubes, &ex.pieces})
        for (const auto& b : fam->boxes)
            for (const auto& v : b.vertices())
                for (int i = 0; i < grid.dim; ++i)
                    if (std::abs(v[i]) >= grid.L / 2)
                        throw SizingError("physical boxes do not fit in the period " + fmt_num(grid.L));
}

Field synthesize_extremizer(const Extremizer& ex, const GridSpec& grid) {
    check_extremizer_grid(ex, grid);
    Field fhat(grid, Side::frequency, std::string("extremizer_") + kind_name(ex.cfg.kind));
    const double fv = grid.cell_volume_frequency();
    for (const auto& pk : ex.packets) {
        WavePacketSpec s = pk;
        if (ex.cfg.phase_mode == PhaseMode::aligned) {
            // Value at the focus (origin) is the frequency-side integral; rotate it onto the positive axis.
            cplx at0 = 0;
            const double vol = box_volume_dim(s.box);
            for_support(grid, s.box, s.smooth ? ex.cfg.profile.outer() : 1.0, [&](std::size_t, const Vec3& xi) {
                at0 += packet_weight(s, ex.cfg.profile, xi) / vol * carrier(s.position, xi) * fv;
            });
            s.amplitude = std::abs(at0) > 0 ? std::conj(at0) / std::abs(at0) : 1.0;
        }
        add_packet(fhat, s, ex.cfg.profile);
    }
    return inverse_transform(fhat);
}

}  // namespace conesq
