#include "conesq/operators.hpp"

#include <cmath>
#include <map>

namespace conesq {

namespace {

Field to_frequency(const Field& f) { return f.side == Side::frequency ? f : forward_transform(f); }

double integrate(const GridSpec& spec, const RBuf& a) {
    long double s = 0;
    for (double v : a) s += v;
    return static_cast<double>(s) * spec.cell_volume_physical();
}

bool same_shape(const Plank& a, const Plank& b) {
    return (a.axes - b.axes).norm() < 1e-12 && (a.half - b.half).norm() < 1e-12 * (1 + a.half.norm());
}

}  // namespace

ProjectionFamily cap_family(const std::vector<Cap>& caps, const BumpProfile& prof,
                            const std::optional<Multiplier>& radial) {
    ProjectionFamily fam;
    fam.kind = FamilyKind::smooth_cap;
    fam.caps = caps;
    fam.label = "caps";
    for (const auto& c : caps) {
        Multiplier m = cap_cutoff(c, prof);
        fam.pieces.push_back(radial ? product(m, *radial, "T_j") : m);
    }
    return fam;
}

ProjectionFamily sharp_family(const std::vector<Polyhedron>& polys) {
    ProjectionFamily fam;
    fam.kind = FamilyKind::sharp_polyhedron;
    fam.polys = polys;
    fam.label = "sharp";
    for (const auto& p : polys) fam.pieces.push_back(polyhedron_indicator(p));
    return fam;
}

ProjectionFamily plank_family(const std::vector<Plank>& planks, const BumpProfile& prof) {
    ProjectionFamily fam;
    fam.kind = FamilyKind::plank;
    fam.planks = planks;
    fam.label = "planks";
    for (const auto& p : planks) fam.pieces.push_back(adapted_bump(p, prof));
    return fam;
}

ProjectionFamily annulus_family(int kmin, int kmax, const BumpProfile& prof) {
    ProjectionFamily fam;
    fam.kind = FamilyKind::annulus;
    fam.pieces = annulus_partition(kmin, kmax, prof);
    fam.label = "annuli";
    return fam;
}

std::vector<int> sharp_labels(const GridSpec& spec, const std::vector<Polyhedron>& polys) {
    std::vector<int> lab(spec.size(), -1);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Vec3 xi = spec.frequency(i);
        for (std::size_t j = 0; j < polys.size(); ++j)
            if (polys[j].contains(xi)) {
                lab[i] = static_cast<int>(j);
                break;
            }
    }
    return lab;
}

namespace {
// Annulus pieces near the corner of the frequency box are clipped by the grid, which is what the
// Littlewood-Paley split wants, so they bypass the bandwidth check.
Field multiply(const Multiplier& m, const Field& fhat) {
    Field mult = m.sample(fhat.spec);
    for (std::size_t i = 0; i < fhat.size(); ++i) mult.values[i] *= fhat.values[i];
    mult.role = m.label;
    return inverse_transform(mult);
}
}  // namespace

Field project(const Multiplier& m, const Field& fhat) {
    if (fhat.side != Side::frequency) throw ContractError("project: expects a frequency-side field");
    m.check_bandwidth(fhat.spec);
    Field mult = m.sample(fhat.spec);
    for (std::size_t i = 0; i < fhat.size(); ++i) mult.values[i] *= fhat.values[i];
    mult.role = m.label;
    return inverse_transform(mult);
}

void for_each_piece(const ProjectionFamily& fam, const Field& f,
                    const std::function<void(std::size_t, const Field&)>& fn) {
    Field fh = to_frequency(f);
    if (fam.kind == FamilyKind::sharp_polyhedron) {
        auto lab = sharp_labels(fh.spec, fam.polys);
        for (std::size_t j = 0; j < fam.polys.size(); ++j) {
            Field piece(fh.spec, Side::frequency, "S_" + std::to_string(j));
            for (std::size_t i = 0; i < fh.size(); ++i)
                if (lab[i] == static_cast<int>(j)) piece.values[i] = fh.values[i];
            fn(j, inverse_transform(piece));
        }
        return;
    }
    for (std::size_t j = 0; j < fam.pieces.size(); ++j)
        fn(j, fam.kind == FamilyKind::annulus ? multiply(fam.pieces[j], fh) : project(fam.pieces[j], fh));
}

std::vector<Field> apply_projection(const ProjectionFamily& fam, const Field& f) {
    std::vector<Field> out(fam.size());
    for_each_piece(fam, f, [&](std::size_t j, const Field& p) { out[j] = p; });
    return out;
}

RBuf square_sum(const ProjectionFamily& fam, const Field& f) {
    RBuf acc(f.spec.size(), 0.0);
    for_each_piece(fam, f, [&](std::size_t, const Field& p) {
        for (std::size_t i = 0; i < p.size(); ++i) acc[i] += std::norm(p.values[i]);
    });
    return acc;
}

std::pair<int, int> lp_range(const GridSpec& spec) {
    int kmin = static_cast<int>(std::floor(std::log2(spec.freq_spacing())));
    int kmax = static_cast<int>(std::ceil(std::log2(spec.nyquist() * std::sqrt(double(spec.dim)))));
    return {kmin, kmax};
}

std::vector<std::pair<int, Field>> littlewood_paley_split(const Field& f, int class_offset, int m) {
    if (m < 1 || class_offset < 0 || class_offset >= m) throw DomainError("littlewood_paley_split: bad class");
    Field fh = to_frequency(f);
    long k0[3] = {0, 0, 0};
    double tot = 0;
    for (const auto& v : fh.values) tot += std::norm(v);
    if (std::norm(fh.values[fh.spec.index_of_frequency(k0)]) > 1e-24 * (tot + 1e-300))
        throw ContractError("littlewood_paley_split: zero frequency must vanish");
    auto [kmin, kmax] = lp_range(fh.spec);
    std::vector<std::pair<int, Field>> out;
    for (int k = kmin; k <= kmax; ++k) {
        if (((k % m) + m) % m != class_offset) continue;
        out.emplace_back(k, multiply(annulus_piece(k), fh));
    }
    return out;
}

RBuf convolve(const GridSpec& spec, const RBuf& a, const RBuf& kernel) {
    CBuf A(a.begin(), a.end()), K(kernel.begin(), kernel.end());
    forward_inplace(spec, A.data());
    forward_inplace(spec, K.data());
    for (std::size_t i = 0; i < A.size(); ++i) A[i] *= K[i];
    inverse_inplace(spec, A.data());
    RBuf out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = A[i].real();
    return out;
}

RBuf normalized_kernel(const GridSpec& spec, const Plank& box, double M) {
    Plank b = box.recentered(Vec3::Zero());
    DecayingIndicator chi{b, M};
    RBuf k = chi.sample(spec, true);
    double mass = integrate(spec, k);
    for (double& v : k) v /= mass;
    return k;
}

CheckResult weighted_l2_check(const ProjectionFamily& fam, const Field& f, const RBuf& g, double M) {
    if (fam.kind != FamilyKind::plank || fam.planks.empty()) throw ContractError("weighted_l2_check: needs planks");
    for (const auto& p : fam.planks)
        if (!same_shape(p, fam.planks[0])) throw ContractError("weighted_l2_check: planks are not congruent");
    const GridSpec& spec = f.spec;
    if (M <= 0) M = spec.dim + 2;
    RBuf sq = square_sum(fam, f);
    CheckResult r;
    r.name = "weighted_l2";
    RBuf t(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) t[i] = sq[i] * g[i];
    r.lhs = integrate(spec, t);
    RBuf Kg = convolve(spec, g, normalized_kernel(spec, dual_box(fam.planks[0]), M));
    Field fp = f.side == Side::physical ? f : inverse_transform(f);
    for (std::size_t i = 0; i < sq.size(); ++i) t[i] = std::norm(fp.values[i]) * Kg[i];
    r.rhs = integrate(spec, t);
    r.ratio = r.lhs / r.rhs;
    return r;
}

CheckResult plank_lp_check(const ProjectionFamily& fam, const Field& f, double p, const std::optional<Plank>& U,
                           double M) {
    if (!(p >= 2)) throw DomainError("plank_lp_check: p must be >= 2");
    const GridSpec& spec = f.spec;
    if (M <= 0) M = spec.dim + 2;
    RBuf w(spec.size(), 1.0);
    if (U) {
        Plank u0 = U->recentered(Vec3::Zero());
        for (const auto& R : fam.planks)
            for (const auto& v : dual_box(R).vertices())
                if (!u0.contains(v, 1e-9)) throw ContractError("plank_lp_check: U does not contain every R*");
        w = DecayingIndicator{*U, M}.sample(spec, true);
    }
    Field fp = f.side == Side::physical ? f : inverse_transform(f);
    CheckResult r;
    r.name = U ? "plank_lp_weighted" : "plank_lp";
    if (std::isinf(p)) {
        double mx = 0;
        for_each_piece(fam, f, [&](std::size_t, const Field& q) {
            for (const auto& v : q.values) mx = std::max(mx, std::abs(v));
        });
        r.lhs = mx;
        for (const auto& v : fp.values) r.rhs = std::max(r.rhs, std::abs(v));
    } else {
        long double acc = 0;
        for_each_piece(fam, f, [&](std::size_t, const Field& q) {
            for (std::size_t i = 0; i < q.size(); ++i) acc += w[i] * std::pow(std::abs(q.values[i]), p);
        });
        r.lhs = static_cast<double>(acc) * spec.cell_volume_physical();
        long double b = 0;
        for (std::size_t i = 0; i < fp.size(); ++i) b += w[i] * std::pow(std::abs(fp.values[i]), p);
        r.rhs = static_cast<double>(b) * spec.cell_volume_physical();
    }
    r.ratio = r.lhs / r.rhs;
    return r;
}

CheckResult cordoba_fefferman_check(const std::vector<Polyhedron>& polys, const Field& f, const RBuf& g, double s,
                                    double tol) {
    const GridSpec& spec = f.spec;
    OneDimResult od = check_one_dimensional(polys, tol, 3);
    if (!od.one_dimensional) throw ContractError("cordoba_fefferman_check: family is not one-dimensional");
    Field fh = to_frequency(f);
    auto lab = sharp_labels(spec, polys);
    RBuf ag(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) ag[i] = std::abs(g[i]);
    // inner M_{s,n}|g| cached per normal line (M_n = M_{-n})
    std::vector<std::pair<Vec3, RBuf>> cache;
    auto inner_for = [&](const Vec3& n) -> const RBuf& {
        for (auto& [m, buf] : cache)
            if (std::abs(std::abs(m.dot(n)) - 1) < 1e-12) return buf;
        cache.emplace_back(n, maximal_s_line(spec, ag, n, s));
        return cache.back().second;
    };
    std::map<int, std::pair<double, double>> groups;
    std::size_t nidx = 0;
    CheckResult r;
    r.name = "cordoba_fefferman";
    for (std::size_t j = 0; j < polys.size(); ++j) {
        const Polyhedron& P = polys[j];
        int circle = od.circle_of_normal[nidx];
        nidx += P.normals.size();
        // T_j: smooth cap equal to 1 on Delta_j
        Multiplier T = cap_cutoff(Cap(P.dim, P.anchor, 2 * P.outer_C * P.delta));
        Field hj = fh, sj(spec, Side::frequency);
        Field Tm = T.sample(spec);
        for (std::size_t i = 0; i < fh.size(); ++i) {
            hj.values[i] *= Tm.values[i].real();
            if (lab[i] == static_cast<int>(j)) sj.values[i] = hj.values[i];
        }
        Field hp = inverse_transform(hj), sp = inverse_transform(sj);
        // weight: M_{s,n_1} o ... o M_{s,n_m} |g|
        RBuf wgt = inner_for(P.normals.back());
        for (int q = static_cast<int>(P.normals.size()) - 2; q >= 0; --q) wgt = maximal_s_line(spec, wgt, P.normals[q], s);
        long double L = 0, Rr = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            L += std::norm(sp.values[i]) * g[i];
            Rr += std::norm(hp.values[i]) * wgt[i];
        }
        double dv = spec.cell_volume_physical();
        groups[circle].first += static_cast<double>(L) * dv;
        groups[circle].second += static_cast<double>(Rr) * dv;
        r.lhs += static_cast<double>(L) * dv;
        r.rhs += static_cast<double>(Rr) * dv;
    }
    r.ratio = 0;
    for (auto& [c, lr] : groups) {
        double q = lr.second > 0 ? lr.first / lr.second : 0;
        r.parts.push_back(q);
        r.ratio = std::max(r.ratio, q);
    }
    return r;
}

LemmaLpResult littlewood_paley_lemma_check(const ProjectionFamily& caps, const Field& f, int m, int class_offset) {
    const GridSpec& spec = f.spec;
    Field fh = to_frequency(f);
    auto [kmin, kmax] = lp_range(spec);
    const std::size_t n = spec.size();
    const double dv = spec.cell_volume_physical();
    auto fourth = [&](const RBuf& a) {
        long double s = 0;
        for (double v : a) s += static_cast<long double>(v) * v;
        return static_cast<double>(s) * dv;
    };
    LemmaLpResult res;
    std::vector<double> per_class(m, 0.0);
    RBuf before(n, 0.0);
    for (int i = 0; i < m; ++i) {
        RBuf sumI(n, 0.0), sumII(n, 0.0);
        for (const auto& Tj : caps.pieces) {
            CBuf acc(n, cplx(0, 0));
            for (int k = kmin; k <= kmax; ++k) {
                if (((k % m) + m) % m != i) continue;
                Field piece = multiply(product(Tj, annulus_piece(k)), fh);
                for (std::size_t x = 0; x < n; ++x) {
                    acc[x] += piece.values[x];
                    sumII[x] += std::norm(piece.values[x]);
                }
            }
            for (std::size_t x = 0; x < n; ++x) sumI[x] += std::norm(acc[x]);
        }
        per_class[i] = fourth(sumI);
        if (i == class_offset) {
            res.I = per_class[i];
            res.II = fourth(sumII);
        }
    }
    for (const auto& Tj : caps.pieces) {
        Field p = project(Tj, fh);
        for (std::size_t x = 0; x < n; ++x) before[x] += std::norm(p.values[x]);
    }
    res.before = fourth(before);
    for (double v : per_class) res.sum_over_classes += v;
    res.ratio = res.II > 0 ? res.I / res.II : 0;
    return res;
}

}  // namespace conesq
