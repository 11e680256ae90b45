#include "conesq/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "conesq/report.hpp"
#include "conesq/squarefn.hpp"

namespace conesq {

namespace {

struct Spec {
    const char* name;
    double budget;
};
constexpr Spec kSpecs[kCriterionCount] = {
    {"exact_identities", 60},      {"lemma_instances", 600},    {"minkowski_disjointness", 60},
    {"cordoba_scaling", 1200},     {"cone_l8_sharpness", 1800}, {"sharp_cutoff_counterexample", 600},
    {"bochner_riesz", 600},        {"wave_packet_concentration", 120}, {"reverse_square_function", 300},
};

std::string num(double x, int prec = 4) {
    char b[64];
    std::snprintf(b, sizeof b, "%.*g", prec, x);
    return b;
}

std::vector<double> dyadics(int k0, int k1) {
    std::vector<double> d;
    for (int k = k0; k <= k1; ++k) d.push_back(std::ldexp(1.0, -k));
    return d;
}

// Nonnegative smooth random weight |h|^2 with h band-limited to |xi| <= 1/4.
RBuf random_weight(const GridSpec& g, Rng& rng) {
    Field h = random_frequency_field(g, [](const Vec3& x) { return x.norm() <= 0.25; }, rng, "weight");
    Field hp = inverse_transform(h);
    RBuf w(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) w[i] = std::norm(hp.values[i]);
    return w;
}

Field sum_fields(const GridSpec& g, const std::vector<const Field*>& parts) {
    Field s(g, Side::physical);
    for (const auto* p : parts)
        for (std::size_t i = 0; i < g.size(); ++i) s.values[i] += p->values[i];
    return s;
}

// Collects worst values and a running verdict for a group of checks.
struct Tally {
    bool pass = true;
    std::ostringstream os;
    void add(const std::string& label, double value, bool ok) {
        if (os.tellp() > 0) os << ", ";
        os << label << "=" << num(value) << (ok ? "" : " (!)");
        pass = pass && ok;
    }
};

// ---- AC1 -----------------------------------------------------------------------------------------

void ac1(AcceptResult& res) {
    Tally t;
    const double tol = 1e-10;
    Rng rng(101);

    GridSpec g2(2, 512, 64);
    {
        Field f = random_physical_field(g2, rng);
        double a = lp_norm(f, 2), b = lp_norm(forward_transform(f), 2);
        t.add("plancherel_2d", std::abs(a - b) / a, std::abs(a - b) / a < tol);
    }
    {
        // zero mean so every frequency lies in some annulus piece
        Field fh = random_frequency_field(g2, [](const Vec3& x) { return x.norm() > 0; }, rng);
        Field f = inverse_transform(fh);
        const int m = 3;
        std::vector<Field> all;
        for (int i = 0; i < m; ++i)
            for (auto& kv : littlewood_paley_split(fh, i, m)) all.push_back(std::move(kv.second));
        std::vector<const Field*> ptr;
        for (const auto& q : all) ptr.push_back(&q);
        double e = relative_l2_diff(sum_fields(g2, ptr), f);
        t.add("lp_reconstruction", e, e < tol);
    }
    {
        const int count = 16;
        auto polys = planar_sectors(count);
        Field fh = random_frequency_field(g2, [](const Vec3& x) { return x.norm() > 0.25 && x.norm() < 2; }, rng);
        ProjectionFamily S = sharp_family(polys);
        double worst = 0;
        std::vector<int> lab = sharp_labels(g2, polys);
        for (int j = 0; j < count; ++j) {
            const auto& P = polys[static_cast<std::size_t>(j)];
            Field Tm = cap_cutoff(Cap(2, P.anchor, 2 * P.outer_C * P.delta)).sample(g2);
            Field sj(g2, Side::frequency), sjtj(g2, Side::frequency);
            for (std::size_t i = 0; i < g2.size(); ++i) {
                if (lab[i] != j) continue;
                sj.values[i] = fh.values[i];
                sjtj.values[i] = fh.values[i] * Tm.values[i].real();
            }
            worst = std::max(worst, relative_l2_diff(inverse_transform(sjtj), inverse_transform(sj)));
        }
        t.add("support_identity", worst, worst < tol);
    }

    GridSpec g3(3, 64, 8);
    {
        Field f = random_physical_field(g3, rng);
        double a = lp_norm(f, 2), b = lp_norm(forward_transform(f), 2);
        t.add("plancherel_3d", std::abs(a - b) / a, std::abs(a - b) / a < tol);
    }
    {
        // g_tau = |f_tau|^2 with f_tau a smooth random piece on tau; its spectrum sits in theta_tau.
        Plank tau = cone_planks(1.0 / 16)[0];
        Multiplier b = adapted_bump(tau);
        Field fh = random_frequency_field(g3, [&](const Vec3& x) { return b(x) > 0; }, rng);
        for (std::size_t i = 0; i < g3.size(); ++i) fh.values[i] *= b(g3.frequency(i));
        Field ft = inverse_transform(fh);
        Field g(g3, Side::physical, "g_tau");
        for (std::size_t i = 0; i < g3.size(); ++i) g.values[i] = std::norm(ft.values[i]);
        HighLowSplit s = high_low_split(g, theta_tau(tau, 1.0), 8, 1.0);
        double e = relative_l2_diff(sum_fields(g3, {&s.low, &s.high}), g);
        t.add("high_low_reconstruction", e, e < tol);
    }
    {
        auto polys = pyramid_family(4);
        Field fh = random_frequency_field(
            g3, [](const Vec3& x) { return x.norm() > 0 && std::abs(x.x()) <= -x.z() && std::abs(x.y()) <= -x.z(); },
            rng);
        auto pieces = apply_projection(sharp_family(polys), fh);
        std::vector<const Field*> ptr;
        for (const auto& q : pieces) ptr.push_back(&q);
        double e = relative_l2_diff(sum_fields(g3, ptr), inverse_transform(fh));
        t.add("pyramid_partition", e, e < tol);
    }
    res.pass = t.pass;
    res.detail = t.os.str();
}

// ---- AC2 -----------------------------------------------------------------------------------------

std::vector<Plank> plank_lattice(int dim, const Vec3& half, int per_axis) {
    std::vector<Plank> out;
    int nz = dim == 3 ? per_axis : 1;
    for (int a = 0; a < per_axis; ++a)
        for (int b = 0; b < per_axis; ++b)
            for (int c = 0; c < nz; ++c) {
                Plank p;
                p.dim = dim;
                p.half = half;
                if (dim == 2) p.half[2] = 1;
                auto coord = [&](int i, int ax) { return (i - (per_axis - 1) / 2.0) * 4 * half[ax]; };
                p.center = Vec3(coord(a, 0), coord(b, 1), dim == 3 ? coord(c, 2) : 0.0);
                p.role = PlankRole::R;
                out.push_back(p);
            }
    return out;
}

void ac2(AcceptResult& res, const AcceptOptions& opts) {
    const int seeds = 50;
    const double cap = 10;
    Tally t;
    auto run = [&](const std::string& label, const std::function<double(std::uint64_t)>& one) {
        std::vector<double> r(seeds);
        parallel_for(seeds, opts.threads, [&](int s) { r[static_cast<std::size_t>(s)] = one(7000 + s); });
        double worst = *std::max_element(r.begin(), r.end());
        t.add(label, worst, worst <= cap);
    };

    // plank families: 2D at delta = 2^-4, 3D at delta = 2^-3
    struct PlankCase {
        std::string tag;
        GridSpec g;
        Vec3 half;
        int per_axis;
    };
    const PlankCase cases[] = {{"2d", GridSpec(2, 512, 64), Vec3(0.125, 0.25, 1), 4},
                               {"3d", GridSpec(3, 64, 16), Vec3(0.125, 0.25, 0.25), 2}};
    for (const auto& pc : cases) {
        ProjectionFamily fam = plank_family(plank_lattice(pc.g.dim, pc.half, pc.per_axis));
        const double outer = BumpProfile{}.outer();
        auto admit = [&](const Vec3& x) {
            for (const auto& p : fam.planks)
                if (p.dilated(outer).contains(x)) return true;
            return false;
        };
        run("weighted_l2_" + pc.tag, [&](std::uint64_t seed) {
            Rng rng(seed);
            Field fh = random_frequency_field(pc.g, admit, rng);
            return weighted_l2_check(fam, fh, random_weight(pc.g, rng)).ratio;
        });
        Plank Rs = dual_box(fam.planks[0]);
        Plank U = Rs.dilated(2);
        run("plank_lp_" + pc.tag, [&](std::uint64_t seed) {
            Rng rng(seed);
            Field fh = random_frequency_field(pc.g, admit, rng);
            return std::max(plank_lp_check(fam, fh, 4).ratio, plank_lp_check(fam, fh, 4, U).ratio);
        });
    }

    {
        GridSpec g(2, 128, 32);
        auto polys = planar_sectors(16);
        run("cordoba_fefferman_2d", [&](std::uint64_t seed) {
            Rng rng(seed);
            Field fh = random_frequency_field(g, [](const Vec3& x) { return x.norm() > 0.5 && x.norm() <= 1; }, rng);
            return cordoba_fefferman_check(polys, fh, random_weight(g, rng), 2).ratio;
        });
    }
    {
        GridSpec g(3, 64, 16);
        std::vector<Polyhedron> polys;
        const int N = 8;
        auto all = pyramid_family(N);
        for (int b1 = -2; b1 < 2; ++b1)
            for (int b2 = -2; b2 < 2; ++b2) polys.push_back(all[static_cast<std::size_t>((b1 + N) * 2 * N + (b2 + N))]);
        run("cordoba_fefferman_3d", [&](std::uint64_t seed) {
            Rng rng(seed);
            Field fh = random_frequency_field(
                g,
                [](const Vec3& x) {
                    double r = x.norm();
                    return r > 0.5 && r <= 1 && std::abs(x.x()) <= -x.z() && std::abs(x.y()) <= -x.z();
                },
                rng);
            return cordoba_fefferman_check(polys, fh, random_weight(g, rng), 2).ratio;
        });
    }
    {
        const double delta = 1.0 / 8, gamma = 1, K = 8;
        GridSpec g(3, 64, 8);
        OmegaCover cov = omega_cover(gamma, K, delta);
        run("kakeya_3d", [&](std::uint64_t seed) {
            Rng rng(seed);
            std::vector<Field> hs;
            for (const auto& w : cov.omegas) {
                Field hh = random_frequency_field(g, [&](const Vec3& x) { return w.contains(x); }, rng);
                hs.push_back(inverse_transform(hh));
            }
            return kakeya_decomposition_check(hs, cov.omegas, delta, gamma, K).ratio;
        });
    }
    res.pass = t.pass;
    res.detail = "max ratio over " + std::to_string(seeds) + " seeds (cap " + num(cap) + "): " + t.os.str();
}

// ---- AC3 -----------------------------------------------------------------------------------------

void ac3(AcceptResult& res) {
    const double delta = 1.0 / 32;
    const int m = 8, pairs = 100;
    Rng rng(303);
    std::uniform_int_distribution<int> axis(0, 5), kd(0, 6), gap(m, m + 4);
    std::bernoulli_distribution coin;
    int crit_ok = 0;
    long hits = 0;
    // caps of radius delta whose distance is at least 10 delta, centres within pi/4 of a coordinate axis
    auto near_axis = [&](const Vec3& e) {
        for (;;) {
            Vec3 u = random_unit(rng, 3);
            double a = angle_between(u, e);
            if (a <= kPi / 4 - delta) return u;
        }
    };
    for (int i = 0; i < pairs; ++i) {
        int ax = axis(rng);
        Vec3 e = Vec3::Zero();
        e[ax % 3] = ax < 3 ? 1 : -1;
        Vec3 a, b;
        do {
            a = near_axis(e);
            b = near_axis(e);
        } while (angle_between(a, b) < 12 * delta);
        Cap c1(3, a, delta), c2(3, b, delta);
        std::array<int, 4> k{};
        k[0] = kd(rng) + 2;
        k[2] = coin(rng) ? k[0] + gap(rng) : k[0] - gap(rng);
        k[1] = kd(rng) + 2;
        k[3] = coin(rng) ? k[1] + gap(rng) : k[1] - gap(rng);
        MinkowskiResult mr = minkowski_disjointness(c1, c2, k, m);
        if (mr.disjoint) ++crit_ok;
        hits += minkowski_sample_hits(c1, c2, k, rng, 2000, 100);
    }
    res.pass = crit_ok == pairs && hits == 0;
    res.detail = "criterion true on " + std::to_string(crit_ok) + "/" + std::to_string(pairs) +
                 " case-D quadruples, sampled intersection points " + std::to_string(hits);
}

// ---- sweeps --------------------------------------------------------------------------------------

SweepResult one_sweep(ExperimentConfig c, std::vector<SweepResult>& keep) {
    auto rs = run_sweep(c);
    for (auto& r : rs) keep.push_back(r);
    return rs.front();
}

std::string fit_text(const SweepResult& r) {
    return r.experiment + ":" + r.series + " p=" + num(r.p) + " alpha=" + num(r.fit.alpha) +
           " resid=" + num(r.fit.residual, 2);
}

void ac4(AcceptResult& res, const AcceptOptions& opts) {
    Tally t;
    ExperimentConfig c;
    c.experiment = "cordoba2d";
    c.engine = "fft";
    c.n = 2;
    c.p = 4;
    c.deltas = dyadics(3, 7);
    c.seeds = 20;
    c.threads = opts.threads;
    c.seed = 1;
    auto rs = run_sweep(c);
    for (auto& r : rs) {
        res.sweeps.push_back(r);
        t.add(r.series + "_alpha", r.fit.alpha, r.fit.alpha >= -0.05 && r.fit.alpha <= 0.08);
    }
    ExperimentConfig a = c;
    a.experiment = "extremizer_sweep";
    a.engine = "overlap";
    a.kind = "sharp_cutoff_A1";
    a.p = 6;
    a.deltas = dyadics(4, 9);
    SweepResult r = one_sweep(a, res.sweeps);
    const double need = (0.5 - 2.0 / 6) - 0.05;
    t.add("A1_2d_p6_alpha", r.fit.alpha, r.fit.alpha >= need);
    res.pass = t.pass;
    res.detail = t.os.str() + " (p=4 window [-0.05, 0.08], p=6 floor " + num(need, 3) + ")";
}

void ac5(AcceptResult& res, const AcceptOptions& opts) {
    Tally t;
    std::map<double, double> at_coarsest;
    for (double p : {8.0, 12.0, 16.0}) {
        ExperimentConfig c;
        c.experiment = "cone_l8";
        c.engine = "overlap";
        c.p = p;
        c.deltas = dyadics(4, 10);
        c.threads = opts.threads;
        SweepResult r = one_sweep(c, res.sweeps);
        double want = 0.25 - 2 / p;
        bool ok = std::abs(r.fit.alpha - want) <= 0.05;
        if (p == 8) ok = ok && std::abs(r.fit.alpha) <= 0.05;
        t.add("alpha_p" + num(p), r.fit.alpha, ok);
        at_coarsest[p] = r.points.front().ratio;
    }
    // FFT cross-check at delta = 2^-4: one synthesis, all exponents.
    ExtremizerConfig ec;
    ec.kind = ExtremizerKind::cone_L8_A2;
    ec.delta = 1.0 / 16;
    Extremizer ex = build_extremizer(ec);
    GridSpec g(3, 256, 32);
    if (std::pow(256.0, 3) * 16 * 4 / 1048576.0 > opts.memory_mb) throw SizingError("AC5 cross-check grid over the memory ceiling");
    for (const auto& [p, ov] : at_coarsest) {
        double fft = fft_cone_ratio(ex, g, p);
        double rel = std::abs(fft - ov) / ov;
        t.add("fft_vs_overlap_p" + num(p), rel, rel <= 0.20);
    }
    res.pass = t.pass;
    res.detail = t.os.str();
}

void ac6(AcceptResult& res, const AcceptOptions& opts) {
    Tally t;
    ExperimentConfig c;
    c.experiment = "extremizer_sweep";
    c.engine = "overlap";
    c.kind = "sharp_cutoff_A1";
    c.n = 3;
    c.p = 4;
    c.deltas = dyadics(4, 7);
    c.threads = opts.threads;
    SweepResult r = one_sweep(c, res.sweeps);
    // (n-1)/2 - n/p - 0.05 at n = 3, p = 4
    const double need = 0.20;
    t.add("alpha", r.fit.alpha, r.fit.alpha >= need);
    ExtremizerConfig ec;
    ec.kind = ExtremizerKind::sharp_cutoff_A1;
    ec.n = 3;
    ec.delta = 1.0 / 32;
    Extremizer ex = build_extremizer(ec);
    bool fam_1d = check_one_dimensional(ex.polys, ec.delta / 2).one_dimensional;
    bool pyr_1d = check_one_dimensional(pyramid_family(8), 1e-9).one_dimensional;
    t.add("family_one_dimensional", fam_1d, !fam_1d);
    t.add("pyramids_one_dimensional", pyr_1d, pyr_1d);
    res.pass = t.pass;
    res.detail = t.os.str() + " (floor " + num(need) + ", " + std::to_string(ex.polys.size()) + " cubes)";
}

void ac7(AcceptResult& res, const AcceptOptions& opts) {
    ExperimentConfig c;
    c.experiment = "extremizer_sweep";
    c.engine = "overlap";
    c.kind = "bochner_riesz";
    c.n = 2;
    c.p = 6;
    c.deltas = dyadics(8, 16);
    c.threads = opts.threads;
    SweepResult r = one_sweep(c, res.sweeps);
    const double want = 0.5 - 2.0 / 6;
    res.pass = std::abs(r.fit.alpha - want) <= 0.05;
    res.detail = fit_text(r) + " target " + num(want) + " +- 0.05";
}

// ---- AC8 -----------------------------------------------------------------------------------------

void ac8(AcceptResult& res, const AcceptOptions& opts) {
    const double delta = 1.0 / 16, floor = 0.5;
    GridSpec g(3, 256, 64);
    const int count = 20;
    Rng rng(808);
    std::uniform_real_distribution<double> U(-1, 1);
    auto cube = [&](double r) {
        Vec3 v;
        for (int k = 0; k < 3; ++k) v[k] = r * U(rng);
        return v;
    };
    std::vector<WavePacketSpec> specs;
    for (int i = 0; i < count; ++i) {
        WavePacketSpec s;
        s.box.dim = 3;
        Vec3 a = random_unit(rng, 3);
        s.box.axes = frame_from_axis(a);
        s.box.half = Vec3(delta, std::sqrt(delta), 1) / 2;
        s.box.center = cube(0.5);
        s.position = cube(4);
        s.amplitude = std::polar(1.0, kPi * U(rng));
        specs.push_back(s);
    }
    std::vector<double> frac(count);
    parallel_for(count, std::min(opts.threads, 2), [&](int i) {
        const auto& s = specs[static_cast<std::size_t>(i)];
        Field f = synthesize_packet(s, g);
        Plank box = dual_box(s.box).recentered(s.position).dilated(2);
        long double in = 0, tot = 0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            double m = std::norm(f.values[j]);
            tot += m;
            if (box.contains(g.position_centered(j))) in += m;
        }
        frac[static_cast<std::size_t>(i)] = static_cast<double>(in / tot);
    });
    double worst = *std::min_element(frac.begin(), frac.end());
    res.pass = worst >= floor;
    res.detail = "min L2 share in x0 + 2R* over " + std::to_string(count) + " planks = " + num(worst) +
                 ", median " + num(median(frac)) + " (floor " + num(floor) + ")";
}

// ---- AC9 -----------------------------------------------------------------------------------------

void ac9(AcceptResult& res, const AcceptOptions& opts) {
    const double delta = 1.0 / 16;
    const int seeds = 20;
    GridSpec g(3, 128, 32);
    auto taus = cone_planks(delta);
    ProjectionFamily fam = plank_family(taus);
    std::vector<double> rnd(seeds), con(seeds);
    parallel_for(seeds, opts.threads, [&](int s) {
        Rng rng(9000 + s);
        Field fh = random_frequency_field(
            g, [&](const Vec3& x) { return distance_to_cone(x) <= delta && x.z() >= 0.5 && x.z() <= 1; }, rng);
        std::vector<cplx> signs(taus.size());
        std::bernoulli_distribution B;
        for (auto& c : signs) c = B(rng) ? 1.0 : -1.0;
        ReverseComparison rc = reverse_square_compare(fh, fam, delta, signs, 4);
        rnd[static_cast<std::size_t>(s)] = rc.random_sign;
        con[static_cast<std::size_t>(s)] = rc.constructive;
    });
    double mr = median(rnd), mc = median(con);
    res.pass = mr <= 3 && mc > mr;
    res.detail = "median random-sign ratio " + num(mr) + " (cap 3), constructive-phase median " + num(mc);
}

}  // namespace

const char* criterion_name(int id) {
    if (id < 1 || id > kCriterionCount) throw DomainError("criterion id must be 1..9");
    return kSpecs[id - 1].name;
}

double criterion_budget(int id) {
    if (id < 1 || id > kCriterionCount) throw DomainError("criterion id must be 1..9");
    return kSpecs[id - 1].budget;
}

AcceptResult run_criterion(int id, const AcceptOptions& opts) {
    AcceptResult res;
    res.id = id;
    res.name = criterion_name(id);
    res.budget = criterion_budget(id);
    auto t0 = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: ac1(res); break;
            case 2: ac2(res, opts); break;
            case 3: ac3(res); break;
            case 4: ac4(res, opts); break;
            case 5: ac5(res, opts); break;
            case 6: ac6(res, opts); break;
            case 7: ac7(res, opts); break;
            case 8: ac8(res, opts); break;
            case 9: ac9(res, opts); break;
        }
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = std::string("error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.seconds > res.budget) {
        res.pass = false;
        res.detail += " [over time budget]";
    }
    if (!opts.out_dir.empty() && !res.sweeps.empty()) {
        write_report(res.sweeps, opts.out_dir + "/AC" + std::to_string(id));
    }
    return res;
}

std::string format_line(const AcceptResult& r) {
    char tail[96];
    std::snprintf(tail, sizeof tail, " (%.1f s / %.0f s)", r.seconds, r.budget);
    return "AC" + std::to_string(r.id) + " " + (r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail + tail;
}

}  // namespace conesq
