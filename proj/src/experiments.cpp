#include "conesq/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "conesq/squarefn.hpp"

namespace conesq {

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw DomainError("fit_exponent: need at least 3 points");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [d, r] : points) {
        if (!(r > 0) || !(d > 0)) throw DomainError("fit_exponent: ratios and deltas must be positive");
        double x = std::log(1 / d), y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0)) throw DomainError("fit_exponent: deltas must not all coincide");
    FitResult f;
    f.alpha = (n * sxy - sx * sy) / den;
    double c = (sy - f.alpha * sx) / n;
    f.prefactor = std::exp(c);
    double ss = 0;
    for (const auto& [d, r] : points) {
        double e = std::log(r) - (f.alpha * std::log(1 / d) + c);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

void ExperimentConfig::validate() const {
    static const char* known[] = {"cordoba2d",       "smooth_caps_nd",   "sharp_polyhedra", "cone_l8",
                                  "reverse_sqfn",    "lemma_suite",      "extremizer_sweep", "maximal_sweep"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return experiment == k; }) ==
        std::end(known))
        throw DomainError("unknown experiment: " + experiment);
    if (engine != "fft" && engine != "overlap") throw DomainError("engine must be fft or overlap");
    if (n != 2 && n != 3) throw DomainError("n must be 2 or 3");
    if (!(p >= 1)) throw DomainError("p must be >= 1");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!is_dyadic(deltas[i]) || deltas[i] >= 1) throw DomainError("deltas must be dyadic and < 1");
        if (i && !(deltas[i] < deltas[i - 1])) throw DomainError("deltas must be decreasing");
    }
    if (seeds < 1 || threads < 1) throw DomainError("seeds and threads must be positive");
    if (input != "extremizer" && input != "random" && input != "both") throw DomainError("input: extremizer|random|both");
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, n); ++t)
        pool.emplace_back([&] {
            for (int i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

OverlapRatio overlap_ratio(const Extremizer& ex, double p, const SamplerConfig& base) {
    if (!ex.pieces.focal) throw ContractError("overlap_ratio: extremizer has no focal ball");
    SamplerConfig num_cfg = base;
    num_cfg.mode = SamplerMode::monte_carlo;
    Domain focal = Domain::of_ball(*ex.pieces.focal);
    Estimate num = ex.coherent ? counting_lp(ex.pieces, p, num_cfg, focal)
                               : counting_square_lp(ex.pieces, p, num_cfg, focal);
    SamplerConfig den_cfg = base;
    den_cfg.mode = SamplerMode::importance;
    Estimate den = counting_lp(ex.tubes, p, den_cfg);
    OverlapRatio r;
    r.numerator = num.value;
    r.denominator = den.value;
    r.ratio = num.value / den.value;
    double rel = std::hypot(num.value > 0 ? num.stderr_ / num.value : 0, den.value > 0 ? den.stderr_ / den.value : 0);
    r.stderr_ = r.ratio * rel;
    return r;
}

double fft_cone_ratio(const Extremizer& ex, const GridSpec& grid, double p) {
    if (ex.cfg.kind != ExtremizerKind::cone_L8_A2) throw DomainError("fft_cone_ratio: cone extremizer expected");
    Field f = synthesize_extremizer(ex, grid);
    double den = lp_norm(f, p);
    // Same numerator as the counting model: one piece per packet, cut to its undilated plank.
    RBuf sq = square_sum(plank_family(ex.frequency_planks, ex.cfg.profile), forward_transform(f));
    // Grid points inside the focal ball; the mean times the ball volume gives the integral.
    const Ball& b = *ex.pieces.focal;
    long double acc = 0;
    long cnt = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Vec3 x = grid.position_centered(i);
        if ((x - b.center).norm() > b.radius) continue;
        acc += std::pow(sq[i], p / 2);
        ++cnt;
    }
    if (cnt == 0) throw SizingError("fft_cone_ratio: no grid points in the focal ball");
    double vol = 4.0 / 3.0 * kPi * std::pow(b.radius, 3);
    double num = std::pow(static_cast<double>(acc / cnt) * vol, 1 / p);
    return num / den;
}

GridSpec cordoba_grid(double delta) {
    long N = std::lround(8 / delta);
    if (N > 4096) throw SizingError("cordoba2d: grid beyond 4096^2; smallest delta is 2^-9");
    return GridSpec(2, N, 2 / delta);
}

GridSpec cone_grid(double delta, double memory_mb) {
    long N = std::lround(16 / delta);
    double mb = std::pow(static_cast<double>(N), 3) * 16.0 * 4 / 1048576.0;
    if (mb > memory_mb) {
        double d = delta;
        while (std::pow(16 / d, 3) * 64 / 1048576.0 > memory_mb) d *= 2;
        throw SizingError("FFT cone grid needs " + fmt_num(mb) + " MB over the ceiling; smallest feasible delta " +
                          fmt_num(d));
    }
    return GridSpec(3, N, 4 / delta);
}

Field sector_extremizer(const GridSpec& grid, int sectors, double delta, std::uint64_t seed, bool spread) {
    Field fhat(grid, Side::frequency, "sector_extremizer");
    const double w = 2 * kPi / sectors;
    Rng rng(seed);
    std::uniform_real_distribution<double> U(0, 2 * kPi);
    for (int j = 0; j < sectors; ++j) {
        double a = w * j;
        Plank b;
        b.dim = 2;
        b.center = 0.75 * Vec3(std::cos(a), std::sin(a), 0);
        b.axes.col(0) = Vec3(std::cos(a), std::sin(a), 0);
        b.axes.col(1) = Vec3(-std::sin(a), std::cos(a), 0);
        b.half = Vec3(0.125, delta, 1);
        Vec3 x0 = Vec3::Zero();
        if (spread) x0 = Vec3(grid.L * (U(rng) / (2 * kPi) - 0.5), grid.L * (U(rng) / (2 * kPi) - 0.5), 0);
        add_packet(fhat, {b, x0, std::polar(1.0, U(rng)), true});
    }
    return inverse_transform(fhat);
}

namespace {

SweepResult make_result(const ExperimentConfig& cfg, const std::string& series) {
    SweepResult r;
    r.experiment = cfg.experiment;
    r.engine = cfg.engine;
    r.series = series;
    r.n = cfg.n;
    r.p = cfg.p;
    return r;
}

void finish_fit(SweepResult& r) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& q : r.points) pts.emplace_back(q.delta, q.ratio);
    if (pts.size() >= 3) r.fit = fit_exponent(pts);
}

// Random-input FFT sweep: median over seeds of ratio(seed) at each delta.
SweepResult random_median_sweep(const ExperimentConfig& cfg, const std::function<double(double, std::uint64_t)>& ratio) {
    SweepResult r = make_result(cfg, "random_median");
    for (double d : cfg.deltas) {
        std::vector<double> vals(static_cast<std::size_t>(cfg.seeds));
        parallel_for(cfg.seeds, cfg.threads, [&](int s) { vals[static_cast<std::size_t>(s)] = ratio(d, cfg.seed + s); });
        SweepPoint pt;
        pt.delta = d;
        pt.ratio = median(vals);
        pt.seed = cfg.seed;
        pt.series = r.series;
        r.points.push_back(pt);
    }
    finish_fit(r);
    return r;
}

bool in_annulus(const Vec3& xi, double a, double b) {
    double r = xi.norm();
    return r >= a && r <= b;
}

ExtremizerKind default_kind(const ExperimentConfig& cfg) {
    if (cfg.experiment == "cone_l8") return ExtremizerKind::cone_L8_A2;
    if (cfg.kind.empty()) throw DomainError("extremizer_sweep needs a kind");
    return kind_from_name(cfg.kind);
}

}  // namespace

std::vector<SweepResult> run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.deltas.empty()) throw DomainError("run_sweep: empty delta list");
    std::vector<SweepResult> out;
    const auto& E = cfg.experiment;

    if (E == "cone_l8" || E == "extremizer_sweep") {
        ExtremizerKind kind = default_kind(cfg);
        SweepResult r = make_result(cfg, "extremizer");
        r.has_expected = true;
        r.expected_alpha = expected_exponent(kind, kind == ExtremizerKind::cone_L8_A2 ? 3 : cfg.n, cfg.p);
        std::vector<SweepPoint> pts(cfg.deltas.size());
        parallel_for(static_cast<int>(cfg.deltas.size()), cfg.threads, [&](int i) {
            ExtremizerConfig ec;
            ec.kind = kind;
            ec.n = kind == ExtremizerKind::cone_L8_A2 ? 3 : cfg.n;
            ec.delta = cfg.deltas[static_cast<std::size_t>(i)];
            ec.p = cfg.p;
            ec.seed = cfg.seed;
            ec.dilation = cfg.dilation;
            Extremizer ex = build_extremizer(ec);
            SweepPoint pt;
            pt.delta = ec.delta;
            pt.seed = cfg.seed;
            pt.series = r.series;
            if (cfg.engine == "overlap") {
                SamplerConfig sc;
                sc.samples = cfg.samples;
                sc.seed = cfg.seed;
                OverlapRatio o = overlap_ratio(ex, cfg.p, sc);
                pt.ratio = o.ratio;
                pt.stderr_ = o.stderr_;
            } else {
                if (kind != ExtremizerKind::cone_L8_A2)
                    throw SizingError("FFT engine: this extremizer needs delta^-2 physical extent; use the overlap engine");
                pt.ratio = fft_cone_ratio(ex, cone_grid(ec.delta, cfg.memory_mb), cfg.p);
            }
            pts[static_cast<std::size_t>(i)] = pt;
        });
        r.points = pts;
        finish_fit(r);
        out.push_back(r);
        return out;
    }

    if (E == "cordoba2d") {
        if (cfg.engine != "fft") throw DomainError("cordoba2d runs on the FFT engine");
        if (cfg.input != "random") {
            SweepResult r = make_result(cfg, "extremizer");
            for (double d : cfg.deltas) {
                GridSpec g = cordoba_grid(d);
                int count = static_cast<int>(std::lround(1 / d));
                SweepPoint pt;
                pt.delta = d;
                pt.series = r.series;
                pt.ratio = square_ratio(sector_extremizer(g, count, d, cfg.seed), sharp_family(planar_sectors(count)), cfg.p);
                r.points.push_back(pt);
            }
            finish_fit(r);
            out.push_back(r);
        }
        if (cfg.input != "extremizer") {
            // Per-delta family reused across seeds.
            std::map<double, ProjectionFamily> fams;
            for (double d : cfg.deltas) fams[d] = sharp_family(planar_sectors(static_cast<int>(std::lround(1 / d))));
            out.push_back(random_median_sweep(cfg, [&](double d, std::uint64_t seed) {
                GridSpec g = cordoba_grid(d);
                Rng rng(seed);
                Field fh = random_frequency_field(g, [](const Vec3& x) { return in_annulus(x, 0.5, 1.0); }, rng);
                return square_ratio(fh, fams.at(d), cfg.p);
            }));
        }
        return out;
    }

    if (E == "smooth_caps_nd" || E == "sharp_polyhedra") {
        if (cfg.engine != "fft") throw DomainError(E + " runs on the FFT engine");
        out.push_back(random_median_sweep(cfg, [&](double d, std::uint64_t seed) {
            GridSpec g = cfg.n == 2 ? cordoba_grid(d) : GridSpec(3, std::lround(8 / d), 2 / d);
            if (cfg.n == 3 && std::pow(g.N, 3) * 16.0 * 4 / 1048576.0 > cfg.memory_mb)
                throw SizingError("grid over the memory ceiling");
            ProjectionFamily fam;
            std::function<bool(const Vec3&)> admit = [](const Vec3& x) { return in_annulus(x, 0.5, 1.0); };
            if (E == "smooth_caps_nd") {
                fam = cap_family(separated_caps(cfg.n, d));
            } else if (cfg.n == 2) {
                fam = sharp_family(planar_sectors(static_cast<int>(std::lround(1 / d))));
            } else {
                int N = std::max(1, static_cast<int>(std::lround(1 / (4 * d))));
                fam = sharp_family(pyramid_family(N));
                // the pyramids tile the lower cone |xi_1|, |xi_2| <= -xi_3
                admit = [](const Vec3& x) {
                    return in_annulus(x, 0.5, 1.0) && std::abs(x.x()) <= -x.z() && std::abs(x.y()) <= -x.z();
                };
            }
            Rng rng(seed);
            Field fh = random_frequency_field(g, admit, rng);
            return square_ratio(fh, fam, cfg.p);
        }));
        return out;
    }

    if (E == "reverse_sqfn") {
        out.push_back(random_median_sweep(cfg, [&](double d, std::uint64_t seed) {
            GridSpec g(3, std::lround(8 / d), 2 / d);
            auto taus = cone_planks(d);
            ProjectionFamily fam = plank_family(taus);
            Rng rng(seed);
            Field fh(g, Side::frequency, "f");
            std::normal_distribution<double> G;
            for (std::size_t i = 0; i < g.size(); ++i) {
                Vec3 xi = g.frequency(i);
                if (distance_to_cone(xi) <= d && xi.z() >= 0.5 && xi.z() <= 1) fh.values[i] = cplx(G(rng), G(rng));
            }
            std::vector<cplx> signs(taus.size());
            std::bernoulli_distribution B;
            for (auto& c : signs) c = B(rng) ? 1.0 : -1.0;
            return reverse_square_check(fh, fam, d, signs, 4);
        }));
        return out;
    }

    if (E == "maximal_sweep") {
        out.push_back(random_median_sweep(cfg, [&](double d, std::uint64_t seed) {
            GridSpec g(2, std::lround(8 / d), 2 / d);
            MaximalConfig mc;
            int count = static_cast<int>(std::lround(1 / d));
            for (int j = 0; j < count; ++j) {
                double a = kPi * j / count;
                mc.directions.emplace_back(std::cos(a), std::sin(a), 0);
            }
            Rng rng(seed);
            Field f = random_physical_field(g, rng);
            Field m = directional_maximal(f, mc);
            return lp_norm(m, cfg.p) / lp_norm(f, cfg.p);
        }));
        return out;
    }

    throw DomainError("experiment " + E + " is not a sweep; use the verify subcommand");
}

}  // namespace conesq
