#include "conesq/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

namespace conesq {

void TubeFamily::validate() const {
    if (dim != 2 && dim != 3) throw DomainError("tube family dimension must be 2 or 3");
    if (boxes.size() != amplitudes.size()) throw ContractError("one amplitude per box");
    for (const auto& b : boxes) {
        if (b.dim != dim) throw ContractError("box dimension differs from family dimension");
        b.validate();
    }
    if (focal && !(focal->radius > 0)) throw DomainError("focal radius must be positive");
}

static double ball_volume(int dim, double r) {
    return dim == 2 ? kPi * r * r : 4.0 / 3.0 * kPi * r * r * r;
}

double Domain::volume(int dim) const {
    if (box) return box->volume();
    if (ball) return ball_volume(dim, ball->radius);
    throw ContractError("empty domain");
}

bool Domain::contains(const Vec3& x) const {
    if (box) return box->contains(x);
    if (ball) return (x - ball->center).norm() <= ball->radius;
    return false;
}

static void aabb(const Plank& b, Vec3& lo, Vec3& hi) {
    lo.setZero();
    hi.setZero();
    for (int i = 0; i < b.dim; ++i) {
        double r = 0;
        for (int j = 0; j < b.dim; ++j) r += std::abs(b.axes(i, j)) * b.half[j];
        lo[i] = b.center[i] - r;
        hi[i] = b.center[i] + r;
    }
}

Plank default_domain(const TubeFamily& fam) {
    if (fam.boxes.empty()) throw DomainError("empty tube family");
    Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
    for (const auto& b : fam.boxes) {
        Vec3 l, h;
        aabb(b, l, h);
        lo = lo.cwiseMin(l);
        hi = hi.cwiseMax(h);
    }
    Plank d;
    d.dim = fam.dim;
    d.center = 0.5 * (lo + hi);
    d.half = 0.55 * (hi - lo);
    if (fam.dim == 2) {
        d.center[2] = 0;
        d.half[2] = 1;
    }
    return d;
}

BoxIndex::BoxIndex(const std::vector<Plank>& boxes, int dim, long max_cells) : boxes_(&boxes), dim_(dim) {
    if (boxes.empty()) {
        cells_.resize(1);
        lo_.setZero();
        cell_ = Vec3::Ones();
        return;
    }
    Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
    double thin = 1e300;
    for (const auto& b : boxes) {
        Vec3 l, h;
        aabb(b, l, h);
        lo = lo.cwiseMin(l);
        hi = hi.cwiseMax(h);
        for (int i = 0; i < dim; ++i) thin = std::min(thin, 2 * b.half[i]);
    }
    // Cells comparable to the thinnest box side, capped by the cell budget.
    double vol = 1;
    for (int i = 0; i < dim; ++i) vol *= std::max(hi[i] - lo[i], 1e-12);
    double side = std::max(thin, std::pow(vol / static_cast<double>(max_cells), 1.0 / dim));
    // Also cap total rasterization work: a long tilted box should not span too many cells.
    double longest = 0;
    for (const auto& b : boxes) longest = std::max(longest, 2 * b.half.head(dim).maxCoeff());
    side = std::max(side, longest / 64.0);
    lo_ = lo;
    cell_ = Vec3::Constant(side);
    long total = 1;
    for (int i = 0; i < dim; ++i) {
        n_[i] = std::max(1L, static_cast<long>(std::ceil((hi[i] - lo[i]) / side)));
        total *= n_[i];
    }
    cells_.resize(static_cast<std::size_t>(total));

    // Column-wise conservative rasterization: a cell is kept when its center lies within
    // half_k + (cell radius) of the box along every box axis.
    const double rc = side * std::sqrt(static_cast<double>(dim)) / 2;
    const int last = dim - 1;
    for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
        const Plank& b = boxes[bi];
        Vec3 l, h;
        aabb(b, l, h);
        long a[3] = {0, 0, 0}, z[3] = {0, 0, 0};
        for (int i = 0; i < dim; ++i) {
            a[i] = std::clamp(static_cast<long>(std::floor((l[i] - lo_[i]) / side)), 0L, n_[i] - 1);
            z[i] = std::clamp(static_cast<long>(std::floor((h[i] - lo_[i]) / side)), 0L, n_[i] - 1);
        }
        long i0max = dim == 3 ? z[0] : a[0];
        for (long i0 = a[0]; i0 <= i0max; ++i0)
            for (long i1 = (dim == 3 ? a[1] : a[0]); i1 <= (dim == 3 ? z[1] : z[0]); ++i1) {
                // column: fixed leading coordinates, free last coordinate t
                Vec3 base = Vec3::Zero();
                if (dim == 3) {
                    base[0] = lo_[0] + (i0 + 0.5) * side;
                    base[1] = lo_[1] + (i1 + 0.5) * side;
                } else {
                    base[0] = lo_[0] + (i1 + 0.5) * side;
                }
                double tlo = -1e300, thi = 1e300;
                bool empty = false;
                for (int k = 0; k < dim && !empty; ++k) {
                    Vec3 ax = b.axes.col(k);
                    double off = ax.head(dim).dot((base - b.center).head(dim)) - ax[last] * (base[last] - b.center[last]);
                    double lim = b.half[k] + rc;
                    // |off + ax[last] * (t - c_last)| <= lim
                    if (std::abs(ax[last]) < 1e-15) {
                        if (std::abs(off) > lim) empty = true;
                        continue;
                    }
                    double t1 = b.center[last] + (-lim - off) / ax[last];
                    double t2 = b.center[last] + (lim - off) / ax[last];
                    tlo = std::max(tlo, std::min(t1, t2));
                    thi = std::min(thi, std::max(t1, t2));
                }
                if (empty || tlo > thi) continue;
                long c0 = std::max(a[last], static_cast<long>(std::ceil((tlo - lo_[last]) / side - 0.5)));
                long c1 = std::min(z[last], static_cast<long>(std::floor((thi - lo_[last]) / side - 0.5)));
                for (long c = c0; c <= c1; ++c) {
                    long flat = dim == 2 ? i1 * n_[1] + c : (i0 * n_[1] + i1) * n_[2] + c;
                    cells_[static_cast<std::size_t>(flat)].push_back(static_cast<int>(bi));
                    ++entries_;
                }
            }
    }
}

long BoxIndex::cell_of(const Vec3& x) const {
    long idx[3] = {0, 0, 0};
    for (int i = 0; i < dim_; ++i) {
        double u = (x[i] - lo_[i]) / cell_[i];
        if (u < 0 || u >= static_cast<double>(n_[i])) return -1;
        idx[i] = static_cast<long>(u);
    }
    return dim_ == 2 ? idx[0] * n_[1] + idx[1] : (idx[0] * n_[1] + idx[1]) * n_[2] + idx[2];
}

void BoxIndex::query(const Vec3& x, std::vector<int>& out) const {
    out.clear();
    long c = cell_of(x);
    if (c < 0) return;
    for (int bi : cells_[static_cast<std::size_t>(c)])
        if ((*boxes_)[static_cast<std::size_t>(bi)].contains(x)) out.push_back(bi);
}

namespace {

Vec3 uniform_in_box(const Plank& b, Rng& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    Vec3 l = Vec3::Zero();
    for (int i = 0; i < b.dim; ++i) l[i] = U(rng) * b.half[i];
    return b.global(l);
}

Vec3 uniform_in_ball(int dim, const Ball& ball, Rng& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    for (;;) {
        Vec3 v = Vec3::Zero();
        for (int i = 0; i < dim; ++i) v[i] = U(rng);
        if (v.squaredNorm() <= 1) return ball.center + ball.radius * v;
    }
}

struct Acc {
    long double s = 0, s2 = 0;
    long n = 0;
    void add(double v) {
        s += v;
        s2 += static_cast<long double>(v) * v;
        ++n;
    }
    double mean() const { return n ? static_cast<double>(s / n) : 0.0; }
    double var_of_mean() const {
        if (n < 2) return 0;
        long double m = s / n;
        long double v = (s2 / n - m * m) * n / (n - 1);
        return std::max(0.0, static_cast<double>(v / n));
    }
};

Estimate finish(double I, double se, double p) {
    Estimate e;
    e.value = I > 0 ? std::pow(I, 1.0 / p) : 0.0;
    e.stderr_ = I > 0 ? e.value * se / (p * I) : 0.0;
    return e;
}

bool box_contains_domain(const Plank& b, const Domain& dom, int dim) {
    if (dom.ball) {
        Vec3 l = b.local(dom.ball->center);
        for (int i = 0; i < dim; ++i)
            if (std::abs(l[i]) + dom.ball->radius > b.half[i]) return false;
        return true;
    }
    for (const auto& v : dom.box->vertices())
        if (!b.contains(v)) return false;
    return true;
}

bool box_meets_domain(const Plank& b, const Domain& dom) {
    if (dom.ball) return box_meets_ball(b, dom.ball->center, dom.ball->radius);
    return boxes_intersect(b, *dom.box);
}

// Boxes split into those covering the whole domain (folded into constants) and the rest (indexed).
struct Prepared {
    int dim = 3;
    std::vector<Plank> partial;
    std::vector<cplx> amp;
    cplx base_sum = 0;
    double base_sq = 0;
    long base_count = 0;
    std::unique_ptr<BoxIndex> index;
};

Prepared prepare(const TubeFamily& fam, const Domain& dom) {
    Prepared pr;
    pr.dim = fam.dim;
    for (std::size_t i = 0; i < fam.boxes.size(); ++i) {
        const Plank& b = fam.boxes[i];
        if (!box_meets_domain(b, dom)) continue;
        if (box_contains_domain(b, dom, fam.dim)) {
            pr.base_sum += fam.amplitudes[i];
            pr.base_sq += std::norm(fam.amplitudes[i]);
            ++pr.base_count;
        } else {
            pr.partial.push_back(b);
            pr.amp.push_back(fam.amplitudes[i]);
        }
    }
    pr.index = std::make_unique<BoxIndex>(pr.partial, fam.dim);
    return pr;
}

enum class Agg { coherent, square };

struct Evaluator {
    const Prepared& pr;
    Agg agg;
    double p;
    std::vector<int> hits;
    // Integrand at x and the number of boxes containing x.
    double operator()(const Vec3& x, long* count = nullptr) {
        pr.index->query(x, hits);
        if (count) *count = pr.base_count + static_cast<long>(hits.size());
        double v;
        if (agg == Agg::coherent) {
            cplx s = pr.base_sum;
            for (int i : hits) s += pr.amp[static_cast<std::size_t>(i)];
            v = std::abs(s);
        } else {
            double s = pr.base_sq;
            for (int i : hits) s += std::norm(pr.amp[static_cast<std::size_t>(i)]);
            v = std::sqrt(s);
        }
        return std::isinf(p) ? v : std::pow(v, p);
    }
};

Estimate integrate(const TubeFamily& fam, double p, const SamplerConfig& cfg, const Domain& dom, Agg agg) {
    Prepared pr = prepare(fam, dom);
    Evaluator F{pr, agg, p, {}};
    Rng rng(cfg.seed);
    const int dim = fam.dim;
    const long n = cfg.samples;
    const double V = dom.volume(dim);

    if (std::isinf(p)) {
        double best = F(dom.ball ? dom.ball->center : dom.box->center);
        for (const auto& b : pr.partial)
            if (dom.contains(b.center)) best = std::max(best, F(b.center));
        for (long s = 0; s < std::min(n, 100000L); ++s)
            best = std::max(best, F(dom.box ? uniform_in_box(*dom.box, rng) : uniform_in_ball(dim, *dom.ball, rng)));
        return {best, 0};
    }
    // Nothing varies inside the domain: the integrand is the constant from the covering boxes.
    if (pr.partial.empty() && cfg.mode != SamplerMode::importance) return finish(F(Vec3::Zero()) * V, 0, p);

    switch (cfg.mode) {
        case SamplerMode::lattice: {
            Plank bb;
            if (dom.box) {
                bb = *dom.box;
            } else {
                bb.dim = dim;
                bb.center = dom.ball->center;
                bb.half = Vec3::Constant(dom.ball->radius);
                if (dim == 2) bb.half[2] = 1;
            }
            long m = std::max(2L, static_cast<long>(std::llround(std::pow(static_cast<double>(n), 1.0 / dim))));
            double cellvol = bb.volume() / std::pow(static_cast<double>(m), dim);
            long double sum = 0;
            long mz = dim == 3 ? m : 1;
            for (long i = 0; i < m; ++i)
                for (long j = 0; j < m; ++j)
                    for (long k = 0; k < mz; ++k) {
                        Vec3 l((2 * (i + 0.5) / m - 1) * bb.half[0], (2 * (j + 0.5) / m - 1) * bb.half[1],
                               dim == 3 ? (2 * (k + 0.5) / m - 1) * bb.half[2] : 0.0);
                        Vec3 x = bb.global(l);
                        if (dom.ball && !dom.contains(x)) continue;
                        sum += F(x);
                    }
            return finish(static_cast<double>(sum) * cellvol, 0, p);
        }
        case SamplerMode::monte_carlo: {
            Acc acc;
            for (long s = 0; s < n; ++s)
                acc.add(F(dom.box ? uniform_in_box(*dom.box, rng) : uniform_in_ball(dim, *dom.ball, rng)));
            return finish(acc.mean() * V, cfg.error_estimate ? std::sqrt(acc.var_of_mean()) * V : 0, p);
        }
        case SamplerMode::stratified: {
            // Shells at dyadic radii around the focal point (or the domain center).
            Vec3 c = fam.focal ? fam.focal->center : (dom.box ? dom.box->center : dom.ball->center);
            double r0 = fam.focal ? fam.focal->radius : 1.0;
            double rmax = 0;
            if (dom.box) {
                for (const auto& v : dom.box->vertices()) rmax = std::max(rmax, (v - c).norm());
            } else {
                rmax = (dom.ball->center - c).norm() + dom.ball->radius;
            }
            std::vector<double> radii{0.0, r0};
            while (radii.back() < rmax) radii.push_back(radii.back() * 2);
            const int shells = static_cast<int>(radii.size()) - 1;
            const long per = std::max(16L, n / shells);
            double I = 0, var = 0;
            for (int sh = 0; sh < shells; ++sh) {
                double a = radii[sh], b = radii[sh + 1];
                double vol = ball_volume(dim, b) - ball_volume(dim, a);
                Acc acc;
                Ball outer{c, b};
                for (long s = 0; s < per; ++s) {
                    Vec3 x;
                    do {
                        x = uniform_in_ball(dim, outer, rng);
                    } while ((x - c).norm() < a);
                    acc.add(dom.contains(x) ? F(x) : 0.0);
                }
                I += acc.mean() * vol;
                var += acc.var_of_mean() * vol * vol;
            }
            return finish(I, cfg.error_estimate ? std::sqrt(var) : 0, p);
        }
        case SamplerMode::importance: {
            // Box chosen with probability proportional to volume, uniform point inside,
            // weight V_total / (number of boxes containing the point). Unbiased for the union.
            std::vector<const Plank*> all;
            std::vector<double> cum;
            double Vt = 0;
            for (std::size_t i = 0; i < fam.boxes.size(); ++i)
                if (box_meets_domain(fam.boxes[i], dom)) {
                    all.push_back(&fam.boxes[i]);
                    cum.push_back(Vt += fam.boxes[i].volume());
                }
            if (Vt <= 0) return {};
            std::uniform_real_distribution<double> U(0, Vt);
            Acc acc;
            for (long s = 0; s < n; ++s) {
                auto it = std::upper_bound(cum.begin(), cum.end(), U(rng));
                std::size_t bi = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
                Vec3 x = uniform_in_box(*all[bi], rng);
                if (!dom.contains(x)) {
                    acc.add(0);
                    continue;
                }
                long cnt = 0;
                double v = F(x, &cnt);
                acc.add(v * Vt / static_cast<double>(std::max(1L, cnt)));
            }
            return finish(acc.mean(), cfg.error_estimate ? std::sqrt(acc.var_of_mean()) : 0, p);
        }
    }
    return {};
}

Domain resolve(const TubeFamily& fam, const std::optional<Domain>& domain) {
    if (domain) return *domain;
    return Domain::of_box(default_domain(fam));
}

void check_sampler(const SamplerConfig& cfg) {
    if (cfg.samples < 1000) throw DomainError("sampler needs at least 1000 samples");
}

}  // namespace

Estimate counting_lp(const TubeFamily& fam, double p, const SamplerConfig& cfg, const std::optional<Domain>& domain) {
    fam.validate();
    if (!(p >= 1)) throw DomainError("p must be >= 1");
    check_sampler(cfg);
    if (fam.boxes.empty()) return {};
    return integrate(fam, p, cfg, resolve(fam, domain), Agg::coherent);
}

Estimate counting_square_lp(const TubeFamily& fam, double p, const SamplerConfig& cfg,
                            const std::optional<Domain>& domain) {
    fam.validate();
    if (!(p >= 1)) throw DomainError("p must be >= 1");
    check_sampler(cfg);
    if (fam.boxes.empty()) return {};
    return integrate(fam, p, cfg, resolve(fam, domain), Agg::square);
}

long focal_overlap(const TubeFamily& fam, const Ball& ball) {
    long c = 0;
    for (const auto& b : fam.boxes)
        if (box_meets_ball(b, ball.center, ball.radius)) ++c;
    return c;
}

long intersecting_pairs(const std::vector<Plank>& boxes, int dim) {
    if (boxes.size() < 2) return 0;
    // Sweep along x over bounding boxes, exact SAT on survivors.
    long count = 0;
    std::vector<Vec3> lo(boxes.size()), hi(boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) aabb(boxes[i], lo[i], hi[i]);
    std::vector<std::size_t> order(boxes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lo[a][0] < lo[b][0]; });
    for (std::size_t a = 0; a < order.size(); ++a) {
        std::size_t i = order[a];
        for (std::size_t b = a + 1; b < order.size(); ++b) {
            std::size_t j = order[b];
            if (lo[j][0] > hi[i][0]) break;
            bool sep = false;
            for (int k = 1; k < dim; ++k)
                if (lo[j][k] > hi[i][k] || lo[i][k] > hi[j][k]) sep = true;
            if (sep) continue;
            if (boxes_intersect(boxes[i], boxes[j])) ++count;
        }
    }
    return count;
}

}  // namespace conesq
