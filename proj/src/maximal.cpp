#include <cmath>

#include "conesq/operators.hpp"

namespace conesq {

namespace {

// out[x] += w * g[x + o] on the periodic grid (o in grid units).
void add_shifted(const GridSpec& spec, const double* g, double* out, const long* o, double w) {
    const long N = spec.N;
    auto wrap = [N](long v) { return ((v % N) + N) % N; };
    if (spec.dim == 2) {
        const long s1 = wrap(o[1]);
        for (long i = 0; i < N; ++i) {
            const double* src = g + wrap(i + o[0]) * N;
            double* dst = out + i * N;
            for (long j = 0; j < N - s1; ++j) dst[j] += w * src[j + s1];
            for (long j = N - s1; j < N; ++j) dst[j] += w * src[j + s1 - N];
        }
    } else {
        const long s2 = wrap(o[2]);
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j) {
                const double* src = g + (wrap(i + o[0]) * N + wrap(j + o[1])) * N;
                double* dst = out + (i * N + j) * N;
                for (long k = 0; k < N - s2; ++k) dst[k] += w * src[k + s2];
                for (long k = N - s2; k < N; ++k) dst[k] += w * src[k + s2 - N];
            }
    }
}

}  // namespace

RBuf maximal_line(const GridSpec& spec, const RBuf& g, const Vec3& dir, double t_min, double t_max) {
    const double h = spec.spacing();
    if (t_min <= 0) t_min = h;
    if (t_max <= 0) t_max = spec.L / 4;
    Vec3 n = dir;
    if (spec.dim == 2) n.z() = 0;
    if (n.norm() < 1e-12) throw DomainError("maximal_line: zero direction");
    n.normalize();
    const std::size_t sz = spec.size();
    RBuf a(sz);
    for (std::size_t i = 0; i < sz; ++i) a[i] = std::abs(g[i]);
    RBuf sum = a;  // k = 0 term
    RBuf best(sz, 0.0);
    RBuf endpoints(sz);
    long T = 1, done = 0;
    auto offset = [&](long k, long* o) {
        for (int d = 0; d < spec.dim; ++d) o[d] = std::lround(static_cast<double>(k) * n[d]);
    };
    while (static_cast<double>(T) * h <= t_max * (1 + 1e-12)) {
        for (long k = done + 1; k <= T; ++k) {
            long op[3], om[3];
            offset(k, op);
            offset(-k, om);
            add_shifted(spec, a.data(), sum.data(), op, 1.0);
            add_shifted(spec, a.data(), sum.data(), om, 1.0);
        }
        done = T;
        if (static_cast<double>(T) * h >= t_min * (1 - 1e-12)) {
            // trapezoid: endpoints carry weight 1/2
            std::fill(endpoints.begin(), endpoints.end(), 0.0);
            long op[3], om[3];
            offset(T, op);
            offset(-T, om);
            add_shifted(spec, a.data(), endpoints.data(), op, 0.5);
            add_shifted(spec, a.data(), endpoints.data(), om, 0.5);
            const double inv = 1.0 / (2.0 * static_cast<double>(T));
            for (std::size_t i = 0; i < sz; ++i) best[i] = std::max(best[i], (sum[i] - endpoints[i]) * inv);
        }
        T *= 2;
    }
    return best;
}

RBuf maximal_s_line(const GridSpec& spec, const RBuf& g, const Vec3& n, double s, double t_min, double t_max) {
    if (!(s > 1)) throw DomainError("maximal_s_line: s must exceed 1");
    RBuf p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = std::pow(std::abs(g[i]), s);
    RBuf m = maximal_line(spec, p, n, t_min, t_max);
    for (double& v : m) v = std::pow(v, 1 / s);
    return maximal_line(spec, m, n, t_min, t_max);
}

RBuf directional_maximal(const GridSpec& spec, const RBuf& g, const MaximalConfig& cfg) {
    if (cfg.directions.empty()) throw DomainError("directional_maximal: empty direction set");
    if (!(cfg.s > 1)) throw DomainError("directional_maximal: s must exceed 1");
    if (cfg.depth < 1) throw DomainError("directional_maximal: depth must be >= 1");
    RBuf cur(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) cur[i] = std::abs(g[i]);
    for (int d = 0; d < cfg.depth; ++d) {
        RBuf next(g.size(), 0.0);
        for (const auto& n : cfg.directions) {
            RBuf m = maximal_s_line(spec, cur, n, cfg.s, cfg.t_min, cfg.t_max);
            for (std::size_t i = 0; i < m.size(); ++i) next[i] = std::max(next[i], m[i]);
        }
        cur.swap(next);
    }
    return cur;
}

Field directional_maximal(const Field& g, const MaximalConfig& cfg) {
    if (g.side != Side::physical) throw ContractError("directional_maximal: expects a physical field");
    RBuf a(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) a[i] = std::abs(g.values[i]);
    RBuf m = directional_maximal(g.spec, a, cfg);
    Field out(g.spec, Side::physical, "M_s");
    for (std::size_t i = 0; i < m.size(); ++i) out.values[i] = m[i];
    return out;
}

}  // namespace conesq
