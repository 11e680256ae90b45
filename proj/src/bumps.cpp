#include "conesq/bumps.hpp"

#include <cmath>

namespace conesq {

namespace {

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double smooth_step(double x) {  // 0 -> 0, 1 -> 1, C^infinity
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    double a = std::exp(-1 / x), b = std::exp(-1 / (1 - x));
    return a / (a + b);
}

double poly_step(double x, int k) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    double s = 0;
    for (int j = 0; j <= k; ++j) s += binom(k + j, j) * std::pow(1 - x, j);
    return std::pow(x, k + 1) * s;
}

Vec3 box_extent(const Plank& p, double scale) {
    Vec3 e = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
        double s = std::abs(p.center[i]);
        for (int j = 0; j < p.dim; ++j) s += scale * p.half[j] * std::abs(p.axes(i, j));
        e[i] = s;
    }
    return e;
}

}  // namespace

void BumpProfile::validate() const {
    if (!(transition_fraction > 0) || transition_fraction > 0.5)
        throw DomainError("BumpProfile: transition_fraction must lie in (0, 1/2]");
    if (smoothness == Smoothness::polynomial && order < 1) throw DomainError("BumpProfile: order must be >= 1");
}

double BumpProfile::operator()(double u) const {
    u = std::abs(u);
    if (u <= 1) return 1;
    double o = outer();
    if (u >= o) return 0;
    double t = (u - 1) / (o - 1);
    return smoothness == Smoothness::smooth ? smooth_step(1 - t) : 1 - poly_step(t, order);
}

Field Multiplier::sample(const GridSpec& spec) const {
    Field out(spec, Side::frequency, label);
    const long N = spec.N;
    long lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int a = 0; a < spec.dim; ++a) {
        double e = extent[a];
        long r = std::isfinite(e) ? static_cast<long>(std::ceil(e * spec.L)) + 1 : N;
        lo[a] = std::max(-N / 2, -r);
        hi[a] = std::min(N / 2 - 1, r);
    }
    long k[3] = {0, 0, 0};
    auto visit = [&](const long* kk) {
        Vec3 xi = Vec3::Zero();
        for (int a = 0; a < spec.dim; ++a) xi[a] = static_cast<double>(kk[a]) / spec.L;
        out.values[spec.index_of_frequency(kk)] = eval(xi);
    };
    if (spec.dim == 2) {
        for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
            for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1]) visit(k);
    } else {
        for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0])
            for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1])
                for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) visit(k);
    }
    return out;
}

void Multiplier::check_bandwidth(const GridSpec& spec) const {
    double lim = spec.nyquist() - spec.freq_spacing();
    for (int a = 0; a < spec.dim; ++a)
        if (std::isfinite(extent[a]) && extent[a] > lim)
            throw BandwidthError("multiplier '" + label + "' exceeds the grid Nyquist range");
    if (std::isfinite(r_max) && !std::isfinite(extent[0]) && r_max > lim * std::sqrt(double(spec.dim)))
        throw BandwidthError("multiplier '" + label + "' exceeds the grid Nyquist range");
}

Multiplier adapted_bump(const Plank& R, const BumpProfile& prof) {
    prof.validate();
    Multiplier m;
    m.kind = SupportKind::plank;
    m.plank = R;
    m.extent = box_extent(R, prof.outer());
    m.label = "bump_" + role_name(R.role);
    Plank box = R;
    m.eval = [box, prof](const Vec3& xi) {
        Vec3 l = box.local(xi);
        double v = 1;
        for (int i = 0; i < box.dim && v != 0; ++i) v *= prof(l[i] / box.half[i]);
        return v;
    };
    return m;
}

Multiplier plank_indicator(const Plank& R) {
    Multiplier m;
    m.kind = SupportKind::plank;
    m.plank = R;
    m.extent = box_extent(R, 1.0);
    m.label = "ind_" + role_name(R.role);
    m.eval = [R](const Vec3& xi) { return R.contains(xi) ? 1.0 : 0.0; };
    return m;
}

Multiplier cap_cutoff(const Cap& cap, const BumpProfile& prof) {
    prof.validate();
    Multiplier m;
    m.kind = SupportKind::cap;
    m.cap = cap;
    m.label = "cap";
    const double half = cap.radius / 2;
    // outer edge at half*(1+2f) <= radius
    m.eval = [cap, prof, half](const Vec3& xi) {
        if (xi.squaredNorm() == 0) return 0.0;
        return prof(angle_between(xi, cap.center) / half);
    };
    return m;
}

Multiplier polyhedron_indicator(const Polyhedron& P) {
    Multiplier m;
    m.kind = SupportKind::polyhedron;
    m.label = "sharp";
    m.eval = [P](const Vec3& xi) { return P.contains(xi) ? 1.0 : 0.0; };
    return m;
}

Multiplier annulus_piece(int k, const BumpProfile& prof) {
    prof.validate();
    Multiplier m;
    m.kind = SupportKind::annulus;
    double s = std::ldexp(1.0, k);
    m.r_min = s / 2;
    m.r_max = 2 * s;
    m.label = "P_" + std::to_string(k);
    m.eval = [s, prof](const Vec3& xi) {
        double r = xi.norm();
        return prof(r / s) - prof(2 * r / s);
    };
    return m;
}

std::vector<Multiplier> annulus_partition(int kmin, int kmax, const BumpProfile& prof) {
    if (kmax < kmin) throw DomainError("annulus_partition: empty range");
    std::vector<Multiplier> out;
    for (int k = kmin; k <= kmax; ++k) out.push_back(annulus_piece(k, prof));
    return out;
}

Multiplier product(const Multiplier& a, const Multiplier& b, const std::string& label) {
    Multiplier m;
    m.kind = SupportKind::set;
    m.label = label.empty() ? a.label + "*" + b.label : label;
    m.r_min = std::max(a.r_min, b.r_min);
    m.r_max = std::min(a.r_max, b.r_max);
    for (int i = 0; i < 3; ++i) m.extent[i] = std::min(a.extent[i], b.extent[i]);
    if (std::isfinite(m.r_max))
        for (int i = 0; i < 3; ++i) m.extent[i] = std::min(m.extent[i], m.r_max);
    auto fa = a.eval, fb = b.eval;
    m.eval = [fa, fb](const Vec3& xi) {
        double v = fa(xi);
        return v == 0 ? 0.0 : v * fb(xi);
    };
    return m;
}

Multiplier constant_multiplier(double c) {
    Multiplier m;
    m.label = "const";
    m.eval = [c](const Vec3&) { return c; };
    return m;
}

double DecayingIndicator::operator()(const Vec3& x) const {
    Vec3 l = box.local(x);
    double s = 0;
    for (int i = 0; i < box.dim; ++i) s += (l[i] / box.half[i]) * (l[i] / box.half[i]);
    return std::pow(1 + std::sqrt(s), -M);
}

RBuf DecayingIndicator::sample(const GridSpec& spec, bool periodic) const {
    RBuf out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Vec3 d = spec.position(i) - box.center;
        if (periodic)
            for (int a = 0; a < spec.dim; ++a) d[a] -= spec.L * std::round(d[a] / spec.L);
        out[i] = (*this)(box.center + d);
    }
    return out;
}

DecayingIndicator decaying_indicator(const Plank& R, double M) {
    if (M < 1) throw DomainError("decaying_indicator: exponent must be >= 1");
    return DecayingIndicator{R, M};
}

Multiplier replace_cutoff(const Multiplier& source, const Plank& target,
                          const std::function<bool(const Vec3&)>& constraint, const GridSpec& spec,
                          const BumpProfile& prof) {
    Multiplier t = adapted_bump(target, prof);
    double worst = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Vec3 xi = spec.frequency(i);
        if (!constraint(xi)) continue;
        worst = std::max(worst, std::abs(source(xi) - t(xi)));
    }
    if (worst > 1e-12)
        throw ReplacementError("replace_cutoff: target disagrees with source by " + fmt_num(worst) +
                               " on the constraint region");
    return t;
}

}  // namespace conesq
