#include "conesq/squarefn.hpp"

#include <cmath>
#include <functional>

namespace conesq {

double square_norm(const GridSpec& spec, const RBuf& sumsq, double p) {
    RBuf r(sumsq.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sqrt(sumsq[i]);
    return lp_norm_abs(spec, r.data(), p);
}

double square_ratio(const Field& f, const ProjectionFamily& fam, double p) {
    Field fp = f.side == Side::physical ? f : inverse_transform(f);
    double den = lp_norm(fp, p);
    if (!(den > 0)) throw DomainError("square_ratio: zero input");
    return square_norm(f.spec, square_sum(fam, f), p) / den;
}

double mass_outside(const Field& fhat, const std::vector<Plank>& boxes) {
    long double tot = 0, out = 0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        double m = std::norm(fhat.values[i]);
        if (m == 0) continue;
        tot += m;
        Vec3 xi = fhat.spec.frequency(i);
        bool in = false;
        for (const auto& b : boxes)
            if (b.contains(xi, 1e-9)) {
                in = true;
                break;
            }
        if (!in) out += m;
    }
    return tot > 0 ? static_cast<double>(out / tot) : 0.0;
}

HighLowSplit high_low_split(const Field& g_tau, const Plank& theta_tau, double K, double gamma, double C,
                            const BumpProfile& prof) {
    if (K < 4) throw DomainError("high_low_split: K must be >= 4");
    Field gh = g_tau.side == Side::frequency ? g_tau : forward_transform(g_tau);
    if (mass_outside(gh, {theta_tau}) > 1e-8) throw ContractError("high_low_split: spectrum leaves theta_tau");
    HighLowSplit s;
    s.K = K;
    s.theta_tau = theta_tau;
    s.theta_tau_low = theta_tau_low(theta_tau, gamma, K, C);
    Multiplier full = adapted_bump(theta_tau, prof), low = adapted_bump(s.theta_tau_low, prof);
    Field lo(gh.spec, Side::frequency, "g_tau_low"), hi(gh.spec, Side::frequency, "g_tau_high");
    for (std::size_t i = 0; i < gh.size(); ++i) {
        if (gh.values[i] == cplx(0, 0)) continue;
        Vec3 xi = gh.spec.frequency(i);
        double a = full(xi), b = low(xi);
        lo.values[i] = b * gh.values[i];
        hi.values[i] = (a - b) * gh.values[i];
    }
    s.low = inverse_transform(lo);
    s.high = inverse_transform(hi);
    return s;
}

double high_support_fraction(const Field& high, double delta, double gamma, double K, double C) {
    Field h = high.side == Side::frequency ? high : forward_transform(high);
    long double tot = 0, in = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        double m = std::norm(h.values[i]);
        if (m == 0) continue;
        tot += m;
        Vec3 xi = h.spec.frequency(i);
        double z = std::abs(xi.z());
        if (distance_to_cone(xi) <= C * delta / gamma && z >= gamma / (2 * K) && z <= 2 * gamma) in += m;
    }
    return tot > 0 ? static_cast<double>(in / tot) : 1.0;
}

Field assemble_h(int omega_index, const OmegaCover& cover, const std::vector<Plank>& taus,
                 const std::vector<Field>& highs, const GridSpec& spec) {
    if (taus.size() != highs.size()) throw ContractError("assemble_h: taus and highs differ in length");
    Field h(spec, Side::physical, "h_omega");
    for (std::size_t t = 0; t < taus.size(); ++t) {
        if (cover.assign(taus[t]) != omega_index) throw ContractError("assemble_h: tau not assigned to this omega");
        const Field& g = highs[t];
        for (std::size_t i = 0; i < h.size(); ++i) h.values[i] += g.values[i];
    }
    return h;
}

std::vector<TileNorm> local_square_norms(const std::vector<const Field*>& hs, const Tiling& tiling) {
    std::map<long, long double> acc;
    if (hs.empty()) return {};
    const GridSpec& spec = hs[0]->spec;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        double s = 0;
        for (const Field* h : hs) s += std::norm(h->values[i]);
        long t = tiling.flat_index(tiling.index_of(spec.position(i)));
        acc[t] += s;
    }
    std::vector<TileNorm> out;
    for (auto& [t, v] : acc) out.push_back({t, std::sqrt(static_cast<double>(v) * spec.cell_volume_physical())});
    return out;
}

KakeyaResult kakeya_decomposition_check(const std::vector<Field>& hs, const std::vector<Plank>& omegas,
                                        double delta, double gamma, double K, double support_tol) {
    if (hs.size() != omegas.size()) throw ContractError("kakeya_decomposition_check: size mismatch");
    KakeyaResult res;
    if (hs.empty()) return res;
    const GridSpec& spec = hs[0].spec;
    for (std::size_t w = 0; w < hs.size(); ++w) {
        Field hh = forward_transform(hs[w]);
        if (mass_outside(hh, {omegas[w], reflect_origin(omegas[w])}) > support_tol)
            throw ContractError("kakeya_decomposition_check: h_omega spectrum leaves omega");
    }
    const std::size_t n = spec.size();
    const double dv = spec.cell_volume_physical();
    RBuf tot(n, 0.0);
    for (const auto& h : hs)
        for (std::size_t i = 0; i < n; ++i) tot[i] += std::norm(h.values[i]);
    long double l = 0;
    for (double v : tot) l += static_cast<long double>(v) * v;
    res.lhs = static_cast<double>(l) * dv;

    const double R = gamma * gamma / delta;
    double s = dyadic_floor(1 / std::sqrt(R));
    long double rhs = 0;
    for (; s <= 1.0 + 1e-12; s *= 2) {
        ++res.scales;
        OmegaCover cov = omega_s_cover(gamma, K, s);
        std::map<int, std::vector<const Field*>> groups;
        for (std::size_t w = 0; w < hs.size(); ++w) groups[cov.assign(omegas[w])].push_back(&hs[w]);
        for (auto& [ws, members] : groups) {
            Tiling T = u_tiling(cov.omegas[ws], R, s, gamma, spec.L, spec.dim);
            double vol = T.base.volume();
            for (const auto& tn : local_square_norms(members, T)) {
                double q = tn.norm * tn.norm;
                rhs += q * q / vol;
            }
        }
    }
    res.rhs = static_cast<double>(rhs);
    res.ratio = res.rhs > 0 ? res.lhs / res.rhs : 0;
    return res;
}

namespace {

using CoeffRule = std::function<cplx(std::size_t, const Field&)>;

// ||sum c_j f_j||_p / ||(sum |f_j|^2)^{1/2}||_p for several coefficient rules in one pass over the pieces.
// Every rule must produce unimodular coefficients so the square function is shared.
std::vector<double> reverse_ratios(const Field& f, const ProjectionFamily& taus, double delta, double p,
                                   const std::vector<CoeffRule>& rules) {
    Field fh = f.side == Side::frequency ? f : forward_transform(f);
    long double tot = 0, out = 0;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        double m = std::norm(fh.values[i]);
        if (m == 0) continue;
        tot += m;
        if (distance_to_cone(fh.spec.frequency(i)) > delta) out += m;
    }
    if (tot > 0 && out / tot > 1e-8) throw ContractError("reverse_square_check: spectrum leaves N_delta(Gamma)");
    const std::size_t n = fh.size();
    std::vector<CBuf> sums(rules.size(), CBuf(n, cplx(0, 0)));
    RBuf sq(n, 0.0);
    for_each_piece(taus, fh, [&](std::size_t j, const Field& q) {
        for (std::size_t r = 0; r < rules.size(); ++r) {
            cplx c = rules[r](j, q);
            for (std::size_t i = 0; i < n; ++i) sums[r][i] += c * q.values[i];
        }
        for (std::size_t i = 0; i < n; ++i) sq[i] += std::norm(q.values[i]);
    });
    double den = square_norm(fh.spec, sq, p);
    if (!(den > 0)) throw DomainError("reverse_square_check: zero square function");
    std::vector<double> res;
    RBuf m(n);
    for (const auto& s : sums) {
        for (std::size_t i = 0; i < n; ++i) m[i] = std::abs(s[i]);
        res.push_back(lp_norm_abs(fh.spec, m.data(), p) / den);
    }
    return res;
}

}  // namespace

double reverse_square_check(const Field& f, const ProjectionFamily& taus, double delta,
                            const std::vector<cplx>& coeffs, double p) {
    if (!coeffs.empty() && coeffs.size() != taus.size()) throw ContractError("reverse_square_check: one coefficient per piece");
    for (const auto& c : coeffs)
        if (std::abs(std::abs(c) - 1) > 1e-12) throw DomainError("reverse_square_check: coefficients must be unimodular");
    return reverse_ratios(f, taus, delta, p, {[&](std::size_t j, const Field&) {
                              return coeffs.empty() ? cplx(1, 0) : coeffs[j];
                          }})[0];
}

ReverseComparison reverse_square_compare(const Field& f, const ProjectionFamily& taus, double delta,
                                         const std::vector<cplx>& signs, double p) {
    if (signs.size() != taus.size()) throw ContractError("reverse_square_compare: one sign per piece");
    auto r = reverse_ratios(f, taus, delta, p,
                            {[&](std::size_t j, const Field&) { return signs[j]; },
                             [](std::size_t, const Field& q) {
                                 cplx v = q.values[0];  // physical index 0 is x = 0
                                 return std::abs(v) > 0 ? std::conj(v) / std::abs(v) : cplx(1, 0);
                             }});
    return {r[0], r[1]};
}

}  // namespace conesq
