#pragma once

#include <map>
#include <vector>

#include "conesq/operators.hpp"

namespace conesq {

// ||(sum |pieces|^2)^{1/2}||_p / ||f||_p
double square_ratio(const Field& f, const ProjectionFamily& fam, double p);
double square_norm(const GridSpec& spec, const RBuf& sumsq, double p);

struct HighLowSplit {
    double K = 8;
    Plank theta_tau;
    Plank theta_tau_low;
    Field low;
    Field high;
};

// Fraction of spectral mass of a frequency field outside a plank (two-sided when symmetric=true).
double mass_outside(const Field& fhat, const std::vector<Plank>& boxes);

HighLowSplit high_low_split(const Field& g_tau, const Plank& theta_tau, double K, double gamma, double C = 2,
                            const BumpProfile& prof = {});
// Share of the spectral mass of `high` within N_{C delta/gamma} of the cone, gamma/(2K) <= |xi_3| <= 2 gamma.
double high_support_fraction(const Field& high, double delta, double gamma, double K, double C = 16);

// h_omega = sum of g_{tau,high} over the taus assigned to omega.
Field assemble_h(int omega_index, const OmegaCover& cover, const std::vector<Plank>& taus,
                 const std::vector<Field>& highs, const GridSpec& spec);

struct TileNorm {
    long tile;
    double norm;
};
// Per-tile L^2 norms of (sum |h|^2)^{1/2} restricted to each tile of the tiling.
std::vector<TileNorm> local_square_norms(const std::vector<const Field*>& hs, const Tiling& tiling);

struct KakeyaResult {
    double lhs = 0, rhs = 0, ratio = 0;
    int scales = 0;
};
// lhs = int (sum |h_w|^2)^2, rhs = sum_s sum_{w_s} sum_U |U|^{-1} ||S_U h||_2^4.
KakeyaResult kakeya_decomposition_check(const std::vector<Field>& hs, const std::vector<Plank>& omegas,
                                        double delta, double gamma, double K, double support_tol = 1e-8);

// ||sum c_tau f_tau||_p / ||(sum |f_tau|^2)^{1/2}||_p with optional unimodular per-piece coefficients.
double reverse_square_check(const Field& f, const ProjectionFamily& taus, double delta,
                            const std::vector<cplx>& coeffs = {}, double p = 4);

// The same ratio for given signs and for constructive phases (each piece real-positive at the origin),
// sharing one pass over the pieces.
struct ReverseComparison {
    double random_sign = 0, constructive = 0;
};
ReverseComparison reverse_square_compare(const Field& f, const ProjectionFamily& taus, double delta,
                                         const std::vector<cplx>& signs, double p = 4);

}  // namespace conesq
