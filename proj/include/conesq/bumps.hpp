#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "conesq/geometry.hpp"
#include "conesq/grid.hpp"

namespace conesq {

enum class Smoothness { smooth, polynomial };

struct BumpProfile {
    double transition_fraction = 0.5;  // transition occupies [1, 1 + 2*fraction] in units of the half-width
    Smoothness smoothness = Smoothness::smooth;
    int order = 3;  // polynomial smoothstep order (C^order)

    void validate() const;
    double outer() const { return 1 + 2 * transition_fraction; }
    // Radial profile: 1 on [0,1], 0 on [outer, inf), monotone between.
    double operator()(double u) const;
};

enum class SupportKind { plank, cap, annulus, polyhedron, set };

struct Multiplier {
    std::function<double(const Vec3&)> eval;
    SupportKind kind = SupportKind::set;
    std::optional<Plank> plank;
    std::optional<Cap> cap;
    double r_min = 0, r_max = std::numeric_limits<double>::infinity();
    // Per-axis max |xi_i| over the support (infinite when unbounded).
    Vec3 extent = Vec3::Constant(std::numeric_limits<double>::infinity());
    std::string label;

    double operator()(const Vec3& xi) const { return eval(xi); }
    Field sample(const GridSpec& spec) const;
    // Throws BandwidthError if a bounded support reaches the edge of the frequency box.
    void check_bandwidth(const GridSpec& spec) const;
};

Multiplier adapted_bump(const Plank& R, const BumpProfile& prof = {});
// Sharp indicator of the closed plank.
Multiplier plank_indicator(const Plank& R);
Multiplier cap_cutoff(const Cap& cap, const BumpProfile& prof = {});
// Sharp conical indicator 1_P(xi/|xi|).
Multiplier polyhedron_indicator(const Polyhedron& P);
// rho_k(r) = eta(r/2^k) - eta(r/2^{k-1}); each supported in [2^{k-1}, 2^{k+1}].
std::vector<Multiplier> annulus_partition(int kmin, int kmax, const BumpProfile& prof = {});
Multiplier annulus_piece(int k, const BumpProfile& prof = {});
Multiplier product(const Multiplier& a, const Multiplier& b, const std::string& label = "");
Multiplier constant_multiplier(double c);

// chi_R(x) = (1 + |A^{-1}(x - c_R)|)^{-M}; on a grid, x - c_R is taken modulo the period.
struct DecayingIndicator {
    Plank box;
    double M = 100;
    double operator()(const Vec3& x) const;
    RBuf sample(const GridSpec& spec, bool periodic = true) const;
};
DecayingIndicator decaying_indicator(const Plank& R, double M = 100);

// Builds an adapted bump on target and checks it equals source at every in-constraint grid frequency.
Multiplier replace_cutoff(const Multiplier& source, const Plank& target,
                          const std::function<bool(const Vec3&)>& constraint, const GridSpec& spec,
                          const BumpProfile& prof = {});

}  // namespace conesq
