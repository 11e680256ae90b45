#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conesq/common.hpp"

namespace conesq {

struct Cap {
    int dim = 3;
    Vec3 center = Vec3::UnitZ();
    double radius = 0.1;

    Cap() = default;
    Cap(int dim_, const Vec3& c, double r);
    bool contains_direction(const Vec3& u) const;  // u unit
};

struct Polyhedron {
    int dim = 3;
    std::vector<Vec3> normals;   // outward unit normals of bounding great spheres
    std::vector<double> offsets; // face i: {u . n_i = offsets[i]}; interior u . n_i <= offsets[i]
    Vec3 anchor = Vec3::UnitZ();
    double delta = 0.1;
    double inner_c = 0.25;
    double outer_C = 4.0;

    // Closed membership of a direction (any nonzero vector; scaled internally).
    bool contains(const Vec3& xi) const;
    // Sampled check of B_{c delta}(anchor) subset P subset B_{C delta}(anchor) on the sphere.
    bool check_regular(Rng& rng, int samples = 2000) const;
};

enum class PlankRole { tau, theta, omega, omega_s, theta_star, U, R, generic };
std::string role_name(PlankRole r);
PlankRole role_from_name(const std::string& s);

struct Plank {
    int dim = 3;
    Vec3 center = Vec3::Zero();
    Mat3 axes = Mat3::Identity();  // columns are the frame e_1..e_n
    Vec3 half = Vec3::Ones();      // half-widths along the axes (entries >= dim unused)
    PlankRole role = PlankRole::generic;
    double delta = 0;  // scale the plank was built for, 0 if not applicable

    Vec3 local(const Vec3& x) const { return axes.transpose() * (x - center); }
    Vec3 global(const Vec3& l) const { return center + axes * l; }
    bool contains(const Vec3& x, double rel_slack = 0) const;
    double volume() const;
    std::vector<Vec3> vertices() const;
    Plank dilated(double f) const;                // about the center, all axes
    Plank dilated_axis(int axis, double f) const; // about the center, one axis
    Plank translated(const Vec3& v) const;
    Plank recentered(const Vec3& c) const;
    int longest_axis() const;
    void validate() const;
};

struct Tiling {
    Plank base;  // tile at lattice index 0
    std::array<Vec3, 3> lattice{};
    std::array<long, 3> index_min{0, 0, 0};
    std::array<long, 3> index_max{0, 0, 0};

    // Lattice index of the tile containing x (half-open tiles).
    std::array<long, 3> index_of(const Vec3& x) const;
    Plank tile(const std::array<long, 3>& idx) const;
    long flat_index(const std::array<long, 3>& idx) const;
    long tile_count() const;
};

// Cone frame at azimuth phi: columns n (normal), t (tangent), c (light direction).
Mat3 cone_frame(double phi);
// Azimuth of a vector's horizontal part.
double azimuth(const Vec3& v);
// Euclidean distance from xi to the double cone xi1^2+xi2^2 = xi3^2.
double distance_to_cone(const Vec3& xi);

std::vector<Cap> separated_caps(int n, double delta, const std::optional<Cap>& region = std::nullopt);

std::vector<Plank> cone_planks(double delta, bool both_nappes = false);
std::vector<Plank> refine_planks(const Plank& tau, double gamma);
// Reciprocal-length dual: half-widths 1/(4 a_i), i.e. full side lengths are reciprocal.
Plank dual_box(const Plank& b);
inline constexpr double kDualFactor = 0.25;

// theta_tau: origin-centered box containing (2 theta) - (2 theta) for theta in Theta_gamma(tau).
Plank theta_tau(const Plank& tau, double gamma);
Plank theta_tau_low(const Plank& theta_tau_box, double gamma, double K, double C = 2.0);

struct OmegaCover {
    double gamma, K, delta;
    std::vector<Plank> omegas;
    std::vector<double> phis;
    // Assignment of tau (by azimuth) to the omega with minimal angular distance; ties -> lower index.
    int assign(const Plank& tau) const;
};
OmegaCover omega_cover(double gamma, double K, double delta);
// omega_s planks: s^2 gamma x s gamma x gamma, same construction at scale s.
OmegaCover omega_s_cover(double gamma, double K, double s);
Plank reflect_origin(const Plank& p);

Tiling u_tiling(const Plank& omega_s, double R, double s, double gamma, double box_side, int dim = 3);

struct MinkowskiResult {
    bool disjoint = false;  // criterion verdict
    bool applicable = false;
    double separation = 0;  // angle between the signed difference cones
    double needed = 0;      // sum of their angular radii
};
// Conical tubes tau_{k,j}: directions within the cap, |xi| in [2^{k-2}, 2^{k+2}].
MinkowskiResult minkowski_disjointness(const Cap& c1, const Cap& c2, const std::array<int, 4>& k, int m);
// Monte-Carlo search for a point in (tau_{j1,k1}+tau_{j2,k2}) cap (tau_{j1,k3}+tau_{j2,k4}).
long minkowski_sample_hits(const Cap& c1, const Cap& c2, const std::array<int, 4>& k, Rng& rng,
                           int outer = 2000, int inner = 200);

struct OneDimResult {
    bool one_dimensional = false;
    std::vector<Vec3> poles;  // poles of the great circles found
    std::vector<int> circle_of_normal;
};
OneDimResult check_one_dimensional(const std::vector<Polyhedron>& polys, double tol, int max_circles = 3);

// Families of polyhedra.
std::vector<Polyhedron> planar_sectors(int count, int dim = 2);
std::vector<Polyhedron> pyramid_family(int N);
// delta-cube attached to a face normal m at center xi (xi perpendicular to m).
Polyhedron attached_cube(const Vec3& xi, const Vec3& m, double delta);

// Separating-axis test for two boxes (2D or 3D); touching counts as intersecting.
bool boxes_intersect(const Plank& a, const Plank& b);
// Box meets a ball.
bool box_meets_ball(const Plank& b, const Vec3& center, double radius);

// Line-oriented text format.
void write_geometry(std::ostream& os, const std::vector<Plank>& planks);
void write_caps(std::ostream& os, const std::vector<Cap>& caps);
std::vector<Plank> read_planks(std::istream& is);

}  // namespace conesq
