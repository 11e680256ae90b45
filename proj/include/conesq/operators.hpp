#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conesq/bumps.hpp"
#include "conesq/geometry.hpp"
#include "conesq/grid.hpp"

namespace conesq {

enum class FamilyKind { smooth_cap, sharp_polyhedron, annulus, plank };

struct ProjectionFamily {
    FamilyKind kind = FamilyKind::smooth_cap;
    std::vector<Multiplier> pieces;
    std::vector<Plank> planks;         // plank kind
    std::vector<Polyhedron> polys;     // sharp kind
    std::vector<Cap> caps;             // smooth_cap kind
    std::string label;
    std::size_t size() const { return kind == FamilyKind::sharp_polyhedron ? polys.size() : pieces.size(); }
};

ProjectionFamily cap_family(const std::vector<Cap>& caps, const BumpProfile& prof = {},
                            const std::optional<Multiplier>& radial = std::nullopt);
ProjectionFamily sharp_family(const std::vector<Polyhedron>& polys);
ProjectionFamily plank_family(const std::vector<Plank>& planks, const BumpProfile& prof = {});
ProjectionFamily annulus_family(int kmin, int kmax, const BumpProfile& prof = {});

// Sharp tie-break: each grid frequency goes to the lowest-index polyhedron containing it, -1 for none.
std::vector<int> sharp_labels(const GridSpec& spec, const std::vector<Polyhedron>& polys);

// (m * fhat)^vee for a frequency-side fhat.
Field project(const Multiplier& m, const Field& fhat);
// Streams each projected piece (physical side) to fn; avoids holding all pieces.
void for_each_piece(const ProjectionFamily& fam, const Field& f,
                    const std::function<void(std::size_t, const Field&)>& fn);
std::vector<Field> apply_projection(const ProjectionFamily& fam, const Field& f);

// Smallest k-range whose annulus pieces sum to 1 on every nonzero grid frequency.
std::pair<int, int> lp_range(const GridSpec& spec);
// {(k, P_k f): k in mZ + i within lp_range}.
std::vector<std::pair<int, Field>> littlewood_paley_split(const Field& f, int class_offset, int m);

struct MaximalConfig {
    std::vector<Vec3> directions;
    double s = 2;
    double t_min = 0;  // 0 means one grid spacing
    double t_max = 0;  // 0 means a quarter period
    int depth = 1;
};

// M_n g: sup over dyadic t of centered segment averages of |g| along n.
RBuf maximal_line(const GridSpec& spec, const RBuf& g, const Vec3& n, double t_min = 0, double t_max = 0);
// M_{s,n} g = M_n((M_n |g|^s)^{1/s}).
RBuf maximal_s_line(const GridSpec& spec, const RBuf& g, const Vec3& n, double s, double t_min = 0,
                    double t_max = 0);
// M_s^{(depth)}: sup over directions, composed depth times.
RBuf directional_maximal(const GridSpec& spec, const RBuf& g, const MaximalConfig& cfg);
Field directional_maximal(const Field& g, const MaximalConfig& cfg);

struct CheckResult {
    std::string name;
    double lhs = 0, rhs = 0, ratio = 0;
    std::vector<double> parts;  // per-circle ratios where applicable
};

// Periodic convolution on the physical grid, Riemann-sum normalized.
RBuf convolve(const GridSpec& spec, const RBuf& a, const RBuf& kernel);
// chi_{R*} with exponent M, normalized to unit mass on the grid, centered at the origin.
RBuf normalized_kernel(const GridSpec& spec, const Plank& box, double M);

CheckResult weighted_l2_check(const ProjectionFamily& fam, const Field& f, const RBuf& g, double M = 0);
CheckResult plank_lp_check(const ProjectionFamily& fam, const Field& f, double p,
                           const std::optional<Plank>& U = std::nullopt, double M = 0);
// Sharp pieces over a one-dimensional family against the composed directional maximal weight.
CheckResult cordoba_fefferman_check(const std::vector<Polyhedron>& polys, const Field& f, const RBuf& g,
                                    double s = 2, double tol = 1e-6);
// I versus II for T_{j,k} = T_j P_k over one class mZ+i, plus the norm before the split.
struct LemmaLpResult {
    double I = 0, II = 0, ratio = 0, before = 0, sum_over_classes = 0;
};
LemmaLpResult littlewood_paley_lemma_check(const ProjectionFamily& caps, const Field& f, int m, int class_offset);

// Sum of |pieces|^2 on the physical side, streamed.
RBuf square_sum(const ProjectionFamily& fam, const Field& f);

}  // namespace conesq
