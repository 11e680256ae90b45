#pragma once

#include <optional>
#include <vector>

#include "conesq/geometry.hpp"

namespace conesq {

struct Ball {
    Vec3 center = Vec3::Zero();
    double radius = 1;
};

struct TubeFamily {
    int dim = 3;
    std::vector<Plank> boxes;
    std::vector<cplx> amplitudes;
    std::optional<Ball> focal;
    void add(const Plank& b, cplx a = 1.0) {
        boxes.push_back(b);
        amplitudes.push_back(a);
    }
    std::size_t size() const { return boxes.size(); }
    void validate() const;
};

enum class SamplerMode { lattice, monte_carlo, stratified, importance };

struct SamplerConfig {
    SamplerMode mode = SamplerMode::monte_carlo;
    long samples = 200000;
    std::uint64_t seed = 1;
    bool error_estimate = true;
};

struct Estimate {
    double value = 0;
    double stderr_ = 0;
};

// Integration domain: an axis-aligned-or-oriented box, or a ball.
struct Domain {
    std::optional<Plank> box;
    std::optional<Ball> ball;
    static Domain of_box(const Plank& b) { return Domain{b, std::nullopt}; }
    static Domain of_ball(const Ball& b) { return Domain{std::nullopt, b}; }
    double volume(int dim) const;
    bool contains(const Vec3& x) const;
};

// Smallest axis-aligned box containing all boxes, padded by 10%.
Plank default_domain(const TubeFamily& fam);

// Uniform-cell index with conservative rasterization; exact membership on query.
class BoxIndex {
public:
    BoxIndex(const std::vector<Plank>& boxes, int dim, long max_cells = 1 << 21);
    // Indices of boxes containing x.
    void query(const Vec3& x, std::vector<int>& out) const;
    long entries() const { return entries_; }

private:
    const std::vector<Plank>* boxes_;
    int dim_;
    Vec3 lo_, cell_;
    long n_[3] = {1, 1, 1};
    std::vector<std::vector<int>> cells_;
    long entries_ = 0;
    long cell_of(const Vec3& x) const;
};

// (int_domain |sum a_T 1_T|^p)^{1/p}
Estimate counting_lp(const TubeFamily& fam, double p, const SamplerConfig& cfg,
                     const std::optional<Domain>& domain = std::nullopt);
// (int_domain (sum |a_T|^2 1_T)^{p/2})^{1/p}
Estimate counting_square_lp(const TubeFamily& fam, double p, const SamplerConfig& cfg,
                            const std::optional<Domain>& domain = std::nullopt);
long focal_overlap(const TubeFamily& fam, const Ball& ball);
// Count of intersecting pairs (SAT), using the index for candidate pruning.
long intersecting_pairs(const std::vector<Plank>& boxes, int dim);

}  // namespace conesq
