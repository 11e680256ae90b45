#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "conesq/overlap.hpp"
#include "conesq/packets.hpp"

namespace conesq {

struct FitResult {
    double alpha = 0;
    double prefactor = 1;
    double residual = 0;
};
// Least squares of log ratio = alpha * log(1/delta) + c over (delta, ratio) points.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points);

struct ExperimentConfig {
    std::string experiment = "cone_l8";
    int n = 3;
    double p = 8;
    std::vector<double> deltas;
    std::string engine = "overlap";  // fft | overlap
    std::string kind;                // extremizer kind for extremizer_sweep
    std::string input = "both";      // extremizer | random | both (FFT sweeps)
    double K = 8, gamma = 1;
    int m_separation = 8;
    std::uint64_t seed = 1;
    int seeds = 20;
    int threads = 1;
    long samples = 200000;
    double dilation = 0;
    double memory_mb = 4096;  // ceiling for FFT buffers
    void validate() const;
};

struct SweepPoint {
    double delta = 0;
    double ratio = 0;
    double stderr_ = 0;
    std::uint64_t seed = 0;
    std::string series;  // e.g. "extremizer", "random_median"
};

struct SweepResult {
    std::string experiment, engine, series;
    int n = 0;
    double p = 0;
    std::vector<SweepPoint> points;
    FitResult fit;
    double expected_alpha = 0;
    bool has_expected = false;
};

// Overlap-engine ratio for an extremizer: numerator on the focal ball, denominator over all tubes.
struct OverlapRatio {
    double ratio = 0, stderr_ = 0, numerator = 0, denominator = 0;
};
OverlapRatio overlap_ratio(const Extremizer& ex, double p, const SamplerConfig& base);

// FFT ratio for the cone extremizer: ||(sum_tau |f_tau|^2)^{1/2}||_{L^p(focal ball)} / ||f||_p,
// with one f_tau per packet (its undilated plank).
double fft_cone_ratio(const Extremizer& ex, const GridSpec& grid, double p);

// One packet per sector edge, bisected by it, with seeded unimodular phases. spread=true scatters the packets
// uniformly over the period cell; spread=false stacks them into a bush through the origin. Overlap lowers the
// ratio (|f|^4 sees the interference, the square function does not), so the spread family is the larger one.
Field sector_extremizer(const GridSpec& grid, int sectors, double delta, std::uint64_t seed, bool spread = true);
// FFT grid for the 2D sector experiment at scale delta.
GridSpec cordoba_grid(double delta);
// FFT grid for cone experiments: L = 4/delta, N = 16/delta.
GridSpec cone_grid(double delta, double memory_mb);

// One sweep per series; results in deterministic (series, delta, seed) order.
std::vector<SweepResult> run_sweep(const ExperimentConfig& cfg);

void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace conesq
