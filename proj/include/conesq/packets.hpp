#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "conesq/bumps.hpp"
#include "conesq/grid.hpp"
#include "conesq/overlap.hpp"

namespace conesq {

struct WavePacketSpec {
    Plank box;                       // frequency side
    Vec3 position = Vec3::Zero();    // x0
    cplx amplitude = 1.0;
    bool smooth = true;
};

// Frequency-side packet e^{-2 pi i x0.xi} a phi_R(xi) / |R| accumulated into fhat (restricted to R's bounding box).
void add_packet(Field& fhat, const WavePacketSpec& spec, const BumpProfile& prof = {});
// (e^{-2 pi i x0.xi} a phi_R / |R|)^vee on the physical grid.
Field synthesize_packet(const WavePacketSpec& spec, const GridSpec& grid, const BumpProfile& prof = {});

// Upper half of theta' along one axis; the dual of the half is the dual of theta' doubled on that axis.
struct DilationResult {
    Plank theta;
    bool dual_relation = false;
};
DilationResult dilation_trick(const Plank& theta_prime, int axis);

enum class ExtremizerKind { bochner_riesz, sharp_cutoff_A1, cone_L8_A2 };
enum class PhaseMode { aligned, random };

const char* kind_name(ExtremizerKind k);
ExtremizerKind kind_from_name(const std::string& s);

struct ExtremizerConfig {
    ExtremizerKind kind = ExtremizerKind::cone_L8_A2;
    int n = 3;
    double delta = 1.0 / 16;  // for bochner_riesz, delta = 1/R
    double p = 8;
    PhaseMode phase_mode = PhaseMode::aligned;
    std::uint64_t seed = 1;
    // Dilation taking a packet's physical box to the projected piece's box; 0 picks the kind's default.
    double dilation = 0;
    // Angular separation of the tube directions in units of delta (A.1) or R^{-1/2} (Bochner-Riesz); 0 = default.
    double thinning = 0;
    // Random rotation of the whole family (seeded); keeps the geometry, changes the sample.
    bool random_rotation = false;
    BumpProfile profile{};
    void validate() const;
};

struct Extremizer {
    ExtremizerConfig cfg;
    std::vector<WavePacketSpec> packets;  // frequency-side packets making up f
    TubeFamily tubes;                     // |f| ~ sum 1_T
    TubeFamily pieces;                    // |projected pieces| ~ D^{-1} 1_{Dil T}, focal ball set
    bool coherent = false;                // numerator sums amplitudes (Bochner-Riesz) instead of squares
    double expected_exponent = 0;
    double dilation = 0, thinning = 0;
    std::vector<Polyhedron> polys;        // A.1: the attached delta-cubes
    std::vector<Plank> frequency_planks;  // A.2: the undilated plank of each packet, one square-function piece each
};

double expected_exponent(ExtremizerKind kind, int n, double p);

Extremizer build_extremizer(const ExtremizerConfig& cfg);
// Grid check for FFT synthesis; throws SizingError with the reason.
void check_extremizer_grid(const Extremizer& ex, const GridSpec& grid);
// f = sum of packets, physical side. Aligned mode phases every packet to be real-positive at the focus.
Field synthesize_extremizer(const Extremizer& ex, const GridSpec& grid);

}  // namespace conesq
