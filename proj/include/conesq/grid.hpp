#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <new>
#include <string>
#include <vector>

#include "conesq/common.hpp"

namespace conesq {

template <class T, std::size_t Align = 64>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U, Align>&) {}
    template <class U>
    struct rebind {
        using other = AlignedAllocator<U, Align>;
    };
    T* allocate(std::size_t n) {
        std::size_t bytes = ((n * sizeof(T) + Align - 1) / Align) * Align;
        void* p = std::aligned_alloc(Align, bytes ? bytes : Align);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }
    bool operator==(const AlignedAllocator&) const { return true; }
    bool operator!=(const AlignedAllocator&) const { return false; }
};

using CBuf = std::vector<cplx, AlignedAllocator<cplx>>;
using RBuf = std::vector<double, AlignedAllocator<double>>;

struct GridSpec {
    int dim = 2;
    long N = 64;
    double L = 1.0;

    GridSpec() = default;
    GridSpec(int dim_, long N_, double L_);

    double spacing() const { return L / static_cast<double>(N); }
    double freq_spacing() const { return 1.0 / L; }
    double nyquist() const { return static_cast<double>(N) / (2.0 * L); }
    std::size_t size() const;
    // Riemann-sum cell volume on either side.
    double cell_volume_physical() const;
    double cell_volume_frequency() const;

    // Multi-index helpers (row-major, last axis fastest).
    void unravel(std::size_t idx, long* out) const;
    // Centered frequency at a flat index; unused components are zero.
    Vec3 frequency(std::size_t idx) const;
    // Physical coordinate in [0, L)^dim.
    Vec3 position(std::size_t idx) const;
    // Minimum-image physical coordinate in [-L/2, L/2)^dim.
    Vec3 position_centered(std::size_t idx) const;
    std::size_t index_of_frequency(const long* k) const;  // k centered integers

    bool operator==(const GridSpec& o) const { return dim == o.dim && N == o.N && L == o.L; }
};

enum class Side : std::uint8_t { physical = 0, frequency = 1 };

struct Field {
    GridSpec spec;
    Side side = Side::physical;
    CBuf values;
    std::string role;

    Field() = default;
    Field(const GridSpec& s, Side sd, std::string r = "");
    std::size_t size() const { return values.size(); }
    double cell_volume() const;
};

Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);
// Raw in-place transforms on a buffer of spec.size() values.
void forward_inplace(const GridSpec& spec, cplx* data);
void inverse_inplace(const GridSpec& spec, cplx* data);

double lp_norm(const Field& f, double p);
// Same quadrature applied to a bare nonnegative array sampled on the physical grid.
double lp_norm_abs(const GridSpec& spec, const double* mod, double p, bool frequency_side = false);
// Inner product <f, g> = sum f conj(g) dV.
cplx inner(const Field& f, const Field& g);
double relative_l2_diff(const Field& a, const Field& b);

// Frequency field with i.i.d. complex Gaussian coefficients where admit(xi) holds.
Field random_frequency_field(const GridSpec& spec, const std::function<bool(const Vec3&)>& admit,
                             Rng& rng, const std::string& role = "f");
Field random_physical_field(const GridSpec& spec, Rng& rng, const std::string& role = "f");

// Binary container; layout documented in README.
void write_field(const Field& f, const std::string& path, bool single_precision = false);
Field read_field(const std::string& path);

}  // namespace conesq
