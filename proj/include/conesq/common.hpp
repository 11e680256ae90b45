#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace conesq {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

// Error taxonomy shared by every module.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};
struct BandwidthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReplacementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

bool is_power_of_two(long n);
// True when x = 2^k for some integer k (negative k allowed).
bool is_dyadic(double x);
// Largest power of two <= x.
double dyadic_floor(double x);

// Unit vector orthogonal to v (deterministic choice).
Vec3 any_orthogonal(const Vec3& v);
// Orthonormal frame whose third column is the given direction.
Mat3 frame_from_axis(const Vec3& axis);
// Angle between two unit vectors, robust near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

Vec3 random_unit(Rng& rng, int dim);
double median(std::vector<double> v);

// Fixed-format number for CSV / text output (round-trippable).
std::string fmt_num(double x);

}  // namespace conesq
