#include "conesq/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace conesq {

GridSpec::GridSpec(int dim_, long N_, double L_) : dim(dim_), N(N_), L(L_) {
    if (dim != 2 && dim != 3) throw DomainError("GridSpec: dim must be 2 or 3");
    if (!is_power_of_two(N)) throw DomainError("GridSpec: N must be a power of two");
    if (!(L > 0)) throw DomainError("GridSpec: L must be positive");
}

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(N);
    return s;
}

double GridSpec::cell_volume_physical() const { return std::pow(spacing(), dim); }
double GridSpec::cell_volume_frequency() const { return std::pow(1.0 / L, dim); }

void GridSpec::unravel(std::size_t idx, long* out) const {
    for (int a = dim - 1; a >= 0; --a) {
        out[a] = static_cast<long>(idx % static_cast<std::size_t>(N));
        idx /= static_cast<std::size_t>(N);
    }
}

Vec3 GridSpec::frequency(std::size_t idx) const {
    long m[3] = {0, 0, 0};
    unravel(idx, m);
    Vec3 v = Vec3::Zero();
    for (int a = 0; a < dim; ++a) v[a] = static_cast<double>(m[a] - N / 2) / L;
    return v;
}

Vec3 GridSpec::position(std::size_t idx) const {
    long m[3] = {0, 0, 0};
    unravel(idx, m);
    Vec3 v = Vec3::Zero();
    for (int a = 0; a < dim; ++a) v[a] = static_cast<double>(m[a]) * spacing();
    return v;
}

Vec3 GridSpec::position_centered(std::size_t idx) const {
    long m[3] = {0, 0, 0};
    unravel(idx, m);
    Vec3 v = Vec3::Zero();
    for (int a = 0; a < dim; ++a) {
        long j = m[a] < N / 2 ? m[a] : m[a] - N;
        v[a] = static_cast<double>(j) * spacing();
    }
    return v;
}

std::size_t GridSpec::index_of_frequency(const long* k) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim; ++a) {
        long i = k[a] + N / 2;
        if (i < 0 || i >= N) throw BandwidthError("frequency index outside grid");
        idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(i);
    }
    return idx;
}

Field::Field(const GridSpec& s, Side sd, std::string r)
    : spec(s), side(sd), values(s.size(), cplx(0, 0)), role(std::move(r)) {}

double Field::cell_volume() const {
    return side == Side::physical ? spec.cell_volume_physical() : spec.cell_volume_frequency();
}

namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, long, int>, fftw_plan> g_plans;

fftw_plan get_plan(const GridSpec& spec, int sign) {
    std::lock_guard<std::mutex> lk(g_plan_mutex);
    auto key = std::make_tuple(spec.dim, spec.N, sign);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;
    int n[3] = {static_cast<int>(spec.N), static_cast<int>(spec.N), static_cast<int>(spec.N)};
    // ESTIMATE never touches the buffer contents; the scratch just fixes alignment.
    CBuf scratch(spec.size());
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(spec.dim, n, p, p, sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fftw planner failed");
    g_plans.emplace(key, plan);
    return plan;
}

// Multiply by (-1)^{sum of indices}: moves the spectrum origin to the array center.
void checkerboard(const GridSpec& spec, cplx* data, double scale) {
    const long N = spec.N;
    if (spec.dim == 2) {
        for (long i = 0; i < N; ++i) {
            cplx* row = data + i * N;
            double s0 = (i & 1) ? -scale : scale;
            for (long j = 0; j < N; ++j) row[j] *= (j & 1) ? -s0 : s0;
        }
    } else {
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j) {
                cplx* row = data + (i * N + j) * N;
                double s0 = ((i + j) & 1) ? -scale : scale;
                for (long k = 0; k < N; ++k) row[k] *= (k & 1) ? -s0 : s0;
            }
    }
}

}  // namespace

void forward_inplace(const GridSpec& spec, cplx* data) {
    fftw_plan plan = get_plan(spec, FFTW_FORWARD);
    checkerboard(spec, data, 1.0);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
    const double hd = spec.cell_volume_physical();
    for (std::size_t i = 0, n = spec.size(); i < n; ++i) data[i] *= hd;
}

void inverse_inplace(const GridSpec& spec, cplx* data) {
    fftw_plan plan = get_plan(spec, FFTW_BACKWARD);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, p, p);
    checkerboard(spec, data, spec.cell_volume_frequency());
}

Field forward_transform(const Field& f) {
    if (f.side != Side::physical) throw ContractError("forward_transform: field is not physical-side");
    Field out = f;
    out.side = Side::frequency;
    forward_inplace(out.spec, out.values.data());
    return out;
}

Field inverse_transform(const Field& f) {
    if (f.side != Side::frequency) throw ContractError("inverse_transform: field is not frequency-side");
    Field out = f;
    out.side = Side::physical;
    inverse_inplace(out.spec, out.values.data());
    return out;
}

double lp_norm_abs(const GridSpec& spec, const double* mod, double p, bool frequency_side) {
    if (!(p >= 1)) throw DomainError("lp_norm: p must be >= 1");
    const std::size_t n = spec.size();
    if (std::isinf(p)) {
        double m = 0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, mod[i]);
        return m;
    }
    const double dv = frequency_side ? spec.cell_volume_frequency() : spec.cell_volume_physical();
    // Scale by the max to keep |.|^p representable for large p.
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, mod[i]);
    if (m == 0) return 0;
    long double acc = 0;
    if (p == 2) {
        for (std::size_t i = 0; i < n; ++i) {
            double r = mod[i] / m;
            acc += r * r;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) acc += std::pow(mod[i] / m, p);
    }
    return m * std::pow(static_cast<double>(acc) * dv, 1.0 / p);
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1)) throw DomainError("lp_norm: p must be >= 1");
    RBuf mod(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) mod[i] = std::abs(f.values[i]);
    return lp_norm_abs(f.spec, mod.data(), p, f.side == Side::frequency);
}

cplx inner(const Field& f, const Field& g) {
    if (!(f.spec == g.spec) || f.side != g.side) throw ContractError("inner: mismatched fields");
    std::complex<long double> acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        cplx t = f.values[i] * std::conj(g.values[i]);
        acc += std::complex<long double>(t.real(), t.imag());
    }
    double dv = f.cell_volume();
    return cplx(static_cast<double>(acc.real()) * dv, static_cast<double>(acc.imag()) * dv);
}

double relative_l2_diff(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw ContractError("relative_l2_diff: size mismatch");
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    if (den == 0) return num == 0 ? 0.0 : INFINITY;
    return std::sqrt(static_cast<double>(num / den));
}

Field random_frequency_field(const GridSpec& spec, const std::function<bool(const Vec3&)>& admit,
                             Rng& rng, const std::string& role) {
    Field F(spec, Side::frequency, role);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (admit(spec.frequency(i))) F.values[i] = cplx(g(rng), g(rng));
    }
    return F;
}

Field random_physical_field(const GridSpec& spec, Rng& rng, const std::string& role) {
    Field f(spec, Side::physical, role);
    std::normal_distribution<double> g;
    for (auto& v : f.values) v = cplx(g(rng), g(rng));
    return f;
}

namespace {
constexpr char kMagic[8] = {'C', 'N', 'S', 'Q', 'F', 'L', 'D', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        os.write(reinterpret_cast<const char*>(b), sizeof(T));
    } else {
        os.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
}

template <class T>
T get_le(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw IoError("read_field: truncated file");
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}
}  // namespace

void write_field(const Field& f, const std::string& path, bool single_precision) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("write_field: cannot open " + path);
    os.write(kMagic, 8);
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(f.spec.dim));
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(f.side));
    put_le<std::uint8_t>(os, single_precision ? 8 : 16);
    put_le<std::uint8_t>(os, 0);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.spec.N));
    put_le<double>(os, f.spec.L);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.role.size()));
    os.write(f.role.data(), static_cast<std::streamsize>(f.role.size()));
    for (const cplx& v : f.values) {
        if (single_precision) {
            put_le<float>(os, static_cast<float>(v.real()));
            put_le<float>(os, static_cast<float>(v.imag()));
        } else {
            put_le<double>(os, v.real());
            put_le<double>(os, v.imag());
        }
    }
    if (!os) throw IoError("write_field: write failed for " + path);
}

Field read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("read_field: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoError("read_field: bad magic");
    int dim = get_le<std::uint8_t>(is);
    auto side = static_cast<Side>(get_le<std::uint8_t>(is));
    int width = get_le<std::uint8_t>(is);
    get_le<std::uint8_t>(is);
    long N = get_le<std::uint32_t>(is);
    double L = get_le<double>(is);
    std::uint32_t rl = get_le<std::uint32_t>(is);
    std::string role(rl, '\0');
    is.read(role.data(), rl);
    Field f(GridSpec(dim, N, L), side, role);
    for (auto& v : f.values) {
        if (width == 8) {
            float re = get_le<float>(is), im = get_le<float>(is);
            v = cplx(re, im);
        } else if (width == 16) {
            double re = get_le<double>(is), im = get_le<double>(is);
            v = cplx(re, im);
        } else {
            throw IoError("read_field: unknown scalar width");
        }
    }
    return f;
}

}  // namespace conesq
