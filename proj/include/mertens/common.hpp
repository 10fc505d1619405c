#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace mertens {

using cplx = std::complex<double>;

namespace num {

inline constexpr double pi      = 3.141592653589793238462643383279502884;
inline constexpr double two_pi  = 2.0 * pi;
inline constexpr double half_pi = 0.5 * pi;
inline constexpr double e       = 2.718281828459045235360287471352662498;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;
inline constexpr double zeta2   = pi * pi / 6.0;       // zeta(2)
inline constexpr double inv_zeta2 = 6.0 / (pi * pi);   // 1/zeta(2)
inline constexpr double zeta3   = 1.202056903159594285399738161511449991;

}  // namespace num

// Compensated (Kahan) accumulator; fixed summation order keeps results
// bit-identical across runs.
template <typename T>
struct kahan_sum {
    T sum{};
    T comp{};

    void add(T v) {
        T y = v - comp;
        T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    T value() const { return sum; }
};

using kahan = kahan_sum<double>;

struct kahan_cplx {
    kahan re, im;
    void add(cplx v) {
        re.add(v.real());
        im.add(v.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

inline std::uint64_t isqrt_u64(std::uint64_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// All numeric output goes through these: 15 significant digits, C locale.
inline std::string fmt_g15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Distance from z to the nearest integer (as a point in the complex plane).
inline double dist_to_integers(cplx z) {
    double fr = z.real() - std::nearbyint(z.real());
    return std::hypot(fr, z.imag());
}

inline bool is_real_integer(cplx z, double tol = 0.0) {
    return z.imag() == 0.0 && std::abs(z.real() - std::nearbyint(z.real())) <= tol;
}

// Default worker count: MERTENS_WORKERS env var, else 1 (callers opt into
// parallelism explicitly; reductions are ordered either way).
inline unsigned default_workers() {
    if (const char* s = std::getenv("MERTENS_WORKERS")) {
        long v = std::strtol(s, nullptr, 10);
        if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    }
    return 1;
}

// Runs fn(block) for block = 0..blocks-1 on up to `workers` threads, then
// hands results to merge(block, result) strictly in block order. Output is
// deterministic and independent of the worker count.
template <typename Result>
void parallel_blocks_ordered(std::size_t blocks, unsigned workers,
                             const std::function<Result(std::size_t)>& fn,
                             const std::function<void(std::size_t, Result&)>& merge) {
    if (blocks == 0) return;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) {
            Result r = fn(b);
            merge(b, r);
        }
        return;
    }
    // Process in waves of `workers` blocks so memory stays bounded and the
    // merge happens in block order.
    std::size_t next = 0;
    while (next < blocks) {
        std::size_t wave = std::min<std::size_t>(workers, blocks - next);
        std::vector<Result> results(wave);
        std::vector<std::thread> pool;
        pool.reserve(wave);
        for (std::size_t i = 0; i < wave; ++i)
            pool.emplace_back([&, i] { results[i] = fn(next + i); });
        for (auto& t : pool) t.join();
        for (std::size_t i = 0; i < wave; ++i) merge(next + i, results[i]);
        next += wave;
    }
}

}  // namespace mertens
