#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "mertens/common.hpp"
#include "mertens/errors.hpp"

namespace mertens::sieve {

inline std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<char> is_p(n + 1, 1);
    is_p[0] = 0;
    if (n >= 1) is_p[1] = 0;
    for (std::uint64_t i = 2; i * i <= n; ++i)
        if (is_p[i])
            for (std::uint64_t j = i * i; j <= n; j += i) is_p[j] = 0;
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= n; ++i)
        if (is_p[i]) primes.push_back(static_cast<std::uint32_t>(i));
    return primes;
}

struct SieveSegment {
    std::uint64_t lo = 1, hi = 0;          // inclusive
    std::vector<std::int8_t> mu;           // mu[lo..hi]
};

inline constexpr std::uint64_t default_segment_size = std::uint64_t{1} << 22;

// Exact mu on [lo, hi]: square marking for p^2 | n, prime-count parity with a
// leftover-factor correction for the (at most one) prime factor above
// sqrt(hi).
inline SieveSegment mobius_segment(std::uint64_t lo, std::uint64_t hi,
                                   const std::vector<std::uint32_t>& primes,
                                   std::uint64_t memory_cap_entries = default_segment_size) {
    if (!(1 <= lo && lo <= hi)) throw invalid_parameter("mobius_segment: requires 1 <= lo <= hi");
    const std::uint64_t len = hi - lo + 1;
    if (len > memory_cap_entries)
        throw segmentation_error("mobius_segment: segment exceeds memory budget");

    std::vector<std::uint64_t> prod(len, 1);
    std::vector<std::uint8_t> flags(len, 0);  // bit0 parity, bit1 has-square

    for (std::uint32_t p : primes) {
        const std::uint64_t p64 = p;
        if (p64 * p64 > hi) break;
        std::uint64_t start = ((lo + p64 - 1) / p64) * p64;
        for (std::uint64_t j = start; j <= hi; j += p64) {
            prod[j - lo] *= p64;
            flags[j - lo] ^= 1;
        }
        const std::uint64_t p2 = p64 * p64;
        std::uint64_t start2 = ((lo + p2 - 1) / p2) * p2;
        for (std::uint64_t j = start2; j <= hi; j += p2) flags[j - lo] |= 2;
    }

    SieveSegment seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.mu.resize(len);
    for (std::uint64_t i = 0; i < len; ++i) {
        if (flags[i] & 2) {
            seg.mu[i] = 0;
            continue;
        }
        std::uint8_t parity = flags[i] & 1;
        if (prod[i] != lo + i) parity ^= 1;  // one leftover prime > sqrt(hi)
        seg.mu[i] = parity ? -1 : 1;
    }
    return seg;
}

struct MertensCheckpoint {
    std::uint64_t x = 0;
    std::int64_t M = 0;   // sum of mu(n), exact
    double m = 0.0;       // sum of mu(n)/n, compensated
    std::uint64_t Q = 0;  // square-free count, exact
    double R = 0.0;       // Q - x / zeta(2)
};

enum class ScanKind { M_over_sqrt, m_times_sqrt, R_over_qtr, R_over_sqrt };

struct ScanRequest {
    ScanKind kind;
    std::uint64_t lo = 1;
    std::uint64_t hi = 0;
};

struct ScanResult {
    double sup = 0.0;
    std::uint64_t argmax = 0;
};

// Resumable pipeline state (prefix sums just past x).
struct PipelineState {
    std::uint64_t x = 0;
    std::int64_t M = 0;
    double m = 0.0;
    double m_comp = 0.0;
    std::uint64_t Q = 0;
};

struct PipelineResult {
    std::vector<MertensCheckpoint> checkpoints;
    std::vector<ScanResult> scans;
    PipelineState final_state;
};

// Streams mu over [state.x + 1, limit]: segments are sieved independently
// (data-parallel), then consumed strictly in order, so the prefix sums and
// every emitted value are deterministic and independent of the worker count.
//
// Checkpoints are emitted at multiples of `stride` (0 = none), at each x in
// `queries` (must be sorted ascending), and at `limit`.
inline PipelineResult mertens_pipeline(std::uint64_t limit, std::uint64_t stride,
                                       std::vector<std::uint64_t> queries = {},
                                       std::vector<ScanRequest> scan_req = {},
                                       unsigned workers = default_workers(),
                                       std::uint64_t segment_size = default_segment_size,
                                       PipelineState state = {},
                                       const std::function<void(const MertensCheckpoint&)>&
                                           on_checkpoint = nullptr) {
    if (limit < 1) throw invalid_parameter("mertens_pipeline: limit >= 1 required");
    std::sort(queries.begin(), queries.end());
    queries.erase(std::unique(queries.begin(), queries.end()), queries.end());

    const auto primes = primes_up_to(isqrt_u64(limit));

    PipelineResult out;
    out.scans.resize(scan_req.size());
    std::vector<double> scan_sup4(scan_req.size(), -1.0);  // kind-specific powers

    std::int64_t M = state.M;
    kahan m;
    m.sum = state.m;
    m.comp = state.m_comp;
    std::uint64_t Q = state.Q;
    std::size_t qi = 0;
    while (qi < queries.size() && queries[qi] <= state.x) ++qi;

    const std::uint64_t first = state.x + 1;
    if (first > limit) {
        out.final_state = state;
        return out;
    }
    const std::uint64_t total = limit - first + 1;
    const std::uint64_t nseg = (total + segment_size - 1) / segment_size;

    auto emit = [&](std::uint64_t n) {
        MertensCheckpoint cp;
        cp.x = n;
        cp.M = M;
        cp.m = m.value();
        cp.Q = Q;
        cp.R = static_cast<double>(Q) - static_cast<double>(n) * num::inv_zeta2;
        out.checkpoints.push_back(cp);
        if (on_checkpoint) on_checkpoint(cp);
    };

    auto consume = [&](const SieveSegment& seg) {
        for (std::uint64_t n = seg.lo; n <= seg.hi; ++n) {
            const int mu = seg.mu[n - seg.lo];
            M += mu;
            if (mu != 0) {
                ++Q;
                m.add(static_cast<double>(mu) / static_cast<double>(n));
            }
            const double R = static_cast<double>(Q) - static_cast<double>(n) * num::inv_zeta2;
            for (std::size_t k = 0; k < scan_req.size(); ++k) {
                const auto& rq = scan_req[k];
                if (n < rq.lo || n > rq.hi) continue;
                auto& res = out.scans[k];
                const auto nd = static_cast<double>(n);
                switch (rq.kind) {
                    case ScanKind::M_over_sqrt: {
                        const double M2 = static_cast<double>(M) * static_cast<double>(M);
                        if (M2 > scan_sup4[k] * nd) {
                            res.sup = std::abs(static_cast<double>(M)) / std::sqrt(nd);
                            res.argmax = n;
                            scan_sup4[k] = res.sup * res.sup;
                        }
                        break;
                    }
                    case ScanKind::m_times_sqrt: {
                        const double mv = m.value();
                        if (mv * mv * nd > scan_sup4[k]) {
                            res.sup = std::abs(mv) * std::sqrt(nd);
                            res.argmax = n;
                            scan_sup4[k] = res.sup * res.sup;
                        }
                        break;
                    }
                    case ScanKind::R_over_qtr: {
                        const double R2 = R * R;
                        if (R2 * R2 > scan_sup4[k] * nd) {
                            res.sup = std::abs(R) / std::pow(nd, 0.25);
                            res.argmax = n;
                            scan_sup4[k] = res.sup * res.sup * res.sup * res.sup;
                        }
                        break;
                    }
                    case ScanKind::R_over_sqrt: {
                        if (R * R > scan_sup4[k] * nd) {
                            res.sup = std::abs(R) / std::sqrt(nd);
                            res.argmax = n;
                            scan_sup4[k] = res.sup * res.sup;
                        }
                        break;
                    }
                }
            }
            bool want = false;
            if (stride > 0 && n % stride == 0) want = true;
            if (qi < queries.size() && queries[qi] == n) {
                want = true;
                ++qi;
            }
            if (n == limit) want = true;
            if (want) emit(n);
        }
    };

    parallel_blocks_ordered<SieveSegment>(
        nseg, workers,
        [&](std::size_t b) {
            const std::uint64_t lo = first + b * segment_size;
            const std::uint64_t hi = std::min(limit, lo + segment_size - 1);
            return mobius_segment(lo, hi, primes, segment_size);
        },
        [&](std::size_t, SieveSegment& seg) { consume(seg); });

    out.final_state = {limit, M, m.sum, m.comp, Q};
    return out;
}

// Exact supremum of the chosen ratio over integers in [lo, hi]; ratios only
// change at integers, so integer evaluation is exact.
inline ScanResult sup_ratio_scan(ScanKind kind, std::uint64_t lo, std::uint64_t hi,
                                 unsigned workers = default_workers()) {
    if (!(1 <= lo && lo <= hi)) throw invalid_parameter("sup_ratio_scan: requires 1 <= lo <= hi");
    auto res = mertens_pipeline(hi, 0, {}, {{kind, lo, hi}}, workers);
    return res.scans[0];
}

// --- small exact helpers used as oracles and for point queries ---------------

// mu(1..n) by a simple (non-segmented) sieve.
inline std::vector<std::int8_t> mu_table(std::uint64_t n) {
    auto primes = primes_up_to(isqrt_u64(n));
    auto seg = mobius_segment(1, n, primes, n + 1);
    std::vector<std::int8_t> mu(n + 1, 0);
    for (std::uint64_t i = 1; i <= n; ++i) mu[i] = seg.mu[i - 1];
    return mu;
}

inline std::vector<std::int64_t> mertens_prefix(const std::vector<std::int8_t>& mu) {
    std::vector<std::int64_t> M(mu.size(), 0);
    for (std::size_t i = 1; i < mu.size(); ++i) M[i] = M[i - 1] + mu[i];
    return M;
}

// Direct square-free count by marking multiples of p^2 (no Mobius identity).
inline std::uint64_t squarefree_count_direct(std::uint64_t x) {
    std::vector<char> sq(x + 1, 1);
    for (std::uint64_t d = 2; d * d <= x; ++d)
        for (std::uint64_t j = d * d; j <= x; j += d * d) sq[j] = 0;
    std::uint64_t q = 0;
    for (std::uint64_t n = 1; n <= x; ++n) q += sq[n];
    return q;
}

// Q(x) via the standard divisor formula sum_{d^2 <= x} mu(d) floor(x/d^2).
inline std::int64_t squarefree_count_point(std::uint64_t x, const std::vector<std::int8_t>& mu) {
    const std::uint64_t r = isqrt_u64(x);
    if (r >= mu.size()) throw oracle_range_error("squarefree_count_point: mu table too small");
    std::int64_t q = 0;
    for (std::uint64_t d = 1; d <= r; ++d)
        if (mu[d] != 0) q += static_cast<std::int64_t>(mu[d]) * static_cast<std::int64_t>(x / (d * d));
    return q;
}

// Exact identity Q(x) = sum_{k<=x} M(floor(sqrt(x/k))), with Q from direct
// square marking and M from the mu prefix table.
inline bool check_squarefree_identity(std::uint64_t x) {
    if (x < 1) throw invalid_parameter("check_squarefree_identity: x >= 1");
    const auto mu = mu_table(isqrt_u64(x));
    const auto M = mertens_prefix(mu);
    std::int64_t rhs = 0;
    for (std::uint64_t k = 1; k <= x; ++k) {
        const std::uint64_t v = isqrt_u64(x / k);
        rhs += M[v];
    }
    const auto lhs = static_cast<std::int64_t>(squarefree_count_direct(x));
    return lhs == rhs;
}

}  // namespace mertens::sieve
