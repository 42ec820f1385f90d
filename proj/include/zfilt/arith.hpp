#ifndef ZFILT_ARITH_HPP
#define ZFILT_ARITH_HPP

// Exact integer number theory for the Zassenhaus filtration of a free group:
// Moebius function, Witt numbers w_n(r), layer dimensions c_n(r, p),
// cumulative log-indices and the threshold scans of the growth inequalities.
//
// Everything here is exact. No floating point is used anywhere in this header.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zfilt {

using ArbInt = boost::multiprecision::cpp_int;

/// Thrown when an exact identity that must hold (e.g. n | sum in the Witt
/// formula) fails. This indicates a bug, never a user error.
class ArithmeticInvariantError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

inline bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline void require_prime(std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

/// Trial-division factorization as (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline int moebius(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("moebius: n must be >= 1");
    int mu = 1;
    for (auto [q, e] : factorize(n)) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        small.push_back(d);
        if (d != n / d) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline ArbInt int_pow(std::uint64_t base, std::uint64_t exp) {
    ArbInt b = base;
    return boost::multiprecision::pow(b, static_cast<unsigned>(exp));
}

/// Number of Lyndon words of length n over r letters,
/// w_n(r) = (1/n) * sum_{m | n} mu(m) r^{n/m}.
inline ArbInt witt(std::uint64_t r, std::uint64_t n) {
    if (r < 1) throw std::invalid_argument("witt: rank must be >= 1");
    if (n < 1) throw std::invalid_argument("witt: degree must be >= 1");
    ArbInt sum = 0;
    for (std::uint64_t m : divisors(n)) {
        int mu = moebius(m);
        if (mu == 0) continue;
        ArbInt term = int_pow(r, n / m);
        if (mu > 0)
            sum += term;
        else
            sum -= term;
    }
    if (sum % n != 0) throw ArithmeticInvariantError("witt: necklace sum not divisible by n");
    return sum / n;
}

/// Splits n = p^k * m with p not dividing m.
struct PPart {
    unsigned k;
    std::uint64_t m;
};

inline PPart split_p_part(std::uint64_t n, std::uint64_t p) {
    PPart out{0, n};
    while (out.m % p == 0) {
        out.m /= p;
        ++out.k;
    }
    return out;
}

/// dim_{F_p} D_n(F_r)/D_{n+1}(F_r) = sum_{i=0}^{k} w_{p^i m}(r) where n = p^k m.
inline ArbInt zassenhaus_dim(std::uint64_t r, std::uint64_t n, std::uint64_t p) {
    require_prime(p);
    if (n < 1) throw std::invalid_argument("zassenhaus_dim: degree must be >= 1");
    auto [k, m] = split_p_part(n, p);
    ArbInt sum = 0;
    std::uint64_t deg = m;
    for (unsigned i = 0; i <= k; ++i, deg *= p) sum += witt(r, deg);
    return sum;
}

/// log_p [F_r : D_{n+1}(F_r)] = sum_{k=1}^{n} c_k.
inline ArbInt cumulative_log_index(std::uint64_t r, std::uint64_t n, std::uint64_t p) {
    if (n < 1) throw std::invalid_argument("cumulative_log_index: n must be >= 1");
    ArbInt sum = 0;
    for (std::uint64_t k = 1; k <= n; ++k) sum += zassenhaus_dim(r, k, p);
    return sum;
}

/// c_1..c_n together with their prefix sums.
struct DimProfile {
    std::uint64_t r = 0;
    std::uint64_t p = 0;
    std::vector<ArbInt> dims;    // dims[i] = c_{i+1}
    std::vector<ArbInt> cumlog;  // cumlog[i] = c_1 + ... + c_{i+1}
};

inline DimProfile dim_profile(std::uint64_t r, std::uint64_t p, std::uint64_t n_max) {
    require_prime(p);
    DimProfile out{r, p, {}, {}};
    ArbInt running = 0;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        out.dims.push_back(zassenhaus_dim(r, n, p));
        running += out.dims.back();
        out.cumlog.push_back(running);
    }
    return out;
}

/// Outcome of one inequality over n = 1..n_max.
struct ThresholdResult {
    std::vector<bool> holds;                 // holds[n-1]
    std::optional<std::uint64_t> threshold;  // smallest n0 with holds on [n0, n_max]
    std::vector<std::uint64_t> exceptions;   // every n where the inequality fails
};

inline ThresholdResult summarize_threshold(std::vector<bool> holds) {
    ThresholdResult out;
    out.holds = std::move(holds);
    const std::uint64_t n_max = out.holds.size();
    for (std::uint64_t n = 1; n <= n_max; ++n)
        if (!out.holds[n - 1]) out.exceptions.push_back(n);
    if (n_max > 0 && out.holds.back()) {
        std::uint64_t n0 = n_max;
        while (n0 > 1 && out.holds[n0 - 2]) --n0;
        out.threshold = n0;
    }
    return out;
}

struct GrowthScanReport {
    std::uint64_t r = 0;
    std::uint64_t p = 0;
    std::uint64_t n_max = 0;
    DimProfile profile;
    ThresholdResult dimension_bound;  // 2n * c_n >= r^n
    ThresholdResult index_bound;      // 15 * c_n > sum_{k<=n} c_k
};

/// Exact scan of  (a) c_n >= r^n / (2n)  and  (b) c_n > (1/15) sum_{k<=n} c_k
/// for n = 1..n_max, by integer cross-multiplication.
inline GrowthScanReport scan_growth_inequalities(std::uint64_t r, std::uint64_t p, std::uint64_t n_max) {
    if (n_max < 2) throw std::invalid_argument("scan: n_max must be >= 2");
    GrowthScanReport rep;
    rep.r = r;
    rep.p = p;
    rep.n_max = n_max;
    rep.profile = dim_profile(r, p, n_max);
    std::vector<bool> a, b;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const ArbInt& c = rep.profile.dims[n - 1];
        a.push_back(ArbInt(2 * n) * c >= int_pow(r, n));
        b.push_back(ArbInt(15) * c > rep.profile.cumlog[n - 1]);
    }
    rep.dimension_bound = summarize_threshold(std::move(a));
    rep.index_bound = summarize_threshold(std::move(b));
    return rep;
}

}  // namespace zfilt

#endif  // ZFILT_ARITH_HPP
