#pragma once
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace corona {

// Exact rational arithmetic for the Psi polynomial recursions.
// Numerators/denominators stay small (n <= 5, k <= 4); __int128 intermediates
// guard the products before reduction.
struct Rat {
    long long p = 0; // numerator
    long long q = 1; // denominator > 0

    Rat() = default;
    Rat(long long num) : p(num), q(1) {}
    Rat(long long num, long long den) : p(num), q(den) { normalize(); }

    void normalize() {
        if (q == 0) throw std::domain_error("rational with zero denominator");
        if (q < 0) { p = -p; q = -q; }
        long long g = std::gcd(p < 0 ? -p : p, q);
        if (g > 1) { p /= g; q /= g; }
        if (p == 0) q = 1;
    }

    static Rat from128(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        __int128 a = num < 0 ? -num : num, b = den;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { num /= a; den /= a; }
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rat r;
        r.p = static_cast<long long>(num);
        r.q = static_cast<long long>(den);
        if (r.p == 0) r.q = 1;
        return r;
    }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return from128(static_cast<__int128>(a.p) * b.q + static_cast<__int128>(b.p) * a.q,
                       static_cast<__int128>(a.q) * b.q);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return from128(static_cast<__int128>(a.p) * b.q - static_cast<__int128>(b.p) * a.q,
                       static_cast<__int128>(a.q) * b.q);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from128(static_cast<__int128>(a.p) * b.p, static_cast<__int128>(a.q) * b.q);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.p == 0) throw std::domain_error("rational division by zero");
        return from128(static_cast<__int128>(a.p) * b.q, static_cast<__int128>(a.q) * b.p);
    }
    Rat operator-() const { Rat r; r.p = -p; r.q = q; return r; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.p == b.p && a.q == b.q; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

    bool is_zero() const { return p == 0; }
    double to_double() const { return static_cast<double>(p) / static_cast<double>(q); }
    std::string str() const {
        return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
    }
};

inline long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace corona
