#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>

namespace hnls {

// A frequency index n = (j, k) on the integer lattice Z^2.
// Components are capped at |j|, |k| <= 2^20 by convention; all modulus
// arithmetic goes through 64/128-bit intermediates so products cannot
// overflow at that scale.
struct FreqVector {
    std::int64_t j = 0;
    std::int64_t k = 0;

    friend constexpr FreqVector operator+(FreqVector a, FreqVector b) {
        return {a.j + b.j, a.k + b.k};
    }
    friend constexpr FreqVector operator-(FreqVector a, FreqVector b) {
        return {a.j - b.j, a.k - b.k};
    }
    constexpr FreqVector operator-() const { return {-j, -k}; }

    friend constexpr bool operator==(FreqVector, FreqVector) = default;
    friend constexpr auto operator<=>(FreqVector, FreqVector) = default;

    // Squared Euclidean norm j^2 + k^2.
    constexpr std::int64_t norm_sq() const { return j * j + k * k; }
    double norm() const { return std::sqrt(static_cast<double>(norm_sq())); }
};

// Selects the elliptic modulus j^2 + k^2 or the hyperbolic modulus j^2 - k^2.
enum class ModulusSign { Elliptic, Hyperbolic };

constexpr std::int64_t modulus_sq(FreqVector n, ModulusSign sign) {
    const std::int64_t jj = n.j * n.j;
    const std::int64_t kk = n.k * n.k;
    return sign == ModulusSign::Elliptic ? jj + kk : jj - kk;
}

// Modulation Phi(n, n1, n2, n3) = |n|^2 - |n1|^2 + |n2|^2 - |n3|^2 in the
// chosen modulus. The convolution constraint n = n1 - n2 + n3 is not
// enforced here.
constexpr std::int64_t modulation(FreqVector n, FreqVector n1, FreqVector n2,
                                  FreqVector n3, ModulusSign sign) {
    return modulus_sq(n, sign) - modulus_sq(n1, sign) + modulus_sq(n2, sign) -
           modulus_sq(n3, sign);
}

struct ResonanceTriple {
    FreqVector n1, n2, n3;
    friend constexpr bool operator==(ResonanceTriple, ResonanceTriple) = default;
    friend constexpr auto operator<=>(ResonanceTriple, ResonanceTriple) = default;
};

// Dyadic shell {|n| ~ N}: for N >= 2 membership is N/2 <= |n| < 2N, and the
// N = 1 shell is {|n| < 2}.
struct DyadicShell {
    std::int64_t N = 1;

    constexpr bool contains(FreqVector n) const {
        const std::int64_t q = n.norm_sq();  // compare against squared bounds
        if (N == 1) return q < 4;
        return 4 * q >= N * N && q < 4 * N * N;
    }

    // Any coordinate of a shell member satisfies |c| < 2N.
    constexpr std::int64_t coord_bound() const { return 2 * N; }

    constexpr bool valid() const { return N >= 1 && (N & (N - 1)) == 0; }
};

}  // namespace hnls

template <>
struct std::hash<hnls::FreqVector> {
    std::size_t operator()(const hnls::FreqVector& n) const noexcept {
        std::uint64_t h = static_cast<std::uint64_t>(n.j) * 0x9e3779b97f4a7c15ull;
        h ^= static_cast<std::uint64_t>(n.k) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};
