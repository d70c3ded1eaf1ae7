#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hnls/lattice.hpp"

namespace hnls {

// Which two of (n1, n2, n3) carry the dyadic shell constraints in a count
// query (Lemma 2.2 has one bound per pairing).
enum class ShellPairing { N1N3, N1N2 };

// All factorizations m = a * b over signed integers with |a - a0| <= M and
// |b - b0| <= N. Trial division; m must be nonzero (the m = 0 degenerate
// lines are handled by the enumeration code, not here).
std::vector<std::pair<std::int64_t, std::int64_t>> divisor_pairs(
    std::int64_t m, std::int64_t a0, std::int64_t b0, double M, double N);

// The resonance set Gamma_mu^{+/-}(n) intersected with {|n1| ~ shell1,
// |n3| ~ shell3}: all (n1, n2, n3) with n1 - n2 + n3 = n, n != n1, n != n3
// and modulation(n, n1, n2, n3) = mu. Enumerated via the divisor identity
// 2(j-j1)(j-j3) -/+ 2(k-k1)(k-k3) = mu at fixed (k1, k3), with the product
// m = 0 lines enumerated directly. Output is sorted, duplicate-free.
std::vector<ResonanceTriple> enumerate_gamma(FreqVector n, std::int64_t mu,
                                             ModulusSign sign,
                                             DyadicShell shell1,
                                             DyadicShell shell3);

// |Gamma_mu^{+/-}(n)| with shellA, shellB constraining (n1, n3) or (n1, n2)
// according to the pairing. The N1N2 pairing uses the companion identity
// 2(j-j1)(j1-j2) -/+ 2(k-k1)(k1-k2) = mu.
std::int64_t count_gamma_shell(FreqVector n, std::int64_t mu, ModulusSign sign,
                               DyadicShell shellA, DyadicShell shellB,
                               ShellPairing pairing);

struct CountWitness {
    FreqVector n{};
    std::int64_t mu = 0;
    std::int64_t N1 = 1;
    std::int64_t N3 = 1;
    std::int64_t count = 0;
};

struct CountReport {
    double max_ratio = 0.0;
    CountWitness witness{};  // argmax sample; meaningful only when samples > 0
    double theta = 0.0;
    std::int64_t radius = 0;
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    // max ratio seen per sampled (N1, N3) shell pair
    std::vector<std::tuple<std::int64_t, std::int64_t, double>> per_shell;

    std::string to_json() const;
};

// Randomized sweep tracking max over samples of
//   count / (N1 * N3 * max(N1, N3)^theta)
// with n uniform in [-radius, radius]^2, mu uniform over even integers in
// [-4 radius^2, 4 radius^2], shells uniform over dyadic values <= radius.
// Deterministic given seed (hand-rolled draws, no library distributions).
CountReport empirical_count_constant(ModulusSign sign, double theta,
                                     std::int64_t radius, std::int64_t samples,
                                     std::uint64_t seed);

}  // namespace hnls
