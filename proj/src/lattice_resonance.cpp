#include "hnls/lattice_resonance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace hnls {

namespace {

using i64 = std::int64_t;
using wide = __int128_t;  // headroom for count3/count5 products at |j|,|k| <= 2^20

bool in_box(wide v, i64 center, double half_width) {
    const double d = static_cast<double>(v) - static_cast<double>(center);
    return std::abs(d) <= half_width;
}

}  // namespace

std::vector<std::pair<i64, i64>> divisor_pairs(i64 m, i64 a0, i64 b0, double M,
                                               double N) {
    if (m == 0) throw std::invalid_argument("divisor_pairs: m = 0 has no factorization set");
    std::vector<std::pair<i64, i64>> out;
    const i64 am = std::abs(m);
    for (i64 d = 1; d * d <= am; ++d) {
        if (am % d != 0) continue;
        const i64 e = am / d;
        // unordered divisor pair {d, e} of |m|; expand to signed ordered pairs
        i64 as[4], bs[4];
        int cnt = 0;
        as[cnt] = d;  bs[cnt] = m / d;   ++cnt;
        as[cnt] = -d; bs[cnt] = m / -d;  ++cnt;
        if (e != d) {
            as[cnt] = e;  bs[cnt] = m / e;   ++cnt;
            as[cnt] = -e; bs[cnt] = m / -e;  ++cnt;
        }
        for (int i = 0; i < cnt; ++i)
            if (in_box(as[i], a0, M) && in_box(bs[i], b0, N))
                out.emplace_back(as[i], bs[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Shared emit-with-checks for both pairings: given a fully determined
// candidate triple, verify the Gamma_mu membership and shell constraints.
struct GammaCollector {
    FreqVector n;
    i64 mu;
    ModulusSign sign;
    std::vector<ResonanceTriple>* out = nullptr;  // null => count only
    i64 count = 0;

    void emit(FreqVector n1, FreqVector n2, FreqVector n3, DyadicShell sA,
              FreqVector shellA_on, DyadicShell sB, FreqVector shellB_on) {
        if (!sA.contains(shellA_on) || !sB.contains(shellB_on)) return;
        if (n1 - n2 + n3 != n) return;             // defensive; holds by construction
        if (n == n1 || n == n3) return;            // Gamma(n) non-degeneracy
        if (modulation(n, n1, n2, n3, sign) != mu) return;
        ++count;
        if (out) out->push_back({n1, n2, n3});
    }
};

}  // namespace

std::vector<ResonanceTriple> enumerate_gamma(FreqVector n, i64 mu,
                                             ModulusSign sign,
                                             DyadicShell shell1,
                                             DyadicShell shell3) {
    std::vector<ResonanceTriple> out;
    // Phi = 2(j-j1)(j-j3) -/+ 2(k-k1)(k-k3) on Gamma(n), so odd mu is empty.
    if (mu % 2 != 0) return out;
    if (!shell1.valid() || !shell3.valid())
        throw std::invalid_argument("enumerate_gamma: invalid dyadic shell");

    GammaCollector col{n, mu, sign, &out};
    const i64 B1 = shell1.coord_bound();  // |k1| < B1 for shell members
    const i64 B3 = shell3.coord_bound();
    const i64 half = mu / 2;
    // hyperbolic: (j-j1)(j-j3) = mu/2 + (k-k1)(k-k3); elliptic flips the sign.
    const i64 ks = sign == ModulusSign::Hyperbolic ? 1 : -1;

    for (i64 k1 = -B1 + 1; k1 <= B1 - 1; ++k1) {
        for (i64 k3 = -B3 + 1; k3 <= B3 - 1; ++k3) {
            const wide m = static_cast<wide>(half) +
                           static_cast<wide>(ks) * (n.k - k1) * (n.k - k3);
            if (m != 0) {
                // |a| <= |j| + B1, |b| <= |j| + B3 inside the boxes
                const wide mcap = (std::abs(n.j) + B1) * static_cast<wide>(std::abs(n.j) + B3);
                if (m > mcap || m < -mcap) continue;
                for (auto [a, b] : divisor_pairs(static_cast<i64>(m), n.j, n.j,
                                                 static_cast<double>(B1 - 1),
                                                 static_cast<double>(B3 - 1))) {
                    const FreqVector n1{n.j - a, k1};
                    const FreqVector n3{n.j - b, k3};
                    col.emit(n1, n1 + n3 - n, n3, shell1, n1, shell3, n3);
                }
            } else {
                // degenerate lines of the Lemma 2.2 proof: j1 = j (j3 free)
                // and j3 = j (j1 free); the overlap j1 = j3 = j is taken once.
                for (i64 j3 = -B3 + 1; j3 <= B3 - 1; ++j3) {
                    const FreqVector n1{n.j, k1}, n3{j3, k3};
                    col.emit(n1, n1 + n3 - n, n3, shell1, n1, shell3, n3);
                }
                for (i64 j1 = -B1 + 1; j1 <= B1 - 1; ++j1) {
                    if (j1 == n.j) continue;
                    const FreqVector n1{j1, k1}, n3{n.j, k3};
                    col.emit(n1, n1 + n3 - n, n3, shell1, n1, shell3, n3);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// N1N2 pairing: fix (k1, k2); then (j-j1)(j1-j2) = mu/2 +/- (k-k1)(k1-k2)
// (Eq. count5) and the divisor/degenerate split mirrors enumerate_gamma.
i64 count_gamma_n1n2(FreqVector n, i64 mu, ModulusSign sign, DyadicShell sA,
                     DyadicShell sB) {
    if (mu % 2 != 0) return 0;
    GammaCollector col{n, mu, sign, nullptr};
    const i64 BA = sA.coord_bound();
    const i64 BB = sB.coord_bound();
    const i64 half = mu / 2;
    const i64 ks = sign == ModulusSign::Hyperbolic ? 1 : -1;

    auto emit = [&](i64 j1, i64 k1, i64 j2, i64 k2) {
        const FreqVector n1{j1, k1}, n2{j2, k2};
        col.emit(n1, n2, n - n1 + n2, sA, n1, sB, n2);
    };

    for (i64 k1 = -BA + 1; k1 <= BA - 1; ++k1) {
        for (i64 k2 = -BB + 1; k2 <= BB - 1; ++k2) {
            const wide m = static_cast<wide>(half) +
                           static_cast<wide>(ks) * (n.k - k1) * (k1 - k2);
            if (m != 0) {
                // a = j - j1 (so |a| <= |j| + BA), b = j1 - j2 (so |b| <= BA + BB)
                const wide mcap = (std::abs(n.j) + BA) * static_cast<wide>(BA + BB);
                if (m > mcap || m < -mcap) continue;
                for (auto [a, b] : divisor_pairs(static_cast<i64>(m), n.j, 0,
                                                 static_cast<double>(BA - 1),
                                                 static_cast<double>(BA + BB))) {
                    const i64 j1 = n.j - a;
                    emit(j1, k1, j1 - b, k2);
                }
            } else {
                // cases (c)/(d): j1 = j with j2 free, or j2 = j1 with j1 free
                for (i64 j2 = -BB + 1; j2 <= BB - 1; ++j2) emit(n.j, k1, j2, k2);
                for (i64 j1 = -BA + 1; j1 <= BA - 1; ++j1) {
                    if (j1 == n.j) continue;
                    emit(j1, k1, j1, k2);
                }
            }
        }
    }
    return col.count;
}

}  // namespace

i64 count_gamma_shell(FreqVector n, i64 mu, ModulusSign sign, DyadicShell shellA,
                      DyadicShell shellB, ShellPairing pairing) {
    if (pairing == ShellPairing::N1N3)
        return static_cast<i64>(enumerate_gamma(n, mu, sign, shellA, shellB).size());
    return count_gamma_n1n2(n, mu, sign, shellA, shellB);
}

namespace {

// Platform-stable uniform draw on [lo, hi]; modulo bias is irrelevant for a
// diagnostic sweep but the sequence must not depend on the standard library.
i64 draw(std::mt19937_64& rng, i64 lo, i64 hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<i64>(rng() % span);
}

}  // namespace

CountReport empirical_count_constant(ModulusSign sign, double theta, i64 radius,
                                     i64 samples, std::uint64_t seed) {
    if (theta <= 0) throw std::invalid_argument("empirical_count_constant: theta must be positive");
    if (radius < 1 || (radius & (radius - 1)) != 0)
        throw std::invalid_argument("empirical_count_constant: radius must be a power of two");

    CountReport rep;
    rep.theta = theta;
    rep.radius = radius;
    rep.seed = seed;
    rep.samples = samples;

    int n_dyadic = 1;
    while ((i64{1} << n_dyadic) <= radius) ++n_dyadic;  // dyadic values 1..radius

    std::mt19937_64 rng(seed);
    std::vector<std::tuple<i64, i64, double>> shell_max;
    for (i64 it = 0; it < samples; ++it) {
        const FreqVector n{draw(rng, -radius, radius), draw(rng, -radius, radius)};
        const i64 mu = 2 * draw(rng, -2 * radius * radius, 2 * radius * radius);
        const i64 N1 = i64{1} << draw(rng, 0, n_dyadic - 1);
        const i64 N3 = i64{1} << draw(rng, 0, n_dyadic - 1);
        const i64 count = count_gamma_shell(n, mu, sign, DyadicShell{N1},
                                            DyadicShell{N3}, ShellPairing::N1N3);
        const double denom = static_cast<double>(N1) * static_cast<double>(N3) *
                             std::pow(static_cast<double>(std::max(N1, N3)), theta);
        const double ratio = static_cast<double>(count) / denom;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.witness = CountWitness{n, mu, N1, N3, count};
        }
        auto it_sh = std::find_if(shell_max.begin(), shell_max.end(), [&](const auto& t) {
            return std::get<0>(t) == N1 && std::get<1>(t) == N3;
        });
        if (it_sh == shell_max.end())
            shell_max.emplace_back(N1, N3, ratio);
        else if (ratio > std::get<2>(*it_sh))
            std::get<2>(*it_sh) = ratio;
    }
    std::sort(shell_max.begin(), shell_max.end());
    rep.per_shell = std::move(shell_max);
    return rep;
}

std::string CountReport::to_json() const {
    nlohmann::ordered_json j;
    j["max_ratio"] = max_ratio;
    j["witness"] = {{"n", {witness.n.j, witness.n.k}},
                    {"mu", witness.mu},
                    {"N1", witness.N1},
                    {"N3", witness.N3},
                    {"count", witness.count}};
    j["theta"] = theta;
    j["radius"] = radius;
    j["seed"] = seed;
    j["samples"] = samples;
    auto& ps = j["per_shell"] = nlohmann::ordered_json::array();
    for (const auto& [N1, N3, ratio] : per_shell)
        ps.push_back({{"N1", N1}, {"N3", N3}, {"max_ratio", ratio}});
    return j.dump(2);
}

}  // namespace hnls
