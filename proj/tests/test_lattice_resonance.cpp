#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "hnls/lattice_resonance.hpp"

using namespace hnls;
using i64 = std::int64_t;

namespace {

// Brute-force oracle: loop n1 over shellA's coordinate box and the second
// constrained vector over shellB's box, derive the third from the convolution
// constraint, and apply the Gamma_mu(n) definition directly.
std::vector<ResonanceTriple> oracle_gamma(FreqVector n, i64 mu, ModulusSign sign,
                                          DyadicShell s1, DyadicShell s3) {
    std::vector<ResonanceTriple> out;
    const i64 B1 = s1.coord_bound(), B3 = s3.coord_bound();
    for (i64 j1 = -B1; j1 <= B1; ++j1)
        for (i64 k1 = -B1; k1 <= B1; ++k1)
            for (i64 j3 = -B3; j3 <= B3; ++j3)
                for (i64 k3 = -B3; k3 <= B3; ++k3) {
                    const FreqVector n1{j1, k1}, n3{j3, k3};
                    const FreqVector n2 = n1 + n3 - n;
                    if (!s1.contains(n1) || !s3.contains(n3)) continue;
                    if (n == n1 || n == n3) continue;
                    if (modulation(n, n1, n2, n3, sign) != mu) continue;
                    out.push_back({n1, n2, n3});
                }
    std::sort(out.begin(), out.end());
    return out;
}

i64 oracle_count_n1n2(FreqVector n, i64 mu, ModulusSign sign, DyadicShell sA,
                      DyadicShell sB) {
    i64 count = 0;
    const i64 BA = sA.coord_bound(), BB = sB.coord_bound();
    for (i64 j1 = -BA; j1 <= BA; ++j1)
        for (i64 k1 = -BA; k1 <= BA; ++k1)
            for (i64 j2 = -BB; j2 <= BB; ++j2)
                for (i64 k2 = -BB; k2 <= BB; ++k2) {
                    const FreqVector n1{j1, k1}, n2{j2, k2};
                    const FreqVector n3 = n - n1 + n2;
                    if (!sA.contains(n1) || !sB.contains(n2)) continue;
                    if (n == n1 || n == n3) continue;
                    if (modulation(n, n1, n2, n3, sign) != mu) continue;
                    ++count;
                }
    return count;
}

}  // namespace

TEST_CASE("divisor_pairs enumerates signed factorizations inside boxes") {
    // m = 6, unconstrained boxes: (a, b) with ab = 6
    auto p6 = divisor_pairs(6, 0, 0, 10, 10);
    std::vector<std::pair<i64, i64>> expect6 = {{-6, -1}, {-3, -2}, {-2, -3},
                                                {-1, -6}, {1, 6},   {2, 3},
                                                {3, 2},   {6, 1}};
    CHECK(p6 == expect6);

    // prime m = 7 with a tight box on a
    auto p7 = divisor_pairs(7, 0, 0, 1.0, 10.0);
    std::vector<std::pair<i64, i64>> expect7 = {{-1, -7}, {1, 7}};
    CHECK(p7 == expect7);

    // negative m with shifted centers
    auto pm = divisor_pairs(-12, 2, -3, 2.0, 4.0);
    for (auto [a, b] : pm) {
        CHECK(a * b == -12);
        CHECK(std::abs(a - 2) <= 2);
        CHECK(std::abs(b + 3) <= 4);
    }
    CHECK(std::count(pm.begin(), pm.end(), std::make_pair(i64{3}, i64{-4})) == 1);
    CHECK(std::count(pm.begin(), pm.end(), std::make_pair(i64{2}, i64{-6})) == 1);
    CHECK(std::is_sorted(pm.begin(), pm.end()));

    CHECK_THROWS_AS(divisor_pairs(0, 0, 0, 5, 5), std::invalid_argument);
}

TEST_CASE("enumerate_gamma matches the brute-force oracle") {
    const std::vector<FreqVector> ns = {{0, 0}, {1, 0}, {2, 1}, {-3, 2}, {1, -4}};
    const std::vector<i64> mus = {0, 2, -2, 4, 8, 3, -16};
    for (ModulusSign sign : {ModulusSign::Hyperbolic, ModulusSign::Elliptic})
        for (FreqVector n : ns)
            for (i64 mu : mus)
                for (i64 N1 : {1, 2, 4})
                    for (i64 N3 : {1, 2, 4}) {
                        const DyadicShell s1{N1}, s3{N3};
                        const auto got = enumerate_gamma(n, mu, sign, s1, s3);
                        const auto want = oracle_gamma(n, mu, sign, s1, s3);
                        CAPTURE(n.j); CAPTURE(n.k); CAPTURE(mu); CAPTURE(N1); CAPTURE(N3);
                        CHECK(got == want);
                    }
}

TEST_CASE("enumerate_gamma output invariants") {
    const FreqVector n{2, 1};
    const auto got = enumerate_gamma(n, 4, ModulusSign::Hyperbolic, DyadicShell{4},
                                     DyadicShell{2});
    std::set<ResonanceTriple> dedup(got.begin(), got.end());
    CHECK(dedup.size() == got.size());
    for (const auto& t : got) {
        CHECK(t.n1 - t.n2 + t.n3 == n);
        CHECK(modulation(n, t.n1, t.n2, t.n3, ModulusSign::Hyperbolic) == 4);
        CHECK(t.n1 != n);
        CHECK(t.n3 != n);
    }
    CHECK_FALSE(got.empty());
    // odd mu is empty on Gamma(n)
    CHECK(enumerate_gamma(n, 3, ModulusSign::Hyperbolic, DyadicShell{4}, DyadicShell{4}).empty());
}

TEST_CASE("count_gamma_shell N1N2 pairing matches the oracle") {
    const std::vector<FreqVector> ns = {{0, 0}, {1, 2}, {-2, 1}};
    for (ModulusSign sign : {ModulusSign::Hyperbolic, ModulusSign::Elliptic})
        for (FreqVector n : ns)
            for (i64 mu : {0, 2, -4, 6})
                for (i64 NA : {1, 2, 4})
                    for (i64 NB : {1, 2}) {
                        const i64 got = count_gamma_shell(n, mu, sign, DyadicShell{NA},
                                                          DyadicShell{NB},
                                                          ShellPairing::N1N2);
                        const i64 want = oracle_count_n1n2(n, mu, sign, DyadicShell{NA},
                                                           DyadicShell{NB});
                        CAPTURE(n.j); CAPTURE(n.k); CAPTURE(mu); CAPTURE(NA); CAPTURE(NB);
                        CHECK(got == want);
                    }
}

TEST_CASE("empirical_count_constant is deterministic and well-formed") {
    const auto r1 = empirical_count_constant(ModulusSign::Hyperbolic, 0.25, 8, 200, 42);
    const auto r2 = empirical_count_constant(ModulusSign::Hyperbolic, 0.25, 8, 200, 42);
    CHECK(r1.to_json() == r2.to_json());
    CHECK(r1.max_ratio >= 0.0);
    CHECK(r1.samples == 200);
    // witness ratio reproduces max_ratio
    const double denom = static_cast<double>(r1.witness.N1) * r1.witness.N3 *
                         std::pow(static_cast<double>(std::max(r1.witness.N1, r1.witness.N3)), 0.25);
    CHECK(r1.max_ratio == doctest::Approx(r1.witness.count / denom));
    const auto r3 = empirical_count_constant(ModulusSign::Hyperbolic, 0.25, 8, 200, 43);
    CHECK(r1.to_json() != r3.to_json());
    CHECK_THROWS_AS(empirical_count_constant(ModulusSign::Hyperbolic, 0.25, 7, 10, 0),
                    std::invalid_argument);
}
