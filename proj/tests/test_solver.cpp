#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hnls/solver.hpp"

using namespace hnls;

namespace {

SpectralField sample_field(std::int64_t radius, double scale = 1.0) {
    SpectralField u(radius);
    u.set({0, 0}, scale * Complex{0.4, -0.1});
    u.set({1, 0}, scale * Complex{-0.2, 0.3});
    u.set({0, 1}, scale * Complex{0.1, 0.1});
    if (radius >= 2) u.set({-1, -1}, scale * Complex{0.25, 0.0});
    return u;
}

double dist(const SpectralField& a, const SpectralField& b) {
    SpectralField d(std::max(a.radius(), b.radius()));
    for (const auto& [n, c] : a.data()) d.add(n, c);
    for (const auto& [n, c] : b.data()) d.add(n, -c);
    return fl_norm(d, {0.0, 2.0});
}

}  // namespace

TEST_CASE("single-mode solution is exact: u = e^{i(|c|^2 - |n|_-^2)t} c") {
    // one mode is a resonant ODE: i u' + |n|_-^2-free part... in Fourier:
    // d/dt u(n) = i(-|n|_-^2 + |u(n)|^2) u(n) for single-mode data
    SpectralField u0(3);
    const Complex c{0.3, 0.4};  // |c|^2 = 0.25
    const FreqVector n{2, 1};   // |n|_-^2 = 3
    u0.set(n, c);
    SimConfig cfg;
    cfg.radius = 3;
    cfg.dt = 1e-3;
    cfg.T = 1.0;
    cfg.record_every = 1000;
    const auto res = integrate(u0, cfg);
    REQUIRE_FALSE(res.traj.blew_up);
    const Complex got = res.traj.fields.back().at(n);
    const Complex want = c * std::polar(1.0, (0.25 - 3.0) * 1.0);
    CHECK(std::abs(got - want) < 1e-9);
}

TEST_CASE("mass and Hamiltonian are conserved along RK4 trajectories") {
    SimConfig cfg;
    cfg.radius = 3;
    cfg.dt = 5e-4;
    cfg.T = 0.5;
    cfg.record_every = 100;
    const auto res = integrate(sample_field(3), cfg);
    REQUIRE_FALSE(res.traj.blew_up);
    REQUIRE(res.conserved.hamiltonian_enabled);
    const double m0 = res.conserved.mass.front();
    const double h0 = res.conserved.hamiltonian.front();
    for (std::size_t i = 0; i < res.conserved.times.size(); ++i) {
        CHECK(std::abs(res.conserved.mass[i] - m0) < 1e-10 * std::max(1.0, m0));
        CHECK(std::abs(res.conserved.hamiltonian[i] - h0) < 1e-10 * std::max(1.0, std::abs(h0)));
    }
    // reported values match the standalone evaluators
    CHECK(mass_of(res.traj.fields.front()) == doctest::Approx(m0));
    CHECK(hamiltonian_of(res.traj.fields.front()) == doctest::Approx(h0));
}

TEST_CASE("RK4 halving the step shrinks the error by ~16") {
    const auto u0 = sample_field(2);
    SimConfig fine;
    fine.radius = 2;
    fine.dt = 1.25e-4;
    fine.T = 0.4;
    fine.record_every = 1 << 20;  // endpoints only
    const auto ref = integrate(u0, fine).traj.fields.back();

    auto err_at = [&](double dt) {
        SimConfig cfg;
        cfg.radius = 2;
        cfg.dt = dt;
        cfg.T = 0.4;
        cfg.record_every = 1 << 20;
        return dist(integrate(u0, cfg).traj.fields.back(), ref);
    };
    const double e1 = err_at(0.02);
    const double e2 = err_at(0.01);
    const double factor = e1 / e2;
    CHECK(factor > 16.0 * 0.8);
    CHECK(factor < 16.0 * 1.2);
}

TEST_CASE("blow-up guard returns a partial trajectory") {
    SpectralField huge(1);
    huge.set({0, 0}, {9.9e5, 0.0});  // |u|^2 u drives past 1e6 within a step
    SimConfig cfg;
    cfg.radius = 1;
    cfg.dt = 0.1;
    cfg.T = 10.0;
    const auto res = integrate(huge, cfg);
    CHECK(res.traj.blew_up);
    CHECK(res.traj.blowup_time > 0.0);
    CHECK(res.traj.blowup_time <= 10.0);
    CHECK_FALSE(res.traj.fields.empty());
}

TEST_CASE("config and radius contracts") {
    const auto u0 = sample_field(1);
    SimConfig cfg;
    cfg.radius = 1;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(integrate(u0, cfg), std::invalid_argument);
    cfg.dt = 1e-2;
    cfg.T = 0.1;
    cfg.scheme = Scheme::PicardOnly;
    CHECK_THROWS_AS(integrate(u0, cfg), std::invalid_argument);
    SpectralField big(9);
    big.set({9, 0}, {1.0, 0.0});
    CHECK_THROWS_AS(hamiltonian_of(big), std::invalid_argument);
    cfg.scheme = Scheme::RK4InteractionPicture;
    cfg.radius = 9;
    const auto res = integrate(big, cfg);
    CHECK_FALSE(res.conserved.hamiltonian_enabled);
    CHECK(res.conserved.hamiltonian.empty());
}

TEST_CASE("picard_second_iterate matches trapezoid quadrature of the Duhamel integral") {
    const auto f = sample_field(1);
    const double t = 0.3;
    const auto exact = picard_second_iterate(f, t);

    // oracle: A(t) = i int_0^t S(t-s) |S(s)f|^2 S(s)f ds by fine trapezoid
    const int steps = 20000;
    SpectralField acc(3 * f.radius());
    for (int i = 0; i <= steps; ++i) {
        const double sgrid = t * i / steps;
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        const auto us = propagate(f, sgrid);
        const auto cub = cubic_full(us, us, us);
        const auto back = propagate(cub, t - sgrid);
        for (const auto& [n, c] : back.data())
            acc.add(n, Complex{0, 1} * w * (t / steps) * c);
    }
    CHECK(dist(exact, acc) < 1e-8);
}

TEST_CASE("picard_second_iterate resolves the Phi = 0 branch exactly") {
    SpectralField f(1);
    f.set({1, 0}, {1.0, 0.0});  // self-interaction: Phi = 0, n = n1 = n3
    const auto a = picard_second_iterate(f, 0.5);
    // A-hat(n) = i e^{-it} * 1 * t at n = (1,0), |n|_-^2 = 1
    const Complex want = Complex{0, 1} * std::polar(1.0, -0.5) * 0.5;
    CHECK(std::abs(a.at({1, 0}) - want) < 1e-14);
}

TEST_CASE("make_fN support and normalization") {
    const auto f = make_fN(4, 0.5, 2.0);
    const double c = std::pow(4.0, -0.5 - 0.5);
    for (const auto& [n, v] : f.data()) {
        CHECK(n.j == n.k);
        CHECK(2 * n.k * n.k <= 16);
        CHECK(v == Complex{c, 0.0});
    }
    CHECK(f.data().size() == 5);  // k in {-2,...,2}
    CHECK(f.at({3, 3}) == Complex{});
    CHECK_THROWS_AS(make_fN(0, 0.5, 2.0), std::invalid_argument);
}

TEST_CASE("illposedness_slope guards and fit sanity") {
    CHECK_THROWS_AS(illposedness_slope(0.0, 2.0, 0.5, {8, 16}), std::invalid_argument);
    CHECK_THROWS_AS(illposedness_slope(0.0, 2.0, 0.0, {8, 16, 32}), std::invalid_argument);
    const auto rep = illposedness_slope(0.0, 2.0, 0.5, {8, 16, 32});
    CHECK(rep.expected == doctest::Approx(1.0));
    CHECK(rep.norms.size() == 3);
    CHECK(rep.slope > 0.5);  // growth, even on a short N range
}
