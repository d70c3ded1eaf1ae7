#include "hnls/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace hnls {

namespace {

constexpr Complex kI{0.0, 1.0};

// Dense working representation over the Galerkin disc with the two-stage
// cubic convolution |u|^2 u = (u * conj(u)) * u; the pair correlation W lives
// on the doubled grid [-2R, 2R]^2.
struct Workspace {
    std::int64_t R;
    std::vector<FreqVector> modes;       // disc points, lexicographic
    std::vector<double> hyp;             // |n|_-^2 per mode
    std::vector<std::size_t> mode_idx;   // dense (2R+1)^2 grid -> mode position+1, 0 = outside
    std::vector<Complex> W;              // (4R+1)^2 scratch

    explicit Workspace(std::int64_t radius) : R(radius) {
        mode_idx.assign(static_cast<std::size_t>((2 * R + 1) * (2 * R + 1)), 0);
        for (std::int64_t j = -R; j <= R; ++j)
            for (std::int64_t k = -R; k <= R; ++k)
                if (j * j + k * k <= R * R) {
                    const FreqVector n{j, k};
                    mode_idx[grid_idx(n)] = modes.size() + 1;
                    modes.push_back(n);
                    hyp.push_back(static_cast<double>(modulus_sq(n, ModulusSign::Hyperbolic)));
                }
        W.assign(static_cast<std::size_t>((4 * R + 1) * (4 * R + 1)), Complex{});
    }

    std::size_t grid_idx(FreqVector n) const {
        return static_cast<std::size_t>((n.j + R) * (2 * R + 1) + (n.k + R));
    }
    std::size_t wide_idx(FreqVector m) const {
        return static_cast<std::size_t>((m.j + 2 * R) * (4 * R + 1) + (m.k + 2 * R));
    }

    // cubic(u)(n) = sum_{n = n1 - n2 + n3} u(n1) conj(u(n2)) u(n3), |n| <= R.
    void cubic(const std::vector<Complex>& u, std::vector<Complex>& out) {
        std::fill(W.begin(), W.end(), Complex{});
        for (std::size_t a = 0; a < modes.size(); ++a) {
            if (u[a] == Complex{}) continue;
            for (std::size_t b = 0; b < modes.size(); ++b)
                W[wide_idx(modes[a] - modes[b])] += u[a] * std::conj(u[b]);
        }
        out.assign(modes.size(), Complex{});
        for (std::size_t c = 0; c < modes.size(); ++c) {
            if (u[c] == Complex{}) continue;
            for (std::size_t o = 0; o < modes.size(); ++o)
                out[o] += W[wide_idx(modes[o] - modes[c])] * u[c];
        }
    }

    // Interaction-picture vector field F(t, v) = i e^{it|n|^2_-} cubic(e^{-it|.|^2_-} v).
    void rhs(double t, const std::vector<Complex>& v, std::vector<Complex>& out) {
        thread_local std::vector<Complex> phys;
        phys.resize(modes.size());
        for (std::size_t a = 0; a < modes.size(); ++a)
            phys[a] = v[a] * std::polar(1.0, -t * hyp[a]);
        cubic(phys, out);
        for (std::size_t a = 0; a < modes.size(); ++a)
            out[a] *= kI * std::polar(1.0, t * hyp[a]);
    }

    std::vector<Complex> load(const SpectralField& u) const {
        std::vector<Complex> v(modes.size(), Complex{});
        for (const auto& [n, c] : u.data()) {
            if (n.norm_sq() > R * R)
                throw std::invalid_argument("integrate: initial data outside radius");
            v[mode_idx[grid_idx(n)] - 1] = c;
        }
        return v;
    }

    SpectralField store(const std::vector<Complex>& v) const {
        SpectralField u(R);
        for (std::size_t a = 0; a < modes.size(); ++a)
            if (v[a] != Complex{}) u.set(modes[a], v[a]);
        return u;
    }

    double quartic(const std::vector<Complex>& u) {
        // sum_{n1-n2+n3-n4=0} = sum_m |W(m)|^2 with W(m) = sum_{n1-n2=m} u1 conj(u2)
        std::fill(W.begin(), W.end(), Complex{});
        for (std::size_t a = 0; a < modes.size(); ++a) {
            if (u[a] == Complex{}) continue;
            for (std::size_t b = 0; b < modes.size(); ++b)
                W[wide_idx(modes[a] - modes[b])] += u[a] * std::conj(u[b]);
        }
        double q = 0.0;
        for (const Complex& w : W) q += std::norm(w);
        return q;
    }
};

}  // namespace

double mass_of(const SpectralField& u) {
    double m = 0.0;
    for (const auto& [n, c] : u.data()) m += std::norm(c);
    return m;
}

double hamiltonian_of(const SpectralField& u) {
    if (u.radius() > 8)
        throw std::invalid_argument("hamiltonian_of: quartic tracking limited to radius <= 8");
    Workspace ws(u.radius());
    const auto v = ws.load(u);
    double quad = 0.0;
    for (std::size_t a = 0; a < ws.modes.size(); ++a) quad += ws.hyp[a] * std::norm(v[a]);
    return quad - 0.5 * ws.quartic(v);
}

IntegrateResult integrate(const SpectralField& u0, const SimConfig& cfg) {
    if (cfg.dt <= 0 || cfg.T <= 0 || cfg.dt > cfg.T || cfg.record_every < 1)
        throw std::invalid_argument("integrate: invalid SimConfig");
    if (cfg.scheme != Scheme::RK4InteractionPicture)
        throw std::invalid_argument("integrate: unsupported scheme");

    Workspace ws(cfg.radius);
    std::vector<Complex> v = ws.load(u0);
    const auto steps = static_cast<std::int64_t>(std::llround(cfg.T / cfg.dt));
    constexpr double kBlowup = 1e6;

    IntegrateResult res;
    res.conserved.hamiltonian_enabled = cfg.radius <= 8;

    std::vector<Complex> k1, k2, k3, k4, tmp(v.size());
    const auto record = [&](double t, const std::vector<Complex>& state) {
        // interaction picture -> physical
        std::vector<Complex> phys(state.size());
        for (std::size_t a = 0; a < state.size(); ++a)
            phys[a] = state[a] * std::polar(1.0, -t * ws.hyp[a]);
        res.traj.times.push_back(t);
        res.traj.fields.push_back(ws.store(phys));
        res.conserved.times.push_back(t);
        double m = 0.0;
        for (const Complex& c : phys) m += std::norm(c);
        res.conserved.mass.push_back(m);
        if (res.conserved.hamiltonian_enabled) {
            double quad = 0.0;
            for (std::size_t a = 0; a < phys.size(); ++a) quad += ws.hyp[a] * std::norm(phys[a]);
            res.conserved.hamiltonian.push_back(quad - 0.5 * ws.quartic(phys));
        }
    };

    record(0.0, v);
    for (std::int64_t step = 1; step <= steps; ++step) {
        const double t = (step - 1) * cfg.dt;
        const double h = cfg.dt;
        ws.rhs(t, v, k1);
        for (std::size_t a = 0; a < v.size(); ++a) tmp[a] = v[a] + 0.5 * h * k1[a];
        ws.rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t a = 0; a < v.size(); ++a) tmp[a] = v[a] + 0.5 * h * k2[a];
        ws.rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t a = 0; a < v.size(); ++a) tmp[a] = v[a] + h * k3[a];
        ws.rhs(t + h, tmp, k4);
        for (std::size_t a = 0; a < v.size(); ++a)
            v[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);

        bool blown = false;
        for (const Complex& c : v)
            if (std::abs(c) > kBlowup) blown = true;
        if (blown) {
            res.traj.blew_up = true;
            res.traj.blowup_time = step * cfg.dt;
            break;
        }
        if (step % cfg.record_every == 0 || step == steps) record(step * cfg.dt, v);
    }
    return res;
}

SpectralField picard_second_iterate(const SpectralField& f, double t) {
    SpectralField out(3 * f.radius());
    for (const auto& [n1, c1] : f.data()) {
        for (const auto& [n2, c2] : f.data()) {
            const Complex c12 = c1 * std::conj(c2);
            for (const auto& [n3, c3] : f.data()) {
                const FreqVector n = n1 - n2 + n3;
                const auto phi = modulation(n, n1, n2, n3, ModulusSign::Hyperbolic);
                Complex G;
                if (phi == 0) {
                    G = Complex{t, 0.0};
                } else {
                    const double ph = static_cast<double>(phi);
                    G = (std::polar(1.0, t * ph) - 1.0) / (kI * ph);
                }
                const double hn = static_cast<double>(modulus_sq(n, ModulusSign::Hyperbolic));
                out.add(n, kI * std::polar(1.0, -t * hn) * c12 * c3 * G);
            }
        }
    }
    return out;
}

SpectralField make_fN(int N, double s, double p) {
    if (N < 1) throw std::invalid_argument("make_fN: N must be >= 1");
    SpectralField out(N);
    const double c = std::pow(static_cast<double>(N), -s - 1.0 / p);
    for (std::int64_t k = -N; k <= N; ++k)
        if (2 * k * k <= static_cast<std::int64_t>(N) * N) out.set({k, k}, Complex{c, 0.0});
    return out;
}

SlopeReport illposedness_slope(double s, double p, double t,
                               const std::vector<int>& N_list) {
    if (N_list.size() < 3)
        throw std::invalid_argument("illposedness_slope: need at least 3 values of N");
    if (t == 0.0) throw std::invalid_argument("illposedness_slope: t = 0 is degenerate");
    SlopeReport rep;
    rep.expected = 2.0 - 2.0 * s - 2.0 / p;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int N : N_list) {
        const double nrm = fl_norm(picard_second_iterate(make_fN(N, s, p), t), {s, p});
        if (nrm <= 0.0) throw std::runtime_error("illposedness_slope: degenerate fit (zero norm)");
        rep.norms.emplace_back(N, nrm);
        const double x = std::log(static_cast<double>(N)), y = std::log(nrm);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double n = static_cast<double>(N_list.size());
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

}  // namespace hnls
