#include "hnls/normal_form.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hnls {

double aj_threshold(int j, double K, double p) {
    return std::pow((2.0 * j + 1.0) * K, 4.0 * p);
}

double default_K(const SpectralField& u0, double s, double p) {
    return std::max(1.0, fl_norm(u0, {s, p}));
}

namespace {

// O(1) coefficient lookup over the Galerkin disc.
struct DenseField {
    std::int64_t R;
    std::vector<Complex> v;

    DenseField(const SpectralField& u, std::int64_t radius) : R(radius), v((2 * radius + 1) * (2 * radius + 1)) {
        for (const auto& [n, c] : u.data()) {
            if (n.norm_sq() > R * R)
                throw std::invalid_argument("normal_form: field support exceeds engine radius");
            v[idx(n)] = c;
        }
    }
    std::size_t idx(FreqVector n) const {
        return static_cast<std::size_t>((n.j + R) * (2 * R + 1) + (n.k + R));
    }
    Complex at(FreqVector n) const {
        if (n.norm_sq() > R * R) return {0.0, 0.0};
        return v[idx(n)];
    }
};

std::vector<FreqVector> disc_points(std::int64_t radius) {
    std::vector<FreqVector> out;
    for (std::int64_t j = -radius; j <= radius; ++j)
        for (std::int64_t k = -radius; k <= radius; ++k)
            if (j * j + k * k <= radius * radius) out.push_back({j, k});
    return out;
}

SpectralField minus(const SpectralField& a, const SpectralField& b) {
    SpectralField out(std::max(a.radius(), b.radius()));
    for (const auto& [n, c] : a.data()) out.add(n, c);
    for (const auto& [n, c] : b.data()) out.add(n, -c);
    return out;
}

SpectralField plus(const SpectralField& a, const SpectralField& b) {
    SpectralField out(std::max(a.radius(), b.radius()));
    for (const auto& [n, c] : a.data()) out.add(n, c);
    for (const auto& [n, c] : b.data()) out.add(n, c);
    return out;
}

constexpr Complex kI{0.0, 1.0};

}  // namespace

NormalFormEngine::NormalFormEngine(NormalFormParams params) : params_(params) {
    if (params_.K < 1.0 || params_.J_max < 1 || params_.radius < 1)
        throw std::invalid_argument("NormalFormEngine: require K >= 1, J_max >= 1, radius >= 1");
}

SpectralField NormalFormEngine::op_N1_full(const SpectralField& u1, const SpectralField& u2,
                                           const SpectralField& u3, double t) const {
    SpectralField out(3 * params_.radius);
    for (const auto& [n1, c1] : u1.data()) {
        for (const auto& [n2, c2] : u2.data()) {
            const Complex c12 = c1 * std::conj(c2);
            for (const auto& [n3, c3] : u3.data()) {
                const FreqVector n = n1 - n2 + n3;
                if (n == n1 || n == n3) continue;
                const auto phi = modulation(n, n1, n2, n3, params_.sign);
                out.add(n, kI * std::polar(1.0, t * static_cast<double>(phi)) * c12 * c3);
            }
        }
    }
    return out;
}

SpectralField NormalFormEngine::op_R1_resonant(const SpectralField& u1,
                                               const SpectralField& u2,
                                               const SpectralField& u3) {
    SpectralField r = plus(trilinear_R1(u1, u2, u3), trilinear_R2(u1, u2, u3));
    SpectralField out(r.radius());
    for (const auto& [n, c] : r.data()) out.set(n, kI * c);
    return out;
}

std::pair<SpectralField, SpectralField> NormalFormEngine::split_N1(
    const SpectralField& u1, const SpectralField& u2, const SpectralField& u3,
    double t) const {
    const double T1 = aj_threshold(1, params_.K, params_.p);
    SpectralField near_part(3 * params_.radius), far_part(3 * params_.radius);
    for (const auto& [n1, c1] : u1.data()) {
        for (const auto& [n2, c2] : u2.data()) {
            const Complex c12 = c1 * std::conj(c2);
            for (const auto& [n3, c3] : u3.data()) {
                const FreqVector n = n1 - n2 + n3;
                if (n == n1 || n == n3) continue;
                const auto phi = modulation(n, n1, n2, n3, params_.sign);
                const Complex v = kI * std::polar(1.0, t * static_cast<double>(phi)) * c12 * c3;
                if (std::abs(static_cast<double>(phi)) <= T1)
                    near_part.add(n, v);
                else
                    far_part.add(n, v);
            }
        }
    }
    return {near_part, far_part};
}

void NormalFormEngine::build_far1() const {
    const double T1 = aj_threshold(1, params_.K, params_.p);
    Skeleton sk;
    sk.j = 1;
    const auto disc = disc_points(params_.radius);
    for (const FreqVector n1 : disc)
        for (const FreqVector n2 : disc)
            for (const FreqVector n3 : disc) {
                const FreqVector n = n1 - n2 + n3;
                if (n == n1 || n == n3) continue;
                const auto phi = modulation(n, n1, n2, n3, params_.sign);
                if (std::abs(static_cast<double>(phi)) <= T1) continue;
                sk.factors.push_back({n1, false});
                sk.factors.push_back({n2, true});
                sk.factors.push_back({n3, false});
                sk.root.push_back(n);
                sk.mu_tilde.push_back(phi);
                sk.inv_prod.push_back(1.0 / static_cast<double>(phi));
                sk.sign.push_back(1);
            }
    cache_.push_back(std::move(sk));
}

void NormalFormEngine::extend_far(int j) const {
    const Skeleton& prev = cache_[static_cast<std::size_t>(j) - 2];  // F_{j-1}
    const double Tj = aj_threshold(j, params_.K, params_.p);
    // One expansion step changes mu~ by at most 16 R^2 (all four frequencies
    // of the expanded vertex lie in the disc), so terms that cannot reach the
    // threshold are pruned wholesale.
    const double max_step = 16.0 * static_cast<double>(params_.radius * params_.radius);
    const auto disc = disc_points(params_.radius);
    const std::int64_t r2 = params_.radius * params_.radius;
    constexpr std::size_t kTermCap = 50'000'000;

    Skeleton sk;
    sk.j = j;
    const int fpt = prev.factors_per_term();
    for (std::size_t i = 0; i < prev.size(); ++i) {
        if (std::abs(static_cast<double>(prev.mu_tilde[i])) + max_step <= Tj) continue;
        const Skeleton::Factor* f = &prev.factors[i * fpt];
        for (int b = 0; b < fpt; ++b) {
            const FreqVector nb = f[b].n;
            const bool parity = f[b].conj;
            for (const FreqVector c1 : disc) {
                if (c1 == nb) continue;
                for (const FreqVector c2 : disc) {
                    const FreqVector c3 = nb - c1 + c2;
                    if (c3.norm_sq() > r2 || c3 == nb) continue;
                    std::int64_t mu = modulation(nb, c1, c2, c3, params_.sign);
                    if (parity) mu = -mu;
                    const std::int64_t mt = prev.mu_tilde[i] + mu;
                    if (std::abs(static_cast<double>(mt)) <= Tj) continue;
                    for (int a = 0; a < fpt; ++a) {
                        if (a != b) {
                            sk.factors.push_back(f[a]);
                            continue;
                        }
                        sk.factors.push_back({c1, parity});
                        sk.factors.push_back({c2, !parity});
                        sk.factors.push_back({c3, parity});
                    }
                    sk.root.push_back(prev.root[i]);
                    sk.mu_tilde.push_back(mt);
                    sk.inv_prod.push_back(prev.inv_prod[i] / static_cast<double>(mt));
                    // alpha update: alpha_{j} = -(-1)^{c_b} alpha_{j-1}
                    sk.sign.push_back(static_cast<signed char>(parity ? prev.sign[i] : -prev.sign[i]));
                    if (sk.size() > kTermCap)
                        throw std::runtime_error("normal_form: far-set term cap exceeded");
                }
            }
        }
    }
    cache_.push_back(std::move(sk));
}

const NormalFormEngine::Skeleton& NormalFormEngine::far_set(int j) const {
    if (j < 1) throw std::invalid_argument("far_set: j must be >= 1");
    while (static_cast<int>(cache_.size()) < j) {
        if (cache_.empty())
            build_far1();
        else
            extend_far(static_cast<int>(cache_.size()) + 1);
    }
    return cache_[static_cast<std::size_t>(j) - 1];
}

std::size_t NormalFormEngine::far_term_count(int j) const { return far_set(j).size(); }

namespace {

Complex factor_value_impl(const DenseField& u, FreqVector n, bool conj) {
    const Complex c = u.at(n);
    return conj ? std::conj(c) : c;
}

// sum over terminals b of value(n_b, conj_b) * prod_{a != b} factors, via
// prefix/suffix products (terminal counts are tiny). Factor is the engine's
// private per-term record; deduced to avoid naming it at namespace scope.
template <class Factor, class ValueFn>
Complex substituted_sum(const Factor* f, int fpt, const DenseField& du,
                        const ValueFn& value) {
    thread_local std::vector<Complex> pre, suf;
    pre.assign(static_cast<std::size_t>(fpt) + 1, Complex{1.0, 0.0});
    suf.assign(static_cast<std::size_t>(fpt) + 1, Complex{1.0, 0.0});
    for (int a = 0; a < fpt; ++a)
        pre[a + 1] = pre[a] * factor_value_impl(du, f[a].n, f[a].conj);
    for (int a = fpt - 1; a >= 0; --a)
        suf[a] = suf[a + 1] * factor_value_impl(du, f[a].n, f[a].conj);
    Complex acc{0.0, 0.0};
    for (int b = 0; b < fpt; ++b) acc += pre[b] * value(f[b].n, f[b].conj) * suf[b + 1];
    return acc;
}

}  // namespace

SpectralField NormalFormEngine::eval_N0(int j, const SpectralField& u, double t) const {
    if (j < 2) throw std::invalid_argument("eval_N0: no boundary term at generation 1");
    const Skeleton& sk = far_set(j - 1);
    const DenseField du(u, params_.radius);
    SpectralField out(3 * params_.radius);
    const int fpt = sk.factors_per_term();
    for (std::size_t i = 0; i < sk.size(); ++i) {
        Complex prod{1.0, 0.0};
        for (int a = 0; a < fpt; ++a) {
            const auto& f = sk.factors[i * fpt + a];
            prod *= factor_value_impl(du, f.n, f.conj);
            if (prod == Complex{0.0, 0.0}) break;
        }
        if (prod == Complex{0.0, 0.0}) continue;
        const Complex w = static_cast<double>(sk.sign[i]) * sk.inv_prod[i] *
                          std::polar(1.0, t * static_cast<double>(sk.mu_tilde[i]));
        out.add(sk.root[i], w * prod);
    }
    return out;
}

SpectralField NormalFormEngine::eval_N2J(int J, const SpectralField& u, double t) const {
    if (J < 1) throw std::invalid_argument("eval_N2J: J must be >= 1");
    const Skeleton& sk = far_set(J);
    const DenseField du(u, params_.radius);
    SpectralField out(3 * params_.radius);
    const int fpt = sk.factors_per_term();
    for (std::size_t i = 0; i < sk.size(); ++i) {
        Complex prod{1.0, 0.0};
        for (int a = 0; a < fpt; ++a) {
            const auto& f = sk.factors[i * fpt + a];
            prod *= factor_value_impl(du, f.n, f.conj);
            if (prod == Complex{0.0, 0.0}) break;
        }
        if (prod == Complex{0.0, 0.0}) continue;
        // alpha e^{it mu~_J} / prod_{k<J} mu~_k, and 1/prod_{k<J} = mu~_J * inv_prod
        const Complex w = kI * static_cast<double>(sk.sign[i]) *
                          static_cast<double>(sk.mu_tilde[i]) * sk.inv_prod[i] *
                          std::polar(1.0, t * static_cast<double>(sk.mu_tilde[i]));
        out.add(sk.root[i], w * prod);
    }
    return out;
}

SpectralField NormalFormEngine::eval_Rj(int j, const SpectralField& u, double t) const {
    if (j < 1) throw std::invalid_argument("eval_Rj: j must be >= 1");
    if (j == 1) return op_R1_resonant(u, u, u);
    const SpectralField wr = op_R1_resonant(u, u, u);
    const DenseField dwr(wr, params_.radius);
    const Skeleton& sk = far_set(j - 1);
    const DenseField du(u, params_.radius);
    SpectralField out(3 * params_.radius);
    const int fpt = sk.factors_per_term();
    const auto value = [&](FreqVector n, bool conj) {
        const Complex c = dwr.at(n);
        return conj ? std::conj(c) : c;
    };
    for (std::size_t i = 0; i < sk.size(); ++i) {
        const Complex s = substituted_sum(&sk.factors[i * fpt], fpt, du, value);
        if (s == Complex{0.0, 0.0}) continue;
        const Complex w = -static_cast<double>(sk.sign[i]) * sk.inv_prod[i] *
                          std::polar(1.0, t * static_cast<double>(sk.mu_tilde[i]));
        out.add(sk.root[i], w * s);
    }
    return out;
}

SpectralField NormalFormEngine::eval_Nj_full(int j, const SpectralField& u, double t) const {
    if (j < 1) throw std::invalid_argument("eval_Nj_full: j must be >= 1");
    if (j == 1) return op_N1_full(u, u, u, t);
    // N^(1)(u)(t, .) restricted to the disc; substitution targets lie there.
    const SpectralField wn = truncate(op_N1_full(u, u, u, t), params_.radius);
    const DenseField dwn(wn, params_.radius);
    const Skeleton& sk = far_set(j - 1);
    const DenseField du(u, params_.radius);
    SpectralField out(3 * params_.radius);
    const int fpt = sk.factors_per_term();
    const auto value = [&](FreqVector n, bool conj) {
        const Complex c = dwn.at(n);
        return conj ? std::conj(c) : c;
    };
    for (std::size_t i = 0; i < sk.size(); ++i) {
        const Complex s = substituted_sum(&sk.factors[i * fpt], fpt, du, value);
        if (s == Complex{0.0, 0.0}) continue;
        const Complex w = -static_cast<double>(sk.sign[i]) * sk.inv_prod[i] *
                          std::polar(1.0, t * static_cast<double>(sk.mu_tilde[i]));
        out.add(sk.root[i], w * s);
    }
    return out;
}

SpectralField NormalFormEngine::eval_N1j(int j, const SpectralField& u, double t) const {
    if (j < 1) throw std::invalid_argument("eval_N1j: j must be >= 1");
    if (j == 1) return split_N1(u, u, u, t).first;
    return minus(eval_Nj_full(j, u, t), eval_N2J(j, u, t));
}

NfRhs nf_rhs(const NormalFormEngine& engine, const SpectralField& u_phys, double t) {
    const auto& prm = engine.params();
    if (prm.J_max < 2) throw std::invalid_argument("nf_rhs: J_max must be >= 2");
    const SpectralField u = propagate(u_phys, -t);  // interaction picture
    SpectralField boundary(3 * prm.radius), integrand(3 * prm.radius);
    for (int j = 2; j <= prm.J_max; ++j) boundary = plus(boundary, engine.eval_N0(j, u, t));
    for (int j = 1; j <= prm.J_max; ++j) {
        integrand = plus(integrand, engine.eval_N1j(j, u, t));
        integrand = plus(integrand, engine.eval_Rj(j, u, t));
    }
    NfRhs out{truncate(propagate(boundary, t), prm.radius),
              truncate(propagate(integrand, t), prm.radius)};
    return out;
}

NfSolution nf_solve(const SpectralField& u0, double T, int steps,
                    const NormalFormParams& params) {
    if (T <= 0 || steps < 1) throw std::invalid_argument("nf_solve: require T > 0, steps >= 1");
    const NormalFormEngine engine(params);
    const std::int64_t R = params.radius;
    const FLNormParams norm{params.s, params.p};
    const double h = T / steps;

    const SpectralField u0t = truncate(u0, R);
    const auto sum_N0 = [&](const SpectralField& u, double t) {
        SpectralField acc(R);
        for (int j = 2; j <= params.J_max; ++j)
            acc = plus(acc, truncate(engine.eval_N0(j, u, t), R));
        return acc;
    };
    const auto sum_N1R = [&](const SpectralField& u, double t) {
        SpectralField acc(R);
        for (int j = 1; j <= params.J_max; ++j) {
            acc = plus(acc, truncate(engine.eval_N1j(j, u, t), R));
            acc = plus(acc, truncate(engine.eval_Rj(j, u, t), R));
        }
        return acc;
    };

    std::vector<SpectralField> U(static_cast<std::size_t>(steps) + 1, u0t);
    const SpectralField B0 = sum_N0(u0t, 0.0);

    NfSolution sol;
    sol.report.converged = false;
    constexpr int kMaxIter = 50;
    for (int it = 1; it <= kMaxIter; ++it) {
        std::vector<SpectralField> G(U.size(), SpectralField(R));
        std::vector<SpectralField> newU(U.size(), SpectralField(R));
        for (std::size_t i = 0; i < U.size(); ++i) G[i] = sum_N1R(U[i], h * i);
        SpectralField integral(R);
        double delta = 0.0;
        for (std::size_t i = 0; i < U.size(); ++i) {
            if (i > 0) {
                // composite trapezoid accumulation
                SpectralField inc(R);
                for (const auto& [n, c] : G[i - 1].data()) inc.add(n, 0.5 * h * c);
                for (const auto& [n, c] : G[i].data()) inc.add(n, 0.5 * h * c);
                integral = plus(integral, inc);
            }
            SpectralField rhs = plus(u0t, minus(sum_N0(U[i], h * i), B0));
            newU[i] = truncate(plus(rhs, integral), R);
            delta = std::max(delta, fl_norm(minus(newU[i], U[i]), norm));
        }
        U = std::move(newU);
        sol.report.iterations = it;
        sol.report.final_delta = delta;
        if (delta < 1e-10) {
            sol.report.converged = true;
            break;
        }
    }

    for (int j = 1; j <= params.J_max; ++j) {
        SpectralField piece = plus(truncate(engine.eval_N1j(j, U.back(), T), R),
                                   truncate(engine.eval_Rj(j, U.back(), T), R));
        if (j >= 2) piece = plus(piece, truncate(engine.eval_N0(j, U.back(), T), R));
        sol.report.per_generation_norms.push_back(fl_norm(piece, norm));
    }

    sol.times.resize(U.size());
    sol.fields.reserve(U.size());
    for (std::size_t i = 0; i < U.size(); ++i) {
        sol.times[i] = h * i;
        sol.fields.push_back(propagate(U[i], sol.times[i]));
    }
    return sol;
}

std::string NfConvergence::to_json(const NormalFormParams& params) const {
    nlohmann::ordered_json j;
    j["J_max"] = params.J_max;
    j["radius"] = params.radius;
    j["K"] = params.K;
    j["p"] = params.p;
    j["s"] = params.s;
    j["iterations"] = iterations;
    j["final_delta"] = final_delta;
    j["converged"] = converged;
    j["per_generation_norms"] = per_generation_norms;
    return j.dump(2);
}

}  // namespace hnls
