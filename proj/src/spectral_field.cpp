#include "hnls/spectral_field.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace hnls {

void SpectralField::set(FreqVector n, Complex c) {
    if (n.norm_sq() > radius_ * radius_)
        throw std::out_of_range("SpectralField::set: frequency outside declared radius");
    coef_[n] = c;
}

void SpectralField::add(FreqVector n, Complex c) {
    if (n.norm_sq() > radius_ * radius_)
        throw std::out_of_range("SpectralField::add: frequency outside declared radius");
    coef_[n] += c;
}

Complex SpectralField::at(FreqVector n) const {
    const auto it = coef_.find(n);
    return it == coef_.end() ? Complex{0.0, 0.0} : it->second;
}

SpectralField SpectralField::pruned(double eps) const {
    SpectralField out(radius_);
    for (const auto& [n, c] : coef_)
        if (std::abs(c) > eps) out.coef_[n] = c;
    return out;
}

double SpectralField::linf_norm() const {
    double m = 0.0;
    for (const auto& [n, c] : coef_) m = std::max(m, std::abs(c));
    return m;
}

std::string SpectralField::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [n, c] : coef_)
        arr.push_back({{"j", n.j}, {"k", n.k}, {"re", c.real()}, {"im", c.imag()}});
    return arr.dump(2);
}

SpectralField SpectralField::from_json(const std::string& text, std::int64_t radius) {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::runtime_error("field snapshot: expected a JSON array");
    SpectralField out(radius);
    for (const auto& rec : arr) {
        const FreqVector n{rec.at("j").get<std::int64_t>(), rec.at("k").get<std::int64_t>()};
        if (out.coef_.count(n))
            throw std::runtime_error("field snapshot: duplicate (j,k) key");
        out.set(n, Complex{rec.at("re").get<double>(), rec.at("im").get<double>()});
    }
    return out;
}

double fl_norm(const SpectralField& u, FLNormParams params) {
    if (params.p < 1.0) throw std::invalid_argument("fl_norm: p must be >= 1");
    double acc = 0.0;
    for (const auto& [n, c] : u.data()) {
        const double mag = std::abs(c);
        if (mag == 0.0) continue;
        const double jweight = 1.0 + static_cast<double>(n.norm_sq());
        acc += std::pow(jweight, params.s * params.p / 2.0) * std::pow(mag, params.p);
    }
    return std::pow(acc, 1.0 / params.p);
}

SpectralField propagate(const SpectralField& u, double t) {
    SpectralField out(u.radius());
    for (const auto& [n, c] : u.data()) {
        const double phase = -t * static_cast<double>(modulus_sq(n, ModulusSign::Hyperbolic));
        out.set(n, c * std::polar(1.0, phase));
    }
    return out;
}

namespace {

// Common driver for the cubic convolutions; `restricted` applies the
// n != n1, n3 cut of Eq. non1. Summation order is the (sorted) map order in
// (n1, n2, n3), hence deterministic.
SpectralField convolve3(const SpectralField& u1, const SpectralField& u2,
                        const SpectralField& u3, bool restricted) {
    SpectralField out(u1.radius() + u2.radius() + u3.radius());
    for (const auto& [n1, c1] : u1.data()) {
        for (const auto& [n2, c2] : u2.data()) {
            const Complex c12 = c1 * std::conj(c2);
            for (const auto& [n3, c3] : u3.data()) {
                const FreqVector n = n1 - n2 + n3;
                if (restricted && (n == n1 || n == n3)) continue;
                out.add(n, c12 * c3);
            }
        }
    }
    return out;
}

}  // namespace

SpectralField trilinear_N(const SpectralField& u1, const SpectralField& u2,
                          const SpectralField& u3) {
    return convolve3(u1, u2, u3, true);
}

SpectralField cubic_full(const SpectralField& u1, const SpectralField& u2,
                         const SpectralField& u3) {
    return convolve3(u1, u2, u3, false);
}

SpectralField trilinear_R1(const SpectralField& u1, const SpectralField& u2,
                           const SpectralField& u3) {
    SpectralField out(u1.radius());
    for (const auto& [n, c1] : u1.data()) {
        const Complex v = -c1 * std::conj(u2.at(n)) * u3.at(n);
        if (v != Complex{0.0, 0.0}) out.set(n, v);
    }
    return out;
}

SpectralField trilinear_R2(const SpectralField& u1, const SpectralField& u2,
                           const SpectralField& u3) {
    Complex ip12{0.0, 0.0}, ip32{0.0, 0.0};
    for (const auto& [m, c] : u2.data()) {
        ip12 += u1.at(m) * std::conj(c);
        ip32 += u3.at(m) * std::conj(c);
    }
    SpectralField out(std::max(u1.radius(), u3.radius()));
    for (const auto& [n, c3] : u3.data()) out.add(n, ip12 * c3);
    for (const auto& [n, c1] : u1.data()) out.add(n, ip32 * c1);
    return out;
}

SpectralField truncate(const SpectralField& u, std::int64_t radius) {
    SpectralField out(radius);
    for (const auto& [n, c] : u.data())
        if (n.norm_sq() <= radius * radius) out.set(n, c);
    return out;
}

}  // namespace hnls
