#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "hnls/lattice.hpp"

namespace hnls {

using Complex = std::complex<double>;

struct FLNormParams {
    double s = 0.0;
    double p = 2.0;  // p in [1, infinity)
};

// Finitely supported Fourier coefficients u-hat: Z^2 -> C, with a declared
// Galerkin radius bounding the support in Euclidean norm.
class SpectralField {
  public:
    using Map = std::map<FreqVector, Complex>;

    explicit SpectralField(std::int64_t radius = 0) : radius_(radius) {}

    std::int64_t radius() const { return radius_; }

    void set(FreqVector n, Complex c);
    void add(FreqVector n, Complex c);
    Complex at(FreqVector n) const;  // 0 when absent

    const Map& data() const { return coef_; }
    bool empty() const { return coef_.empty(); }

    // Drop coefficients with |c| <= eps (normalization before comparison).
    SpectralField pruned(double eps = 0.0) const;

    // Largest coefficient modulus (0 for the empty field) = FL^infinity norm.
    double linf_norm() const;

    // JSON snapshot: array of {j, k, re, im}; loader rejects duplicate keys.
    std::string to_json() const;
    static SpectralField from_json(const std::string& text, std::int64_t radius);

  private:
    Map coef_;
    std::int64_t radius_;
};

// ||<n>^s u-hat||_{l^p}, <n> = (1 + |n|^2)^{1/2} with Euclidean |n|.
double fl_norm(const SpectralField& u, FLNormParams params);

// Free propagator S(t) = e^{it box}: multiplies u-hat(n) by e^{-it|n|_-^2}.
SpectralField propagate(const SpectralField& u, double t);

// N(u1,u2,u3)(n) = sum over n = n1-n2+n3, n != n1, n3 of u1(n1) conj(u2(n2)) u3(n3).
SpectralField trilinear_N(const SpectralField& u1, const SpectralField& u2,
                          const SpectralField& u3);

// r1(u1,u2,u3)(n) = -u1(n) conj(u2(n)) u3(n).
SpectralField trilinear_R1(const SpectralField& u1, const SpectralField& u2,
                           const SpectralField& u3);

// r2(u1,u2,u3)(n) = (sum_m u1 conj(u2)) u3(n) + (sum_m u3 conj(u2)) u1(n).
SpectralField trilinear_R2(const SpectralField& u1, const SpectralField& u2,
                           const SpectralField& u3);

// Unrestricted cubic convolution u1 * conj(u2) * u3 (no n != n1, n3 cut);
// equals trilinear_N + trilinear_R1 + trilinear_R2 when u1 = u2 = u3.
SpectralField cubic_full(const SpectralField& u1, const SpectralField& u2,
                         const SpectralField& u3);

// Galerkin projection onto {|n| <= radius}.
SpectralField truncate(const SpectralField& u, std::int64_t radius);

}  // namespace hnls
