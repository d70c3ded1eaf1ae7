#pragma once

#include <cstdint>
#include <vector>

#include "hnls/spectral_field.hpp"

namespace hnls {

enum class Scheme { RK4InteractionPicture, PicardOnly };

struct SimConfig {
    std::int64_t radius = 8;
    double dt = 1e-3;
    double T = 1.0;
    Scheme scheme = Scheme::RK4InteractionPicture;
    int record_every = 1;
};

struct ConservedReport {
    std::vector<double> times;
    std::vector<double> mass;         // sum |u-hat|^2
    std::vector<double> hamiltonian;  // only when enabled (radius <= 8)
    bool hamiltonian_enabled = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> fields;  // physical picture
    bool blew_up = false;
    double blowup_time = 0.0;
};

struct IntegrateResult {
    Trajectory traj;
    ConservedReport conserved;
};

double mass_of(const SpectralField& u);

// sum |n|_-^2 |u-hat|^2 - 1/2 sum_{n1-n2+n3-n4=0} u1 conj(u2) u3 conj(u4).
// Contract: quartic tracking at radius <= 8 only (callers disable above).
double hamiltonian_of(const SpectralField& u);

// Classical RK4 on the interaction-picture system dv/dt = i S(-t)[cubic(S(t)v)]
// restricted to |n| <= radius; trajectory in the physical picture. Step is
// aborted (blow-up guard) if any coefficient magnitude exceeds 1e6, returning
// the partial trajectory with blew_up set.
IntegrateResult integrate(const SpectralField& u0, const SimConfig& cfg);

// Second Picard iterate A[f](t) = i int_0^t S(t-t')(|S(t')f|^2 S(t')f) dt',
// evaluated exactly in Fourier variables:
//   A-hat(t,n) = i e^{-it|n|_-^2} sum_{n=n1-n2+n3} f1 conj(f2) f3 * G(t,Phi)
// with G(t,0) = t and G(t,Phi) = (e^{itPhi}-1)/(iPhi) (exact branch, not a limit).
SpectralField picard_second_iterate(const SpectralField& f, double t);

// f_N = N^{-s-1/p} sum over diagonal modes (k,k) with sqrt(2)|k| <= N.
SpectralField make_fN(int N, double s, double p);

struct SlopeReport {
    double slope = 0.0;
    double expected = 0.0;  // 2 - 2s - 2/p
    std::vector<std::pair<int, double>> norms;
};

// Least-squares slope of log ||A[f_N](t)||_{FL^{s,p}} against log N.
SlopeReport illposedness_slope(double s, double p, double t,
                               const std::vector<int>& N_list);

}  // namespace hnls
