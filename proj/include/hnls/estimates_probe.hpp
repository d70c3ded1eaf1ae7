#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hnls/lattice.hpp"

namespace hnls {

struct KernelQuery {
    double s = 0.5;
    double p = 2.0;  // p > 1 so p' = p/(p-1) is finite
    double epsilon = 0.05;
    ModulusSign sign = ModulusSign::Hyperbolic;
    std::int64_t radius = 8;       // lattice truncation bounding n1, n3
    std::int64_t sigma0_range = 64;
    double K = 1.0;
    int j = 2;
    bool sup_over_mu = false;  // switch to the eta9a unshifted sup-over-mu form
};

// Discrete space-time field on a uniform tau grid: (n, tau index) -> value,
// tau = index * tau_spacing.
using SpaceTimeField = std::map<std::pair<FreqVector, std::int64_t>, std::complex<double>>;

// (sum_n sum_tau <n>^{sp} <tau + |n|_-^2>^{bp} |v|^p * tau_spacing)^{1/p}.
double xsb_norm(const SpaceTimeField& v, double s, double b, double p,
                double tau_spacing);

// Second-generation kernel over triples n = n1 - n2 + n3, n != n1, n3 with
// |n1|, |n3| <= radius:
//   sum <n>^{sp'} / (<Phi - sigma0>^{1 + eps p'} prod_j <n_j>^{sp'})
// or, when q.sup_over_mu, the eta9a form sup_mu of the unshifted sum over
// Gamma_mu (no sigma0 factor).
double kernel_sum_j2(FreqVector n, std::int64_t sigma0, const KernelQuery& q);

// Unreduced trilinear kernel I_{n,tau}(M) with the double tau integral done
// by trapezoid quadrature over [-window, window]^2 (low-resolution
// cross-check of the Lemma A.2 reduction; radius <= 4 intended).
double trilinear_kernel_unreduced(FreqVector n, double tau, const KernelQuery& q,
                                  double window, double spacing);

// Reduced comparator for the cross-check: <sigma0>^{-(1/(p-1) - 2 eps p')}
// times kernel_sum_j2 at integer sigma0.
double trilinear_kernel_reduced(FreqVector n, std::int64_t sigma0,
                                const KernelQuery& q);

// Truncated modulation sum S^(j) = sum over |alpha_k| <= alpha_radius of
// 1 / prod_{k=1}^{j-1} max{|alpha~_k|, ((2k+1)K)^{4p}}^{p'} via prefix-sum
// dynamic programming over the cumulative variable.
double modulation_sum_S(int j, double K, double p, std::int64_t alpha_radius);

// B_p of the eta7 two-term bound: sup over T >= 3^{4p} of
// T^{p'-1} * sum_m max{|m|, T}^{-p'} (numerically, with an integral tail
// upper bound). Recorded once per p.
double modulation_bound_Bp(double p);

// Closed eta8 bound B_p^{j-1} K^{4p'(1-j)} ((2j-1)!!)^{-4p'}.
double modulation_sum_bound(int j, double K, double p);

struct ThresholdRow {
    double p, s;
    std::int64_t radius;
    double sup_value;
    double slope;               // log-log slope over the top two octaves
    std::string classification; // "bounded" / "growing"
};

// For each s and radius, sup over sampled (n, sigma0) of kernel_sum_j2;
// growth classified by the fitted slope over the top two octaves (> 0.1 =>
// "growing"). The n samples are a fixed deterministic set scaling with the
// radius; sigma0 runs over the integer grid plus the stationary value
// -|n|_-^2.
std::vector<ThresholdRow> threshold_scan(double p, const std::vector<double>& s_values,
                                         const std::vector<std::int64_t>& radii,
                                         std::int64_t sigma0_range, double epsilon,
                                         ModulusSign sign);

std::string threshold_scan_csv(const std::vector<ThresholdRow>& rows);

}  // namespace hnls
