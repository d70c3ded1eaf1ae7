#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hnls/lattice.hpp"
#include "hnls/spectral_field.hpp"

namespace hnls {

struct NormalFormParams {
    double K = 1.0;   // modulation cutoff scale, K >= 1
    double p = 2.0;   // exponent entering the thresholds ((2j+1)K)^{4p}
    double s = 0.0;   // norm regularity for diagnostics/convergence
    int J_max = 2;
    std::int64_t radius = 4;
    ModulusSign sign = ModulusSign::Hyperbolic;
};

// ((2j+1)K)^{4p}, the A_j cutoff.
double aj_threshold(int j, double K, double p);

// Default K per the contraction bookkeeping: max(1, ||u0||_{FL^{s,p}}).
double default_K(const SpectralField& u0, double s, double p);

// Evaluator for the normal-form hierarchy at fixed (params, radius). All
// inputs are interaction-picture fields u(t) = S(-t)u_phys(t) supported in
// the Galerkin disc; outputs are NOT truncated (callers project).
//
// The far sets F_j (assignments passing all of A_1^c..A_j^c) are enumerated
// once in chronicle order and cached as flat term lists; every non-root node
// is radius-bounded because it entered as a terminal of some prefix. Each
// term carries the exact bookkeeping the expansion generates: cumulative
// modulation mu~_j, weight 1/prod_{k<=j} mu~_k, and a sign with alpha = i*sign
// (the per-step factor is -(-1)^{c_b} where c_b is the conjugation parity of
// the expanded terminal).
class NormalFormEngine {
  public:
    explicit NormalFormEngine(NormalFormParams params);

    const NormalFormParams& params() const { return params_; }

    // N^(1): i sum_{Gamma(n)} e^{it Phi} u1 conj(u2) u3 (Eq. non3).
    SpectralField op_N1_full(const SpectralField& u1, const SpectralField& u2,
                             const SpectralField& u3, double t) const;

    // R^(1) = i(r1 + r2); time-independent.
    static SpectralField op_R1_resonant(const SpectralField& u1,
                                        const SpectralField& u2,
                                        const SpectralField& u3);

    // N^(1) = near + far split across the A_1 cutoff |Phi| <= (3K)^{4p}.
    std::pair<SpectralField, SpectralField> split_N1(const SpectralField& u1,
                                                     const SpectralField& u2,
                                                     const SpectralField& u3,
                                                     double t) const;

    // Boundary term N_0^(j), j >= 2: sum over F_{j-1} of
    //   sign * e^{it mu~_{j-1}} / prod_{k<=j-1} mu~_k * prod u-hat.
    SpectralField eval_N0(int j, const SpectralField& u, double t) const;

    // R^(j): j = 1 is R^(1)(u,u,u); j >= 2 substitutes R^(1)(u) at each
    // terminal of the F_{j-1} skeleton (conjugated per that terminal).
    SpectralField eval_Rj(int j, const SpectralField& u, double t) const;

    // Full generation-j operator N^(j) (no A_j filter); j = 1 is op_N1_full.
    SpectralField eval_Nj_full(int j, const SpectralField& u, double t) const;

    // Near part N_1^(j) = N^(j) - N_2^(j).
    SpectralField eval_N1j(int j, const SpectralField& u, double t) const;

    // Error term N_2^(J) from the F_J skeleton.
    SpectralField eval_N2J(int J, const SpectralField& u, double t) const;

    // Number of far-set terms at generation j (diagnostic).
    std::size_t far_term_count(int j) const;

  private:
    struct Skeleton {
        struct Factor {
            FreqVector n;
            bool conj;
        };
        // flat storage: term i owns factors [i*(2j+1), (i+1)*(2j+1))
        int j = 0;
        std::vector<Factor> factors;
        std::vector<FreqVector> root;
        std::vector<std::int64_t> mu_tilde;  // mu~_j per term
        std::vector<double> inv_prod;        // 1 / prod_{k<=j} mu~_k
        std::vector<signed char> sign;       // alpha = i * sign

        std::size_t size() const { return root.size(); }
        int factors_per_term() const { return 2 * j + 1; }
    };

    const Skeleton& far_set(int j) const;
    void build_far1() const;
    void extend_far(int j) const;  // F_{j-1} -> F_j

    NormalFormParams params_;
    mutable std::vector<Skeleton> cache_;  // cache_[j-1] = F_j
};

// Labeled right-hand-side pieces of the normal form equation at one time,
// evaluated on a physical-picture field and wrapped back with S(t)
// (Eq. NF1b): boundary = S(t) sum_{j=2..J_max} N_0^(j), integrand =
// S(t) sum_{j=1..J_max} (N_1^(j) + R^(j)). Both truncated to params.radius.
struct NfRhs {
    SpectralField boundary;
    SpectralField integrand;
};
NfRhs nf_rhs(const NormalFormEngine& engine, const SpectralField& u_phys, double t);

struct NfConvergence {
    int iterations = 0;
    double final_delta = 0.0;
    bool converged = false;
    std::vector<double> per_generation_norms;  // FL^{s,p} of N_0 / (N_1+R) pieces at T

    std::string to_json(const NormalFormParams& params) const;
};

struct NfSolution {
    std::vector<double> times;
    std::vector<SpectralField> fields;  // physical picture
    NfConvergence report;
};

// Picard fixed-point iteration on the truncated normal form equation over a
// uniform grid of `steps` intervals on [0, T]; Duhamel integrals by
// composite trapezoid; stops at trajectory FL^{s,p} distance < 1e-10 or 50
// iterations (non-convergence flagged in the report).
NfSolution nf_solve(const SpectralField& u0, double T, int steps,
                    const NormalFormParams& params);

}  // namespace hnls
