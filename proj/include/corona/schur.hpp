#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "corona/ball.hpp"
#include "corona/quadrature.hpp"
#include "corona/rng.hpp"

namespace corona {

// T f(z) = (1-|z|^2)^a int (1-|w|^2)^b Delta^{c/2} |1 - w.zbar|^{-(n+1+a+b+c+d)} f(w) dV(w),
// studied on L^p of the weight nu_t = (1-|z|^2)^t
struct OperatorParams {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double p = 2.0, t = 0.0;
    int n = 1;
};

// c > -2n, -pa < t + 1 < p(b + 1), d <= 0
bool predicted_bounded(const OperatorParams& o);
// smallest slack among c + 2n, (t + 1) + pa, p(b + 1) - (t + 1)
double window_margin(const OperatorParams& o);

// quadrature application; a negative c routes through the diagonal pullback
cplx apply_T(const OperatorParams& o, const std::function<cplx(const BallPoint&)>& f,
             const BallPoint& z, const BallRule& rule);

// adjoint in the nu_t pairing: swaps (a, b) into (b - t, a + t)
OperatorParams adjoint_params(const OperatorParams& o);
// |<Tf, g>_t - <f, T*g>_t| relative gap, one rule for both slots
double adjoint_pairing_gap(const OperatorParams& o,
                           const std::function<cplx(const BallPoint&)>& f,
                           const std::function<cplx(const BallPoint&)>& g, const BallRule& rule);

// int_B (1-|zeta|^2)^A |zeta|^c |1 - zeta.zbar|^{-beta} dV as an exact power
// series in |z|^2; needs A > -1 and n + c/2 > 0
double rudin_series(int n, double A, double beta, double c, double zsq);

// T applied to psi_eps(w) = (1-|w|^2)^eps collapses to a weight power times a
// radial series; both evaluations are compared
struct TpsiCheck {
    double direct = 0.0;
    double reduced = 0.0;
    double rel_gap = 0.0;
};
TpsiCheck tpsi_identity_check(const OperatorParams& o, double eps, const BallPoint& z,
                              const BallRule& rule);
TpsiCheck tpsistar_identity_check(const OperatorParams& o, double eps, const BallPoint& z,
                                  const BallRule& rule);

// Schur test with the weight family h_s = (1-|zeta|^2)^s: the admissible s
// window and the measured sup ratios for T and its adjoint
struct CertificateResult {
    bool window_nonempty = false;
    double s_lo = 0.0, s_hi = 0.0;
    bool found = false;
    double best_s = 0.0;
    double best_bound = 0.0; // min over tried s of max(A1, A2)
};
CertificateResult schur_certificate(const OperatorParams& o, int s_count = 9);

// growth classification of int (1-|w|^2)^alpha |1 - w.zbar|^{-beta} dV:
// finite sup iff beta - alpha < n + 1, else growth (1-|z|^2)^{n+1+alpha-beta}
struct RudinProbe {
    bool predicted_finite = false;
    bool measured_finite = false;
    double fitted_exponent = 0.0;
    double predicted_exponent = 0.0;
    std::array<double, 3> values{}; // at |z| = 0.9, 0.99, 0.999
};
RudinProbe rudin_probe(int n, double alpha, double beta);

// empirical two-level norm estimates: ratio near 1 under refinement reads as
// bounded, sustained growth as unbounded, the rest indeterminate
struct FrontierRow {
    OperatorParams prm;
    bool predicted = false;
    double margin = 0.0;
    double norm_l1 = 0.0, norm_l2 = 0.0, ratio = 0.0;
    std::string verdict; // "bounded" | "unbounded" | "indeterminate"
    bool decided = false;
    bool agree = false;
};
struct FrontierReport {
    std::vector<FrontierRow> rows;
    int decided = 0;
    int agreements = 0;
    double band = 0.05; // rows with margin below this stay undecided
};
std::vector<OperatorParams> default_frontier_grid();
FrontierReport norm_frontier(const std::vector<OperatorParams>& grid, int level_lo, int level_hi,
                             Rng& rng);
std::string frontier_csv(const FrontierReport& rep);

} // namespace corona
