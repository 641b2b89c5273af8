#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "corona/forms.hpp"
#include "corona/kernels.hpp"
#include "corona/quadrature.hpp"
#include "corona/rng.hpp"

namespace corona {

// How the integrand handles the diagonal w = z.  pullback substitutes
// w = phi_z(zeta) so every kernel factor becomes a product of smooth terms;
// exclusion keeps the original nodes, multiplies by a C^2 radial window that
// vanishes near z, and removes the leading window error by Richardson
// extrapolation in the window radius.
enum class SingularStrategy { pullback, exclusion };

// C0q: plain kernel block of output degree q (s must be 0).
// Phi_ns_ell: ameliorated block, integer s > n.
// S_ns: holomorphic projection-type kernel, no (w - z) contraction, q must be 0.
enum class KernelKind { C0q, Phi_ns_ell, S_ns };

struct KernelOpParams {
    KernelKind kind = KernelKind::C0q;
    int n = 1;
    int q = 0;      // output degree; input forms have degree q + 1 (except S_ns)
    int ell = -1;   // kernel level; -1 means equal to q
    int s = 0;      // 0 for C0q, > n otherwise
    int dbar_m = 0; // 0: contract eta itself; 1: contract dbar_m(eta) with m = 1
    double constant = 1.0;
    SingularStrategy strategy = SingularStrategy::pullback;
    double eps = 0.15;      // exclusion window radius; ramp on [eps, 1.5 eps]
    double max_abs_z = 0.7; // evaluation envelope

    void validate() const;
};

// values of the coefficients of a (0,q)-form at one point, keyed by index set
using FormValue = std::map<IncIndex, cplx>;
using FormEval = std::function<FormValue(const BallPoint&)>;

// Volume integral of the kernel block against the contraction of eta.  The
// result is keyed by the output index sets; the stored constant multiplies
// everything.  eta must have degree q + 1 (degree 0 for S_ns).
FormValue apply_kernel_op(const KernelOpParams& p, const FormQ& eta, const BallPoint& z,
                          const BallRule& rule);
FormValue apply_kernel_op_fn(const KernelOpParams& p, const FormEval& eta, const BallPoint& z,
                             const BallRule& rule); // dbar_m must be 0

// cached coefficient samples at the nodes of a rule, for repeated exclusion passes
struct FormSamples {
    int n = 0, q = 0;
    std::vector<IncIndex> index_set;
    std::vector<std::vector<cplx>> values; // [node][position in index_set]
};
FormSamples sample_form(const FormEval& eta, int n, int q, const BallRule& rule);
FormValue apply_kernel_op_sampled(const KernelOpParams& p, const FormSamples& eta,
                                  const BallPoint& z, const BallRule& rule);

// Richardson-refined central difference: evaluates f at +-h and +-h/2,
// leaving an O(h^4) truncation error.
cplx fd_deriv(const std::function<cplx(double)>& f, double h);
// dbar_j of a scalar field: (d/dx_j + i d/dy_j) / 2
cplx fd_dbar_scalar(const std::function<cplx(const BallPoint&)>& F, const BallPoint& z, int j,
                    double h);
// full finite-difference dbar of a (0,q)-form evaluator, output degree q + 1
FormValue fd_dbar_form(const FormEval& F, int n, int q, const BallPoint& z, double h);

double form_value_sup(const FormValue& v);
FormValue form_value_sub(const FormValue& a, const FormValue& b);

enum class ClosednessMode { exact_poly, finite_difference, skip };

struct SolveOptions {
    SingularStrategy strategy = SingularStrategy::pullback;
    ClosednessMode closedness = ClosednessMode::exact_poly;
    double closedness_tol = 1e-8;
    int closedness_points = 4;
    bool measure_residual = true;
    int residual_points = 12;
    double fd_step = 1e-3;
    double max_abs_z = 0.7;
    double eps = 0.15;
    std::uint64_t seed = 20260814u;
};

struct DbarReport {
    int n = 0, q_in = 0, s = 0;
    std::string closedness_mode;
    double closedness = 0.0; // measured dbar(eta), or 0 when structural/exact
    double residual = -1.0;  // sup |fd dbar(u) - eta| over test points, -1 if skipped
    int residual_points = 0;
    double constant = 1.0;
};

struct SampledForm {
    int n = 0, q = 0;
    std::vector<BallPoint> points;
    std::vector<FormValue> values;
};

struct DbarSolution {
    SampledForm u;
    DbarReport report;
    FormEval u_eval;
};

// Solve dbar(u) = eta for eta of degree q_in in [1, n], with the kernel block
// of output degree q_in - 1 and amelioration s (s = 0 for the plain block).
// The multiplicative constant comes from the table row (n, q_in - 1, s).
DbarSolution solve_dbar(const PolyForm& eta, int s, const BallRule& rule,
                        const ConstantsTable& tbl, const std::vector<BallPoint>& eval_points,
                        const SolveOptions& opt = {});
DbarSolution solve_dbar_fn(const FormQ& eta, int s, const BallRule& rule,
                           const ConstantsTable& tbl, const std::vector<BallPoint>& eval_points,
                           const SolveOptions& opt = {});

struct CoronaInfeasible : std::runtime_error {
    CVec witness;
    double value;
    CoronaInfeasible(CVec w, double v);
};

// Corona data: holomorphic generators g_1..g_N with inf |g| >= delta on the
// ball, holomorphic h, quadrature rule, and the amelioration schedule
// s_q = n + q + 2 for the stage of input degree q (overridable).
struct CoronaProblem {
    int n = 1;
    VecField g;
    double delta = 0.0;
    FieldFn h;
    BallRule rule;
    std::vector<int> s_params; // entry q-1 is s for stage q; empty = defaults

    CoronaProblem(int n_, VecField g_, double delta_, FieldFn h_, BallRule rule_,
                  std::vector<int> s_params_ = {});
    int s_for_stage(int q) const;
};

struct StageReport {
    int q = 0; // input degree; the stage produces the degree q - 1 potential
    int s = 0;
    int components = 0;
    std::string strategy;        // "pullback" | "exclusion-cached"
    double closedness = -1.0;    // -1 when structural
    double closedness_tol = 0.0; // 0 when not gated
};

struct CoronaOptions {
    int grid_points = 60;
    int dbar_points = 8;
    double fd_step = 1e-3;
    double max_abs_z = 0.6;
    std::uint64_t seed = 20260814u;
    bool measure_dbar = true;
    bool check_closedness = true;
    double eps = 0.15; // exclusion radius for cached later stages
};

struct CoronaSolution {
    int n = 0, N = 0;
    std::vector<BallPoint> grid;
    std::vector<std::vector<cplx>> f; // [grid point][generator]
    double residual_bezout = 0.0;     // sup |sum g_j f_j - h| on the grid
    double residual_dbar = -1.0;      // sup of fd |dbar f_j|, -1 if skipped
    std::vector<StageReport> stages;
    std::function<std::vector<cplx>(const BallPoint&)> f_eval;
};

CoronaSolution corona_solve(const CoronaProblem& prob, const ConstantsTable& tbl,
                            const CoronaOptions& opt = {});

// int (1-|w|^2)^b Psi dV against int (1-|w|^2)^{b+m} R_b^m Psi dV
struct IbpGap {
    cplx lhs, rhs;
    double gap; // |lhs - rhs| / max(1, |lhs|)
};
IbpGap verify_ibp_radial(const PolyField& psi, int b, int m, const BallRule& rule);
IbpGap verify_ibp_radial_fn(const FieldFn& psi, int n, int b, int m, const BallRule& rule);

// Degree-lowering exchange on the ameliorated blocks: applying the plain
// block of level ell to the contraction of eta equals the stated combination
// of the level ell block against dbar_1(eta) and the level ell - 1 block,
// for 1 <= ell <= q <= n - 1.  Also measures the Stokes boundary integrand
// that justifies discarding the sphere term.
struct OnceReport {
    double max_gap = 0.0;
    double stokes_max = 0.0;
    int points = 0;
};
OnceReport verify_once(const FormQ& eta, int ell, const BallRule& rule, const SphereRule& srule,
                       Rng& rng, int npts = 20, int stokes_pts = 5, double max_abs_z = 0.55);

// calibration: recover the product constant of a kernel block by solving a
// manufactured problem and comparing fd dbar(u_raw) against the data
struct CalibrationResult {
    int n = 0, q = 0, s = 0;
    double raw = 0.0;    // mean measured constant before snapping
    double spread = 0.0; // max relative deviation across probe points
    double value = 0.0;  // snapped when possible, else raw
    bool snapped = false;
    long long num = 0, den = 1;
    int pi_exp = 0; // value = (num / den) * pi^pi_exp when snapped
};

// nearest (p/q) * pi^e with q <= 720, |e| <= 6; smallest q wins, then smallest |e|
bool snap_constant(double raw, double rel_tol, long long& num, long long& den, int& pi_exp);
CalibrationResult calibrate_op_constant(int n, int q, int s, const BallRule& rule,
                                        double fd_step = 1e-3);
// assemble the full shipped table; throws if any probe spread exceeds spread_tol
ConstantsTable calibrate_constants(int level_n1, int level_n2, double spread_tol = 1e-3);

} // namespace corona
