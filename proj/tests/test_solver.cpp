#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "corona/solver.hpp"

using namespace corona;

namespace {

const double PI = 3.14159265358979323846;

BallPoint rand_pt(Rng& rng, int n, double rmax) {
    for (;;) {
        CVec z(n);
        double nsq = 0.0;
        for (int j = 0; j < n; ++j) {
            double re = rng.uniform(-rmax, rmax), im = rng.uniform(-rmax, rmax);
            z[j] = cplx(re, im);
            nsq += re * re + im * im;
        }
        if (nsq <= rmax * rmax) return BallPoint(std::move(z));
    }
}

std::vector<BallPoint> eval_grid(Rng& rng, int n, int count, double rmax) {
    std::vector<BallPoint> out;
    for (int i = 0; i < count; ++i) out.push_back(rand_pt(rng, n, rmax));
    return out;
}

} // namespace

TEST_CASE("finite difference operators") {
    BallPoint z(CVec{cplx(0.3, -0.2)});
    auto conj_f = [](const BallPoint& p) { return std::conj(p.z[0]); };
    auto holo_f = [](const BallPoint& p) { return p.z[0] * p.z[0]; };
    CHECK(std::abs(fd_dbar_scalar(conj_f, z, 0, 1e-3) - cplx(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(fd_dbar_scalar(holo_f, z, 0, 1e-3)) < 1e-10);
    cplx d = fd_deriv([](double t) { return cplx(std::exp(2.0 * t), 0.0); }, 1e-3);
    CHECK(std::abs(d - cplx(2.0, 0.0)) < 1e-11);
}

TEST_CASE("fd dbar of a form evaluator") {
    int n = 2;
    auto eta = [](const BallPoint& p) {
        FormValue v;
        v[IncIndex{1}] = std::conj(p.z[1]);
        v[IncIndex{2}] = cplx(0.0, 0.0);
        return v;
    };
    BallPoint z(CVec{cplx(0.2, 0.1), cplx(-0.1, 0.3)});
    FormValue d = fd_dbar_form(eta, n, 1, z, 1e-3);
    // dbar(conj(z2) dz1) = dzbar2 ^ dzbar1 = -dzbar1 ^ dzbar2
    CHECK(std::abs(d.at(IncIndex{1, 2}) - cplx(-1.0, 0.0)) < 1e-9);
}

TEST_CASE("kernel op params validation") {
    KernelOpParams p;
    p.kind = KernelKind::C0q;
    p.n = 2;
    p.q = 0;
    p.s = 0;
    CHECK_NOTHROW(p.validate());
    p.s = 3;
    CHECK_THROWS(p.validate());
    p.kind = KernelKind::Phi_ns_ell;
    p.s = 2; // must exceed n
    CHECK_THROWS(p.validate());
    p.s = 3;
    CHECK_NOTHROW(p.validate());
    p.kind = KernelKind::S_ns;
    p.q = 1;
    CHECK_THROWS(p.validate());
}

TEST_CASE("pullback and exclusion strategies agree") {
    Rng rng(501);
    int n = 1;
    PolyForm eta = PolyForm::zero(n, 1);
    PolyField c = PolyField::constant(n, 1.0);
    c.add_term({0}, {1}, cplx(0.3, 0.2));
    eta.accumulate(IncIndex{1}, c);
    BallRule rule = ball_rule(n, 4);
    KernelOpParams p;
    p.kind = KernelKind::C0q;
    p.n = n;
    p.q = 0;
    p.constant = 1.0 / PI;
    FormQ ef = eta.fn();
    for (int it = 0; it < 4; ++it) {
        BallPoint z = rand_pt(rng, n, 0.5);
        p.strategy = SingularStrategy::pullback;
        FormValue a = apply_kernel_op(p, ef, z, rule);
        p.strategy = SingularStrategy::exclusion;
        FormValue b = apply_kernel_op(p, ef, z, rule);
        CHECK(form_value_sup(form_value_sub(a, b)) < 2e-3);
    }
}

TEST_CASE("dbar solve reproduces the conjugate coordinate") {
    int n = 1;
    PolyForm eta = PolyForm::zero(n, 1);
    eta.accumulate(IncIndex{1}, PolyField::constant(n, 1.0));
    BallRule rule = ball_rule(n, 4);
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    Rng rng(502);
    std::vector<BallPoint> pts = eval_grid(rng, n, 10, 0.6);
    SolveOptions opt;
    opt.measure_residual = false;
    DbarSolution sol = solve_dbar(eta, 0, rule, tbl, pts, opt);
    for (size_t i = 0; i < pts.size(); ++i) {
        cplx u = sol.u.values[i].at(IncIndex{});
        CHECK(std::abs(u - std::conj(pts[i].z[0])) < 1e-5);
    }
    CHECK(sol.report.closedness_mode == "structural");
}

TEST_CASE("dbar solve measures a small residual for polynomial data at n = 2") {
    int n = 2;
    PolyForm eta = PolyForm::zero(n, 1);
    PolyField c1 = PolyField::zero(n);
    c1.add_term({0, 0}, {0, 1}, cplx(0.5, 0.0)); // conj(z2) dzbar1
    PolyForm base = PolyForm::zero(n, 0);
    PolyField u0 = PolyField::zero(n);
    u0.add_term({0, 0}, {1, 1}, cplx(1.0, 0.0));
    u0.add_term({1, 0}, {0, 1}, cplx(0.0, 0.5));
    base.accumulate(IncIndex{}, u0);
    eta = base.dbar(); // exactly closed data
    BallRule rule = ball_rule(n, 3);
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    Rng rng(503);
    std::vector<BallPoint> pts = eval_grid(rng, n, 4, 0.45);
    SolveOptions opt;
    opt.residual_points = 4;
    opt.max_abs_z = 0.45;
    DbarSolution sol = solve_dbar(eta, 0, rule, tbl, pts, opt);
    CHECK(sol.report.residual >= 0.0);
    CHECK(sol.report.residual < 0.1);
    CHECK(sol.report.closedness_mode == "exact_poly");
    CHECK(sol.report.closedness == 0.0);
}

TEST_CASE("ibp radial identity for polynomials") {
    Rng rng(504);
    BallRule rule = ball_rule(1, 3);
    PolyField f = PolyField::zero(1);
    f.add_term({2}, {1}, cplx(0.7, -0.4));
    f.add_term({0}, {0}, cplx(0.3, 0.0));
    for (int b = 0; b <= 2; ++b)
        for (int m = 1; m <= 2; ++m) {
            IbpGap g = verify_ibp_radial(f, b, m, rule);
            CHECK(g.gap < 1e-9);
        }
}

TEST_CASE("calibration recovers the Cauchy constant") {
    CalibrationResult r = calibrate_op_constant(1, 0, 0, ball_rule(1, 4));
    CHECK(r.spread < 1e-3);
    CHECK(r.snapped);
    CHECK(r.num == 1);
    CHECK(r.den == 1);
    CHECK(r.pi_exp == -1);
    CHECK(r.value == doctest::Approx(1.0 / PI).epsilon(1e-9));
}

TEST_CASE("corona solve single generator is exact division") {
    int n = 1;
    VecField g;
    g.n = n;
    PolyField g1 = PolyField::constant(n, 0.8);
    g1.add_term({1}, {0}, 0.1);
    g.entries = {g1.fn()};
    PolyField h = PolyField::constant(n, 1.0);
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    CoronaProblem prob(n, g, 0.5, h.fn(), ball_rule(n, 2));
    CoronaOptions opt;
    opt.grid_points = 16;
    opt.measure_dbar = false;
    CoronaSolution sol = corona_solve(prob, tbl, opt);
    CHECK(sol.residual_bezout < 1e-12);
}

TEST_CASE("corona solve constant generators stay exact") {
    int n = 2;
    VecField g;
    g.n = n;
    g.entries = {PolyField::constant(n, cplx(0.8, 0.1)).fn(),
                 PolyField::constant(n, cplx(0.2, -0.5)).fn()};
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    CoronaProblem prob(n, g, 0.5, PolyField::constant(n, 1.0).fn(), ball_rule(n, 2));
    CoronaOptions opt;
    opt.grid_points = 12;
    opt.measure_dbar = false;
    opt.check_closedness = false;
    CoronaSolution sol = corona_solve(prob, tbl, opt);
    CHECK(sol.residual_bezout < 1e-12);
}

TEST_CASE("corona solve detects infeasible data with a witness") {
    int n = 2;
    VecField g;
    g.n = n;
    g.entries = {PolyField::coord(n, 0).fn(), PolyField::coord(n, 1).fn()};
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    bool threw = false;
    try {
        CoronaProblem prob(n, g, 0.3, PolyField::constant(n, 1.0).fn(), ball_rule(n, 2));
        CoronaOptions opt;
        opt.grid_points = 8;
        corona_solve(prob, tbl, opt);
    } catch (const CoronaInfeasible& e) {
        threw = true;
        CHECK(comp_norm_sq(e.witness) < 0.05);
        CHECK(e.value < 0.3 * 0.3);
    }
    CHECK(threw);
}

TEST_CASE("corona solve small bezout residual for the line pair") {
    int n = 1;
    VecField g;
    g.n = n;
    PolyField g1 = PolyField::coord(n, 0);
    PolyField g2 = PolyField::constant(n, 1.0);
    g2.add_term({1}, {0}, -2.0);
    g.entries = {g1.fn(), g2.fn()};
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    CoronaProblem prob(n, g, 0.4, PolyField::constant(n, 1.0).fn(), ball_rule(n, 3));
    CoronaOptions opt;
    opt.grid_points = 20;
    opt.measure_dbar = false;
    CoronaSolution sol = corona_solve(prob, tbl, opt);
    CHECK(sol.residual_bezout < 1e-4);
    REQUIRE(!sol.stages.empty());
    CHECK(sol.stages[0].strategy == "pullback");
}

TEST_CASE("once exchange identity on manufactured data") {
    Rng rng(505);
    PolyForm eta = PolyForm::zero(2, 2);
    PolyField c = PolyField::constant(2, cplx(0.5, 0.1));
    c.add_term({0, 0}, {1, 0}, cplx(0.3, 0.0));
    eta.accumulate(IncIndex{1, 2}, c);
    OnceReport rep =
        verify_once(eta.fn(), 1, ball_rule(2, 5), sphere_rule(2, 5), rng, 6, 2, 0.5);
    CHECK(rep.max_gap < 1e-6);
    CHECK(rep.stokes_max < 1e-6);
    CHECK(rep.points == 6);
}
