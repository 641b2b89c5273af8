#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "corona/schur.hpp"

using namespace corona;

namespace {
const double PI = 3.14159265358979323846;

OperatorParams base_params(int n) {
    OperatorParams o;
    o.n = n;
    o.a = 1.5;
    o.b = 0.5;
    o.c = 0.0;
    o.d = 0.0;
    o.p = 2.0;
    o.t = -1.0;
    return o;
}
} // namespace

TEST_CASE("boundedness window") {
    OperatorParams o = base_params(2);
    CHECK(predicted_bounded(o));
    CHECK(window_margin(o) > 0.0);
    o.c = -4.0; // c = -2n boundary
    CHECK(!predicted_bounded(o));
    CHECK(window_margin(o) == doctest::Approx(0.0));
    o = base_params(2);
    o.d = 0.5;
    CHECK(!predicted_bounded(o));
    o = base_params(2);
    o.t = -5.0; // t + 1 = -4 <= -pa = -3
    CHECK(!predicted_bounded(o));
    o = base_params(2);
    o.d = -1.0; // moving d below zero never flips a bounded prediction
    CHECK(predicted_bounded(o));
}

TEST_CASE("adjoint parameter involution") {
    OperatorParams o = base_params(1);
    o.p = 3.0;
    OperatorParams a = adjoint_params(o);
    CHECK(a.a == doctest::Approx(o.b - o.t));
    CHECK(a.b == doctest::Approx(o.a + o.t));
    CHECK(a.p == doctest::Approx(1.5)); // conjugate exponent
    OperatorParams aa = adjoint_params(a);
    CHECK(aa.a == doctest::Approx(o.a));
    CHECK(aa.b == doctest::Approx(o.b));
    CHECK(aa.p == doctest::Approx(o.p));
}

TEST_CASE("rudin series closed form at n = 1") {
    // int_{B_1} |1 - w zbar|^{-2} dV = pi (-log(1-u))/u, u = |z|^2
    for (double u : {0.0, 0.2, 0.5, 0.9}) {
        double got = rudin_series(1, 0.0, 2.0, 0.0, u);
        double want = u == 0.0 ? PI : PI * (-std::log1p(-u)) / u;
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
    // beta = 0 has no z dependence: the plain weighted volume
    double v = rudin_series(1, 1.0, 0.0, 0.0, 0.7);
    CHECK(v == doctest::Approx(PI / 2.0).epsilon(1e-12));
}

TEST_CASE("rudin probe straddles the threshold") {
    RudinProbe div1 = rudin_probe(1, 0.0, 2.5); // beta - alpha = n + 1.5
    CHECK(!div1.predicted_finite);
    CHECK(!div1.measured_finite);
    CHECK(div1.fitted_exponent == doctest::Approx(div1.predicted_exponent).epsilon(0.25));
    RudinProbe fin1 = rudin_probe(1, 0.0, 1.5);
    CHECK(fin1.predicted_finite);
    CHECK(fin1.measured_finite);
    RudinProbe div2 = rudin_probe(2, 0.5, 4.0);
    CHECK(!div2.predicted_finite);
    CHECK(!div2.measured_finite);
    RudinProbe fin2 = rudin_probe(2, 0.5, 3.0);
    CHECK(fin2.predicted_finite);
    CHECK(fin2.measured_finite);
    CHECK(div1.values[2] > div1.values[1]);
}

TEST_CASE("tpsi reductions agree with quadrature") {
    OperatorParams o = base_params(1);
    BallRule rule = ball_rule(1, 4);
    for (double r : {0.0, 0.4}) {
        BallPoint z(CVec{cplx(r, 0.0)});
        for (double eps : {1.25, 2.0}) {
            TpsiCheck c = tpsi_identity_check(o, eps, z, rule);
            CHECK(c.rel_gap < 1e-6);
            TpsiCheck cs = tpsistar_identity_check(o, eps, z, rule);
            CHECK(cs.rel_gap < 1e-6);
        }
    }
}

TEST_CASE("apply_T matches the radial series on radial data") {
    // with f = (1-|w|^2)^eps the direct quadrature equals the series reduction,
    // exercised through apply_T directly
    OperatorParams o = base_params(1);
    BallRule rule = ball_rule(1, 4);
    BallPoint z(CVec{cplx(0.3, 0.2)});
    double eps = 1.5;
    cplx got = apply_T(o, [&](const BallPoint& w) {
        return cplx(std::pow(1.0 - w.nsq, eps), 0.0);
    }, z, rule);
    double kernel_exp = o.n + 1 + o.a + o.b + o.c + o.d;
    double want = std::pow(1.0 - z.nsq, o.a) *
                  rudin_series(o.n, o.b + eps, kernel_exp, o.c, z.nsq);
    CHECK(std::abs(got.real() - want) < 1e-6 * want);
    CHECK(std::abs(got.imag()) < 1e-9 * want);
}

TEST_CASE("adjoint pairing on a shared rule") {
    OperatorParams o;
    o.n = 1;
    o.a = 1.0;
    o.b = 0.5;
    o.c = 0.0;
    o.d = 0.0;
    o.p = 2.0;
    o.t = -0.5;
    double gap = adjoint_pairing_gap(
        o, [](const BallPoint& w) { return cplx(1.0, 0.0) + w.z[0]; },
        [](const BallPoint& w) { return std::conj(w.z[0]) + cplx(0.0, 0.5); }, ball_rule(1, 1));
    CHECK(gap < 1e-10);
}

TEST_CASE("schur certificate finds a weight inside the window") {
    OperatorParams good;
    good.n = 2;
    good.a = 2.0;
    good.b = 0.5;
    good.c = 0.0;
    good.d = 0.0;
    good.p = 2.0;
    good.t = -1.0;
    CertificateResult cr = schur_certificate(good);
    CHECK(cr.window_nonempty);
    CHECK(cr.found);
    CHECK(cr.s_lo < cr.best_s);
    CHECK(cr.best_s < cr.s_hi);
    CHECK(cr.best_bound > 0.0);
    OperatorParams bad = good;
    bad.a = 0.5;
    bad.t = -3.0;
    CertificateResult cb = schur_certificate(bad);
    CHECK(!cb.window_nonempty);
    CHECK(!cb.found);
}

TEST_CASE("default frontier grid shape") {
    std::vector<OperatorParams> grid = default_frontier_grid();
    CHECK(grid.size() == 25);
    for (const OperatorParams& o : grid) {
        CHECK(o.n == 2);
        CHECK(o.p == 2.0);
        CHECK(o.t == -3.0);
        CHECK(o.c == 0.0);
        CHECK(o.d == 0.0);
        // bounded iff -pa < t+1, i.e. a > 1 here
        CHECK(predicted_bounded(o) == (o.a > 1.0));
    }
}

TEST_CASE("frontier classifies a clear pair of rows") {
    std::vector<OperatorParams> grid;
    OperatorParams u;
    u.n = 2;
    u.p = 2.0;
    u.t = -3.0;
    u.c = 0.0;
    u.d = 0.0;
    u.b = 0.0;
    u.a = 0.5; // t + 1 = -2 <= -pa = -1: unbounded with margin 1
    grid.push_back(u);
    OperatorParams b = u;
    b.a = 2.5; // comfortably inside the window
    grid.push_back(b);
    Rng rng(601);
    FrontierReport rep = norm_frontier(grid, 1, 2, rng);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].decided);
    CHECK(rep.rows[0].verdict == "unbounded");
    CHECK(rep.rows[0].agree);
    CHECK(rep.rows[1].decided);
    CHECK(rep.rows[1].verdict == "bounded");
    CHECK(rep.rows[1].agree);
    std::string csv = frontier_csv(rep);
    CHECK(csv.rfind("a,b,c,d,p,t,n,predicted,norm_L1,norm_L2,ratio,verdict", 0) == 0);
    CHECK(rep.decided == 2);
    CHECK(rep.agreements == 2);
}

TEST_CASE("rudin series guards") {
    CHECK_THROWS(rudin_series(1, -1.5, 2.0, 0.0, 0.5)); // A <= -1
    CHECK_THROWS(rudin_series(1, 0.0, 2.0, -2.0, 0.5)); // n + c/2 <= 0
    CHECK_THROWS(rudin_series(1, 0.0, 2.0, 0.0, 1.0));  // zsq at the boundary
}
