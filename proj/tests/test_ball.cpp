#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "corona/ball.hpp"
#include "corona/rng.hpp"

using namespace corona;

namespace {

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

} // namespace

TEST_CASE("ball point validation") {
    CHECK_THROWS(BallPoint(CVec{}));
    CHECK_THROWS(BallPoint(CVec{cplx(1.0, 0.0)}));
    CHECK_THROWS(BallPoint(CVec{cplx(0.8, 0.0), cplx(0.0, 0.7)}));
    BallPoint p(CVec{cplx(0.3, -0.1)});
    CHECK(p.nsq == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("seven faces agree away from the diagonal") {
    Rng rng(101);
    for (int n = 1; n <= 3; ++n) {
        double worst = 0.0;
        for (int it = 0; it < 2000; ++it) {
            BallPoint w = rand_pt(rng, n, 0.9);
            BallPoint z = w;
            do {
                z = rand_pt(rng, n, 0.9);
            } while (comp_norm_sq(sub(w.z, z.z)) < 0.01);
            DeltaFaces df = delta_faces(w, z);
            double mx = df.faces[0], mn = df.faces[0];
            for (double f : df.faces) {
                mx = std::max(mx, f);
                mn = std::min(mn, f);
            }
            worst = std::max(worst, (mx - mn) / std::max(std::abs(mx), 1e-300));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("delta special values") {
    Rng rng(102);
    // n = 1: Delta = |w - z|^2
    for (int it = 0; it < 400; ++it) {
        BallPoint w = rand_pt(rng, 1, 0.95), z = rand_pt(rng, 1, 0.95);
        double d = delta_canonical(w, z);
        CHECK(d == doctest::Approx(std::norm(w.z[0] - z.z[0])).epsilon(1e-10));
    }
    // Delta(w, 0) = |w|^2
    for (int n = 1; n <= 3; ++n) {
        BallPoint w = rand_pt(rng, n, 0.9);
        BallPoint o(CVec(n, cplx(0.0, 0.0)));
        CHECK(delta_canonical(w, o) == doctest::Approx(w.nsq).epsilon(1e-12));
    }
}

TEST_CASE("delta lower bounds") {
    Rng rng(103);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 3000; ++it) {
            BallPoint w = rand_pt(rng, n, 0.97), z = rand_pt(rng, n, 0.97);
            double d = delta_canonical(w, z);
            double wz = comp_norm_sq(sub(w.z, z.z));
            CHECK(d >= (1.0 - z.nsq) * wz - 1e-14);
            double rdiff = std::sqrt(z.nsq) - std::sqrt(w.nsq);
            CHECK(d >= rdiff * rdiff - 1e-14);
        }
    }
}

TEST_CASE("projection split") {
    Rng rng(104);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 200; ++it) {
            BallPoint a = rand_pt(rng, n, 0.9), z = rand_pt(rng, n, 0.9);
            CVec p = proj_p(a.z, z.z), q = proj_q(a.z, z.z);
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(p[j] + q[j] - z.z[j]) < 1e-13);
            // Q_a z orthogonal to a
            CHECK(std::abs(dot_wzbar(a.z, q)) < 1e-13);
            // P_a z parallel to a: P applied twice is P
            CVec pp = proj_p(a.z, p);
            for (int j = 0; j < n; ++j) CHECK(std::abs(pp[j] - p[j]) < 1e-13);
        }
        CVec zero(n, cplx(0.0, 0.0));
        BallPoint z = rand_pt(rng, n, 0.9);
        for (cplx v : proj_p(zero, z.z)) CHECK(std::abs(v) == 0.0);
    }
}

TEST_CASE("moebius involution and fixed points") {
    Rng rng(105);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 200; ++it) {
            BallPoint a = rand_pt(rng, n, 0.85), z = rand_pt(rng, n, 0.85);
            CVec fz = moebius(a, z);
            CHECK(comp_norm_sq(fz) < 1.0);
            BallPoint fzp(fz);
            CVec back = moebius(a, fzp);
            for (int j = 0; j < n; ++j) CHECK(std::abs(back[j] - z.z[j]) < 1e-11);
            // phi_a(a) = 0, phi_a(0) = a
            CVec at_a = moebius(a, a);
            for (int j = 0; j < n; ++j) CHECK(std::abs(at_a[j]) < 1e-13);
            CVec at_0 = moebius(a, BallPoint(CVec(n, cplx(0.0, 0.0))));
            for (int j = 0; j < n; ++j) CHECK(std::abs(at_0[j] - a.z[j]) < 1e-13);
        }
    }
}

TEST_CASE("moebius norm identity") {
    // 1 - |phi_a(z)|^2 = (1-|a|^2)(1-|z|^2)/|1 - zbar.a|^2
    Rng rng(106);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 300; ++it) {
            BallPoint a = rand_pt(rng, n, 0.9), z = rand_pt(rng, n, 0.9);
            double lhs = 1.0 - comp_norm_sq(moebius(a, z));
            double den = std::norm(1.0 - dot_wzbar(z.z, a.z));
            double rhs = (1.0 - a.nsq) * (1.0 - z.nsq) / den;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("metric bundle ties to delta") {
    Rng rng(107);
    for (int n = 1; n <= 2; ++n) {
        for (int it = 0; it < 300; ++it) {
            BallPoint w = rand_pt(rng, n, 0.9), z = rand_pt(rng, n, 0.9);
            MetricBundle m = metric_bundle(w, z);
            double dd = delta_canonical(w, z);
            CHECK(m.d == doctest::Approx(std::sqrt(std::max(dd, 0.0))).epsilon(1e-10));
            CHECK(m.rho * m.rho * std::norm(1.0 - dot_wzbar(w.z, z.z)) ==
                  doctest::Approx(dd).epsilon(1e-9));
            CHECK(m.beta == doctest::Approx(0.5 * std::log((1 + m.rho) / (1 - m.rho))));
        }
    }
}

TEST_CASE("triangle inequalities on sampled triples") {
    Rng rng(108);
    int viol_dh = 0, viol_rho = 0, viol_quasi = 0;
    for (int n = 1; n <= 2; ++n) {
        for (int it = 0; it < 20000; ++it) {
            BallPoint a = rand_pt(rng, n, 0.95), b = rand_pt(rng, n, 0.95),
                      c = rand_pt(rng, n, 0.95);
            MetricBundle ab = metric_bundle(a, b), ac = metric_bundle(a, c),
                         cb = metric_bundle(c, b);
            if (ab.delta_half > ac.delta_half + cb.delta_half) ++viol_dh;
            if (ab.rho > ac.rho + cb.rho) ++viol_rho;
            if (ab.d > 2.0 * (ac.d + cb.d)) ++viol_quasi;
        }
    }
    CHECK(viol_dh == 0);
    CHECK(viol_rho == 0);
    CHECK(viol_quasi == 0);
}

TEST_CASE("elementary Q_a inequality") {
    Rng rng(109);
    int viol = 0;
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 20000; ++it) {
            BallPoint a = rand_pt(rng, n, 0.99), w = rand_pt(rng, n, 0.99);
            double q2 = comp_norm_sq(proj_q(a.z, w.z));
            double rhs = 2.0 * std::abs(1.0 - dot_wzbar(w.z, a.z));
            if (q2 > rhs) ++viol;
        }
    }
    CHECK(viol == 0);
}

TEST_CASE("measure weights") {
    BallPoint z(CVec{cplx(0.5, 0.0), cplx(0.0, 0.5)});
    double base = 1.0 - z.nsq;
    CHECK(measure_weight(z, WeightKind::lebesgue) == 1.0);
    CHECK(measure_weight(z, WeightKind::invariant) ==
          doctest::Approx(std::pow(base, -3.0)).epsilon(1e-13));
    CHECK(measure_weight(z, WeightKind::nu, 1.5) ==
          doctest::Approx(std::pow(base, 1.5)).epsilon(1e-13));
}

TEST_CASE("compensated sums") {
    std::vector<double> xs(1000, 0.1);
    CHECK(comp_sum(xs) == doctest::Approx(100.0).epsilon(1e-14));
    CVec big{cplx(1e16, 0.0), cplx(1.0, 0.0), cplx(-1e16, 0.0)};
    CHECK(comp_sum_c(big).real() == doctest::Approx(1.0));
}
