#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "corona/kernels.hpp"
#include "corona/quadrature.hpp"
#include "corona/rng.hpp"
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

} // namespace

TEST_CASE("section pairing and closed derivatives") {
    Rng rng(401);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 300; ++it) {
            BallPoint w = rand_pt(rng, n, 0.95), z = rand_pt(rng, n, 0.95);
            SectionVal sv = section(w, z);
            cplx dot(0.0, 0.0);
            for (int j = 0; j < n; ++j) dot += sv.s[j] * (w.z[j] - z.z[j]);
            CHECK(std::abs(dot - sv.pairing) < 1e-13);
            CHECK(std::abs(sv.pairing - delta_canonical(w, z)) < 1e-12);
        }
    }
    // spot value closed forms at n = 2
    CVec w{cplx(0.3, 0.1), cplx(-0.2, 0.2)}, z{cplx(0.1, -0.4), cplx(0.25, 0.0)};
    cplx wz = dot_wzbar(w, z);
    CHECK(std::abs(section_dwbar(0, 0, w, z) - ((1.0 - wz) + std::conj(z[0]) * w[0])) < 1e-14);
    CHECK(std::abs(section_dwbar(0, 1, w, z) - std::conj(z[0]) * w[1]) < 1e-14);
    CHECK(std::abs(section_dw(0, 1, w, z) -
                   (std::conj(z[0]) * std::conj(w[1]) - std::conj(w[0]) * std::conj(z[1]))) <
          1e-14);
    CHECK(std::abs(section_dw(0, 0, w, z)) < 1e-14);
    double bw = 1.0 - comp_norm_sq(w);
    CHECK(std::abs(section_dzbar(0, 1, w, z) + std::conj(w[0]) * w[1]) < 1e-14);
    CHECK(std::abs(section_dzbar(1, 1, w, z) + (std::conj(w[1]) * w[1] + bw)) < 1e-14);
}

TEST_CASE("plain kernel structure") {
    Rng rng(402);
    for (int n = 1; n <= 3; ++n) {
        BallPoint w = rand_pt(rng, n, 0.8), z = rand_pt(rng, n, 0.8);
        for (int q = 0; q < n; ++q) {
            KernelCoeff kc = kernel_c0q(n, q, w, z);
            size_t expect = 0;
            for (const IncIndex& J : all_inc(n, q)) expect += n - J.size();
            CHECK(kc.coeffs.size() == expect);
            CHECK(std::abs(kc.common_factor - phi_nq(n, q, w, z)) < 1e-13);
            for (const auto& [key, val] : kc.coeffs) {
                CHECK(!inc_contains(key.first, key.second));
                (void)val;
            }
        }
    }
}

TEST_CASE("n = 1 kernel is the Cauchy kernel") {
    Rng rng(403);
    for (int it = 0; it < 500; ++it) {
        BallPoint w = rand_pt(rng, 1, 0.9), z = rand_pt(rng, 1, 0.9);
        if (std::abs(w.z[0] - z.z[0]) < 1e-2) continue;
        cplx got = kernel_c0q(1, 0, w, z).coeffs.at({IncIndex{}, 1});
        cplx want = 1.0 / (w.z[0] - z.z[0]);
        CHECK(std::abs(got - want) < 1e-14 * std::abs(want));
    }
}

TEST_CASE("two display golden forms at n = 2") {
    Rng rng(404);
    for (int it = 0; it < 200; ++it) {
        BallPoint w = rand_pt(rng, 2, 0.85), z = rand_pt(rng, 2, 0.85);
        if (comp_norm_sq(sub(w.z, z.z)) < 1e-3) continue;
        double dd = delta_stable(w, z);
        cplx wz = 1.0 - dot_wzbar(w.z, z.z);
        KernelCoeff k0 = kernel_c0q(2, 0, w, z);
        cplx f0 = wz / (dd * dd);
        CHECK(std::abs(k0.coeffs.at({IncIndex{}, 2}) -
                       (std::conj(z.z[1]) - std::conj(w.z[1])) * f0) < 1e-13);
        CHECK(std::abs(k0.coeffs.at({IncIndex{}, 1}) +
                       (std::conj(z.z[0]) - std::conj(w.z[0])) * f0) < 1e-13);
        KernelCoeff k1 = kernel_c0q(2, 1, w, z);
        cplx f1 = (1.0 - w.nsq) / (dd * dd);
        CHECK(std::abs(k1.coeffs.at({IncIndex{1}, 2}) -
                       (std::conj(w.z[1]) - std::conj(z.z[1])) * f1) < 1e-13);
        CHECK(std::abs(k1.coeffs.at({IncIndex{2}, 1}) +
                       (std::conj(w.z[0]) - std::conj(z.z[0])) * f1) < 1e-13);
    }
}

TEST_CASE("psi polynomial pins") {
    CHECK(psi_poly(1, 1, 0).coefficients == std::vector<Rat>{Rat{1, 1}});
    CHECK(psi_poly(1, 2, 0).coefficients == std::vector<Rat>{Rat{1, 2}});
    CHECK(psi_poly(1, 3, 0).coefficients == std::vector<Rat>{Rat{1, 3}});
    CHECK(psi_poly(2, 1, 0).coefficients == (std::vector<Rat>{Rat{1, 1}, Rat{-1, 2}}));
    CHECK(psi_poly(2, 1, 1).coefficients == (std::vector<Rat>{Rat{0, 1}, Rat{1, 2}}));
    for (int n = 1; n <= 5; ++n)
        for (int k = 1; k <= 4; ++k) CHECK(psi_poly(n, k, 0).coefficients[0] == Rat{1, k});
}

TEST_CASE("psi eval_shifted strips exactly q zeros") {
    for (int n = 2; n <= 4; ++n)
        for (int q = 0; q < n; ++q) {
            const PsiPoly& p = psi_poly(n, 2, q);
            for (double t : {0.15, 0.4, 0.8}) {
                double lhs = p.eval(t);
                double rhs = std::pow(t, q) * p.eval_shifted(t);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
            }
            CHECK(std::abs(p.eval_shifted(0.0)) > 0.0);
        }
}

TEST_CASE("ameliorated kernel closed forms") {
    Rng rng(405);
    for (int it = 0; it < 100; ++it) {
        BallPoint w = rand_pt(rng, 1, 0.8), z = rand_pt(rng, 1, 0.8);
        double dd = delta_stable(w, z);
        cplx wbarz = 1.0 - dot_wzbar(z.z, w.z);
        double bw = 1.0 - w.nsq;
        // (n,s,q) = (1,2,0): pi (1-|w|^2) / (Delta (1-wbar.z))
        cplx want12 = PI * bw / (dd * wbarz);
        CHECK(std::abs(amel_phi(1, 2, 0, w, z) - want12) < 1e-11 * std::abs(want12));
        // (n,s,q) = (1,3,0): pi^2 (1-|w|^2)^2 / (2 Delta (1-wbar.z)^2)
        cplx want13 = PI * PI * bw * bw / (2.0 * dd * wbarz * wbarz);
        CHECK(std::abs(amel_phi(1, 3, 0, w, z) - want13) < 1e-11 * std::abs(want13));
    }
    for (int it = 0; it < 100; ++it) {
        BallPoint w = rand_pt(rng, 2, 0.8), z = rand_pt(rng, 2, 0.8);
        double dd = delta_stable(w, z);
        cplx wbarz = 1.0 - dot_wzbar(z.z, w.z);
        double bw = 1.0 - w.nsq;
        // (n,s,q) = (2,3,1): pi (1-|w|^2)^2 / (2 Delta^2 (1-wbar.z))
        cplx want231 = PI * bw * bw / (2.0 * dd * dd * wbarz);
        CHECK(std::abs(amel_phi(2, 3, 1, w, z) - want231) < 1e-10 * std::abs(want231));
    }
    CHECK(amel_prefactor(1, 2) == doctest::Approx(PI));
    CHECK(amel_prefactor(1, 3) == doctest::Approx(PI * PI));
    CHECK(amel_prefactor(2, 3) == doctest::Approx(PI));
}

TEST_CASE("amel term expansion balances and sums back") {
    Rng rng(406);
    for (int n = 1; n <= 2; ++n)
        for (int s = n + 1; s <= n + 2; ++s)
            for (int q = 0; q < n; ++q) {
                std::vector<AmelTerm> terms = amel_terms(n, s, q);
                CHECK(!terms.empty());
                for (const AmelTerm& t : terms) CHECK(t.balance() == n + 1);
                for (int it = 0; it < 20; ++it) {
                    BallPoint w = rand_pt(rng, n, 0.75), z = rand_pt(rng, n, 0.75);
                    cplx direct = amel_phi(n, s, q, w, z);
                    cplx summed = amel_eval_from_terms(terms, n, s, w, z);
                    CHECK(std::abs(direct - summed) < 1e-10 * std::max(1.0, std::abs(direct)));
                }
            }
}

TEST_CASE("ameliorated kernel coefficients carry the rogue factor") {
    Rng rng(407);
    BallPoint w = rand_pt(rng, 2, 0.7), z = rand_pt(rng, 2, 0.7);
    KernelCoeff kc = kernel_amel(2, 3, 1, w, z);
    CHECK(kc.s == 3);
    CHECK(std::abs(kc.common_factor - amel_phi(2, 3, 1, w, z)) < 1e-12);
    for (const auto& [key, val] : kc.coeffs) {
        int k = key.second;
        cplx rogue = std::conj(w.z[k - 1]) - std::conj(z.z[k - 1]);
        cplx want = static_cast<double>(kernel_sign(2, 1, key.first, k)) * rogue *
                    kc.common_factor;
        CHECK(std::abs(val - want) < 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("snap constant prefers small denominators") {
    long long num = 0, den = 1;
    int e = 0;
    CHECK(snap_constant(PI, 1e-7, num, den, e));
    CHECK(num == 1);
    CHECK(den == 1);
    CHECK(e == 1);
    CHECK(snap_constant(6.0 / std::pow(PI, 4), 1e-7, num, den, e));
    CHECK(num == 6);
    CHECK(den == 1);
    CHECK(e == -4);
    CHECK(snap_constant(0.5, 1e-7, num, den, e));
    CHECK(num == 1);
    CHECK(den == 2);
    CHECK(e == 0);
    CHECK(snap_constant(-2.0 * PI * PI, 1e-7, num, den, e));
    CHECK(num == -2);
    CHECK(den == 1);
    CHECK(e == 2);
}

TEST_CASE("constants table round trip") {
    ConstantsTable tbl;
    tbl.put(1, 0, 0, 1.0 / PI, "calibrated");
    tbl.put(2, -1, 3, 1.0, "derived");
    std::string path = "/tmp/corona_tbl_test.txt";
    tbl.save(path);
    ConstantsTable back = ConstantsTable::load(path);
    REQUIRE(back.has(1, 0, 0));
    REQUIRE(back.has(2, -1, 3));
    CHECK(back.get(1, 0, 0) == tbl.get(1, 0, 0));
    CHECK(back.entry(2, -1, 3).provenance == "derived");
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# corona constants table v1");
    std::remove(path.c_str());
}

TEST_CASE("shipped table contents") {
    ConstantsTable tbl = ConstantsTable::load(default_constants_path());
    for (auto [n, q, s] : {std::tuple<int, int, int>{1, 0, 0}, {1, 0, 4}, {2, 0, 0}, {2, 1, 0},
                           {2, 0, 4}, {2, 0, 5}, {2, 1, 6}})
        CHECK(tbl.has(n, q, s));
    CHECK(tbl.entry(2, 0, 3).provenance == "derived");
    CHECK(tbl.get(2, 0, 3) == doctest::Approx(PI).epsilon(1e-12));
    CHECK(tbl.get(1, -1, 2) == 1.0);
    CHECK(tbl.get(2, -1, 3) == 1.0);
    CHECK(tbl.get(1, 0, 0) == doctest::Approx(1.0 / PI).epsilon(1e-6));
    CHECK(tbl.get(1, 0, 4) == doctest::Approx(6.0 / std::pow(PI, 4)).epsilon(1e-6));
}

TEST_CASE("boundary kernel reproduces constants") {
    ConstantsTable tbl;
    tbl.put(1, -1, 2, 1.0, "derived");
    tbl.put(2, -1, 3, 1.0, "derived");
    // int_{B_n} S_{n,s}(w,z) dV(w) picks out the constant term of 1/(1-wbar.z)^s
    BallPoint z1(CVec{cplx(0.4, 0.2)});
    BallRule r1 = ball_rule(1, 3);
    cplx got1 = integrate([&](const BallPoint& w) { return boundary_kernel(1, 2, w, z1, tbl); },
                          r1);
    CHECK(std::abs(got1 - cplx(PI, 0.0)) < 1e-10);
    BallPoint z2(CVec{cplx(0.3, 0.0), cplx(0.1, -0.2)});
    BallRule r2 = ball_rule(2, 4);
    cplx got2 = integrate([&](const BallPoint& w) { return boundary_kernel(2, 3, w, z2, tbl); },
                          r2);
    CHECK(std::abs(got2 - cplx(PI * PI / 2.0, 0.0)) < 1e-7);
}
