#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "corona/forms.hpp"
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

PolyField rand_poly(Rng& rng, int n) {
    PolyField f = PolyField::zero(n);
    for (int term = 0; term < 3; ++term) {
        std::vector<int> a(n, 0), b(n, 0);
        for (int inc = 0; inc < 3; ++inc) {
            int slot = static_cast<int>(rng.next() % (2 * n + 1));
            if (slot == 2 * n) continue;
            if (slot < n)
                ++a[slot];
            else
                ++b[slot - n];
        }
        f.add_term(a, b, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)));
    }
    return f;
}

double form_gap(const FormQ& a, const FormQ& b, const CVec& z) {
    auto ea = a.eval(z), eb = b.eval(z);
    double gap = 0.0;
    for (const auto& [k, v] : ea) {
        auto it = eb.find(k);
        gap = std::max(gap, std::abs(v - (it == eb.end() ? cplx(0, 0) : it->second)));
    }
    for (const auto& [k, v] : eb)
        if (!ea.count(k)) gap = std::max(gap, std::abs(v));
    return gap;
}

double gt_gap(const GenTensorForm& a, const GenTensorForm& b, const CVec& z) {
    double gap = 0.0;
    auto one_side = [&](const GenTensorForm& x, const GenTensorForm& y) {
        for (const auto& [I, fq] : x.entries) {
            const FormQ* other = y.find(I);
            FormQ zero = FormQ::zero(x.n, x.q);
            gap = std::max(gap, form_gap(fq, other ? *other : zero, z));
        }
    };
    one_side(a, b);
    one_side(b, a);
    return gap;
}

double gt_norm_sq(const GenTensorForm& F, const CVec& z) {
    double s = 0.0;
    for (const auto& [I, fq] : F.entries)
        for (const auto& [k, v] : fq.eval(z)) s += std::norm(v);
    return s;
}

} // namespace

TEST_CASE("increasing index helpers") {
    CHECK(all_inc(3, 0) == std::vector<IncIndex>{IncIndex{}});
    CHECK(all_inc(3, 2).size() == 3);
    CHECK(all_inc(4, 2).size() == 6);
    for (const IncIndex& J : all_inc(4, 2)) {
        REQUIRE(J.size() == 2);
        CHECK(J[0] < J[1]);
        CHECK(J[0] >= 1);
        CHECK(J[1] <= 4);
    }
    CHECK(mu_pos(2, IncIndex{1, 3}) == 2);
    CHECK(mu_pos(1, IncIndex{2, 3}) == 1);
    CHECK(mu_pos(4, IncIndex{2, 3}) == 3);
    CHECK(inc_insert(2, IncIndex{1, 3}) == IncIndex{1, 2, 3});
    CHECK(inc_contains(IncIndex{1, 3}, 3));
    CHECK(!inc_contains(IncIndex{1, 3}, 2));
    std::vector<int> perm{3, 1, 2};
    CHECK(sort_sign(perm) == 1);
    std::vector<int> swap2{2, 1};
    CHECK(sort_sign(swap2) == -1);
    std::vector<int> rep{1, 1};
    CHECK(sort_sign(rep) == 0);
}

TEST_CASE("dbar squares to zero and matches fn flavor") {
    Rng rng(301);
    for (int n = 2; n <= 3; ++n) {
        PolyForm eta = PolyForm::zero(n, 0);
        eta.accumulate(IncIndex{}, rand_poly(rng, n));
        PolyForm d1 = eta.dbar();
        PolyForm d2 = d1.dbar();
        CHECK(d2.is_zero());
        CVec z = rand_pt(rng, n, 0.8).z;
        CHECK(form_gap(d1.fn(), dbar_fn(eta.fn()), z) < 1e-9);
    }
}

TEST_CASE("wedge antisymmetry on one forms") {
    Rng rng(302);
    int n = 3;
    FormQ a = FormQ::zero(n, 1), b = FormQ::zero(n, 1);
    for (int j = 1; j <= n; ++j) {
        a.set(IncIndex{j}, rand_poly(rng, n).fn());
        b.set(IncIndex{j}, rand_poly(rng, n).fn());
    }
    FormQ ab = form_wedge(a, b), ba = form_wedge(b, a);
    CVec z = rand_pt(rng, n, 0.8).z;
    CHECK(form_gap(ab, form_scale(ba, cplx(-1.0, 0.0)), z) < 1e-12);
    FormQ aa = form_wedge(a, a);
    FormQ zero = FormQ::zero(n, 2);
    CHECK(form_gap(aa, zero, z) < 1e-12);
}

TEST_CASE("interior reconstruction") {
    Rng rng(303);
    for (int n = 2; n <= 3; ++n) {
        for (int q = 1; q < n; ++q) {
            FormQ eta = FormQ::zero(n, q + 1);
            for (const IncIndex& I : all_inc(n, q + 1)) eta.set(I, rand_poly(rng, n).fn());
            // sum_J (eta interior dwbar^J) wedge dwbar^J over |J| = q
            FormQ acc = FormQ::zero(n, q + 1);
            for (const IncIndex& J : all_inc(n, q)) {
                FormQ inner = interior(eta, J);
                FormQ dwJ = FormQ::zero(n, q);
                dwJ.set(J, ff_const(1.0));
                acc = form_add(acc, form_wedge(inner, dwJ));
            }
            CVec z = rand_pt(rng, n, 0.8).z;
            CHECK(form_gap(acc, form_scale(eta, cplx(-(q + 1.0), 0.0)), z) < 1e-11);
        }
    }
}

TEST_CASE("zbar_m derivative sums") {
    Rng rng(304);
    int n = 2;
    PolyField f = rand_poly(rng, n);
    BallPoint zp = rand_pt(rng, n, 0.7);
    BallPoint wp = rand_pt(rng, n, 0.7);
    // m = 1: sum_j (wbar_j - zbar_j) df/dwbar_j
    cplx want(0.0, 0.0);
    for (int j = 0; j < n; ++j)
        want += (std::conj(wp.z[j]) - std::conj(zp.z[j])) * f.da(j).eval(wp.z);
    cplx got = zbar_m(f.fn(), zp.z, 1).eval(wp.z);
    CHECK(std::abs(got - want) < 1e-11);
    // m = 0 is the identity
    CHECK(std::abs(zbar_m(f.fn(), zp.z, 0).eval(wp.z) - f.eval(wp.z)) < 1e-13);
    // m = 2 without multinomial coefficients: plain sum over length-2 words
    cplx want2(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            want2 += (std::conj(wp.z[i]) - std::conj(zp.z[i])) *
                     (std::conj(wp.z[j]) - std::conj(zp.z[j])) * f.da(i).da(j).eval(wp.z);
    CHECK(std::abs(zbar_m(f.fn(), zp.z, 2).eval(wp.z) - want2) < 1e-10);
}

TEST_CASE("dbar_m_form contraction and rogue tags") {
    Rng rng(305);
    int n = 2, q = 0;
    FormQ eta = FormQ::zero(n, q + 1);
    for (const IncIndex& I : all_inc(n, q + 1)) eta.set(I, rand_poly(rng, n).fn());
    BallPoint zp = rand_pt(rng, n, 0.7);
    DbarM d0 = dbar_m_form(eta, zp.z, 0);
    CHECK(d0.form.q == q);
    CHECK(d0.rogue_tags.size() == d0.form.coeffs.size() * 0 + d0.rogue_tags.size());
    DbarM d1 = dbar_m_form(eta, zp.z, 1);
    CHECK(d1.form.q == q);
    // every tag names a k outside its J
    for (const auto& [J, k] : d1.rogue_tags) CHECK(!inc_contains(J, k));
}

TEST_CASE("generator tensor wedge and double contraction") {
    Rng rng(306);
    int n = 1, N = 3;
    VecField g;
    g.n = n;
    for (int i = 0; i < N; ++i) g.entries.push_back(rand_poly(rng, n).fn());
    GenTensorForm A = GenTensorForm::zero(n, N, 1, 0);
    for (int i = 1; i <= N; ++i) {
        FormQ f = FormQ::zero(n, 0);
        f.set(IncIndex{}, rand_poly(rng, n).fn());
        A.set(IncIndex{i}, f);
    }
    GenTensorForm AA = wedge(A, A);
    CVec z = rand_pt(rng, n, 0.8).z;
    CHECK(gt_gap(AA, GenTensorForm::zero(n, N, 2, 0), z) < 1e-12);
    // contracting twice by the same vector vanishes
    GenTensorForm B = GenTensorForm::zero(n, N, 2, 0);
    for (const IncIndex& I : all_inc(N, 2)) {
        FormQ f = FormQ::zero(n, 0);
        f.set(IncIndex{}, rand_poly(rng, n).fn());
        B.set(I, f);
    }
    GenTensorForm c1 = contract_g(B, g);
    GenTensorForm c2 = contract_g(c1, g);
    CHECK(gt_gap(c2, GenTensorForm::zero(n, N, 0, 0), z) < 1e-10);
}

TEST_CASE("gt_dbar squares to zero") {
    Rng rng(307);
    int n = 2, N = 2;
    GenTensorForm A = GenTensorForm::zero(n, N, 1, 0);
    for (int i = 1; i <= N; ++i) {
        FormQ f = FormQ::zero(n, 0);
        f.set(IncIndex{}, rand_poly(rng, n).fn());
        A.set(IncIndex{i}, f);
    }
    GenTensorForm dd = gt_dbar(gt_dbar(A));
    CVec z = rand_pt(rng, n, 0.6).z;
    CHECK(gt_gap(dd, GenTensorForm::zero(n, N, 1, 2), z) < 1e-7);
}

TEST_CASE("koszul zero form normalizes g") {
    Rng rng(308);
    int n = 1, N = 2;
    VecField g;
    g.n = n;
    PolyField g1 = PolyField::coord(n, 0);
    PolyField g2 = PolyField::constant(n, 1.0);
    g2.add_term({1}, {0}, -2.0);
    g.entries = {g1.fn(), g2.fn()};
    GenTensorForm O0 = omega0(g);
    GenTensorForm lam = contract_g(O0, g);
    const FormQ* sc = lam.find(IncIndex{});
    REQUIRE(sc != nullptr);
    for (int it = 0; it < 10; ++it) {
        CVec z = rand_pt(rng, n, 0.8).z;
        auto ev = sc->eval(z);
        CHECK(std::abs(ev.at(IncIndex{}) - cplx(1.0, 0.0)) < 1e-12);
    }
    // |g|^2 has a positive floor on this closed ball region: min 1/5 at z = 2/5
    FieldFn ns = vec_norm_sq(g);
    CHECK(std::abs(ns.eval(CVec{cplx(0.4, 0.0)}) - cplx(0.2, 0.0)) < 1e-12);
}

TEST_CASE("omega factorization matches the direct two index formula") {
    Rng rng(309);
    int n = 1, N = 2;
    VecField g;
    g.n = n;
    PolyField g1 = PolyField::coord(n, 0);
    PolyField g2 = PolyField::constant(n, 1.0);
    g2.add_term({1}, {0}, -2.0);
    g.entries = {g1.fn(), g2.fn()};
    GenTensorForm a = omega(g, 1);
    GenTensorForm b = omega12_direct(g);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
        CVec z = rand_pt(rng, n, 0.8).z;
        worst = std::max(worst, gt_gap(a, b, z));
    }
    CHECK(worst < 1e-10);
    // worked value: the (1,2) entry has coefficient conj(g_2 g_1' - g_1 g_2')/|g|^4
    // with g = (z, 1-2z) the numerator is conj(1-2z+2z) = 1
    CVec z{cplx(0.3, 0.2)};
    double g2n = std::norm(z[0]) + std::norm(1.0 - 2.0 * z[0]);
    const FormQ* e = a.find(IncIndex{1, 2});
    REQUIRE(e != nullptr);
    auto ev = e->eval(z);
    cplx v = ev.at(IncIndex{1});
    CHECK(std::abs(v - 1.0 / (g2n * g2n)) < 1e-11);
}

TEST_CASE("quasi multiplicative ratio is bounded and stable") {
    int n = 2, N = 3, l = 1;
    VecField g;
    g.n = n;
    PolyField g1 = PolyField::coord(n, 0);
    PolyField g2 = PolyField::coord(n, 1);
    PolyField g3 = PolyField::constant(n, 1.0);
    g3.add_term({1, 0}, {0, 0}, -1.0);
    g3.add_term({0, 1}, {0, 0}, -1.0);
    g.entries = {g1.fn(), g2.fn(), g3.fn()};
    GenTensorForm Ol = omega(g, l);
    GenTensorForm O0 = omega0(g);
    GenTensorForm Ot = omega_tilde(g);
    auto max_ratio = [&](int count, uint64_t seed) {
        Rng rng(seed);
        double mr = 0.0;
        for (int it = 0; it < count; ++it) {
            BallPoint z = rand_pt(rng, n, 0.85);
            double num = gt_norm_sq(Ol, z.z);
            double den = gt_norm_sq(O0, z.z) * std::pow(gt_norm_sq(Ot, z.z), l);
            if (den > 1e-30) mr = std::max(mr, num / den);
        }
        return mr;
    };
    double m1 = max_ratio(10000, 310);
    double m2 = max_ratio(20000, 310);
    CHECK(m1 > 0.0);
    CHECK(m1 < 1e6);
    CHECK(std::abs(m2 - m1) <= 0.10 * m1);
}
