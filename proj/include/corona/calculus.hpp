#pragma once
#include "corona/ball.hpp"

#include <functional>
#include <map>
#include <vector>

namespace corona {

struct BallRule; // quadrature.hpp

// Evaluable scalar field on the ball with lazy Wirtinger-derivative oracles.
// Oracles return new FieldFn values, so derivative chains compose without a CAS.
struct FieldFn {
    std::function<cplx(const CVec&)> eval;
    std::function<FieldFn(int)> dh; // d/dz_j, 0-based j
    std::function<FieldFn(int)> da; // d/dzbar_j
    bool holo = false;
};

FieldFn ff_const(cplx c);
FieldFn ff_zero();
FieldFn ff_coord(int j);
FieldFn ff_coord_bar(int j);
FieldFn ff_add(FieldFn a, FieldFn b);
FieldFn ff_sub(FieldFn a, FieldFn b);
FieldFn ff_mul(FieldFn a, FieldFn b);
FieldFn ff_scale(FieldFn a, cplx s);
FieldFn ff_conj(FieldFn a);
FieldFn ff_recip(FieldFn a);
FieldFn ff_ipow(FieldFn a, int m); // m >= 0

// Sparse polynomial in z and zbar with exact coefficient arithmetic.
struct PolyField {
    using Key = std::pair<std::vector<int>, std::vector<int>>; // (alpha, beta)
    int n = 1;
    std::map<Key, cplx> terms;

    static PolyField zero(int n);
    static PolyField constant(int n, cplx c);
    static PolyField coord(int n, int j);     // z_j
    static PolyField coord_bar(int n, int j); // zbar_j
    static PolyField one_minus_nsq(int n);    // 1 - |z|^2

    void add_term(const std::vector<int>& alpha, const std::vector<int>& beta, cplx c);
    PolyField plus(const PolyField& o) const;
    PolyField minus(const PolyField& o) const;
    PolyField times(const PolyField& o) const;
    PolyField scaled(cplx s) const;
    PolyField dh(int j) const;
    PolyField da(int j) const;
    PolyField conjugate() const;
    PolyField radial() const; // sum_j z_j d/dz_j
    cplx eval(const CVec& z) const;
    bool is_zero() const { return terms.empty(); }
    bool holomorphic() const;
    double max_abs_coeff() const;
    FieldFn fn() const;
};

// R f = z . grad f, the Euler operator (holomorphic indices only).
FieldFn radial_fn(FieldFn f, int n);

// D_a f = -f'(z) { (1-|a|^2) P_a + sqrt(1-|a|^2) Q_a }, one component per j.
std::vector<FieldFn> d_a(const FieldFn& f, const BallPoint& a, int n);
// conjugate flavor: same matrix conjugated, acting through anti-derivatives
std::vector<FieldFn> d_a_conj(const FieldFn& f, const BallPoint& a, int n);
// m-th iterate holding a fixed; returns the full n^m tensor, last index fastest
std::vector<FieldFn> d_a_pow(const FieldFn& f, const BallPoint& a, int n, int m);
// compose with a frozen, set a = z, evaluate at z
std::vector<cplx> d_pow_at(const FieldFn& f, const BallPoint& z, int m);

// R_b = ((n+b+1)/(b+1)) I + (1/(b+1)) R;  rb_pow = R_{b+m-1} ... R_b
PolyField rb_pow(const PolyField& f, double b, int m);

// multiplies the k-homogeneous part of a holomorphic polynomial by
// Gamma(n+1+g)Gamma(n+1+k+g+t) / (Gamma(n+1+g+t)Gamma(n+1+k+g))
PolyField r_gamma_t(const PolyField& f, double gamma, double t);
double r_gamma_t_multiplier(int n, int k, double gamma, double t);

enum class Letter { SCALE_I, D, SCALED_R };
enum class Flavor { X, Y }; // X: the D letter is the conjugate operator; Y: plain
struct DerivWord {
    std::vector<Letter> letters;
};
// Letters apply right-to-left; every 1-|a|^2 factor is frozen during composition
// and a is set to z at the end. Output is the flattened derivative tensor.
std::vector<cplx> deriv_word_eval(const DerivWord& word, Flavor fl, const FieldFn& f,
                                  const BallPoint& z);
std::vector<DerivWord> deriv_family(int m);

// Euclidean length over all (2n)^k order-k Wirtinger words, multiplicity included.
double grad_norm(const PolyField& f, int k, const CVec& z);

// sum_{k<m} |grad^k f(0)| + ( int ((1-|z|^2)^{m+sigma} |grad^m f|)^p dlambda_n )^{1/p}
double besov_norm(const PolyField& f, double p, double sigma, int m, const BallRule& rule);

} // namespace corona
