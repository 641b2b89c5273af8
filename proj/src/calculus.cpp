#include "corona/calculus.hpp"
#include "corona/quadrature.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace corona {

FieldFn ff_const(cplx c) {
    FieldFn f;
    f.eval = [c](const CVec&) { return c; };
    f.dh = [](int) { return ff_const(0.0); };
    f.da = [](int) { return ff_const(0.0); };
    f.holo = true;
    return f;
}

FieldFn ff_zero() { return ff_const(0.0); }

FieldFn ff_coord(int j) {
    FieldFn f;
    f.eval = [j](const CVec& z) { return z[j]; };
    f.dh = [j](int i) { return ff_const(i == j ? 1.0 : 0.0); };
    f.da = [](int) { return ff_const(0.0); };
    f.holo = true;
    return f;
}

FieldFn ff_coord_bar(int j) {
    FieldFn f;
    f.eval = [j](const CVec& z) { return std::conj(z[j]); };
    f.dh = [](int) { return ff_const(0.0); };
    f.da = [j](int i) { return ff_const(i == j ? 1.0 : 0.0); };
    return f;
}

// combinators hold children behind shared_ptr so that copying a FieldFn is a
// refcount bump, not a recursive copy of the whole expression; with by-value
// captures every wrapper multiplied stored state by the lambda count and deep
// wedge/derivative chains ran out of memory
FieldFn ff_add(FieldFn a, FieldFn b) {
    auto pa = std::make_shared<const FieldFn>(std::move(a));
    auto pb = std::make_shared<const FieldFn>(std::move(b));
    FieldFn f;
    f.eval = [pa, pb](const CVec& z) { return pa->eval(z) + pb->eval(z); };
    f.dh = [pa, pb](int j) { return ff_add(pa->dh(j), pb->dh(j)); };
    f.da = [pa, pb](int j) { return ff_add(pa->da(j), pb->da(j)); };
    f.holo = pa->holo && pb->holo;
    return f;
}

FieldFn ff_sub(FieldFn a, FieldFn b) { return ff_add(std::move(a), ff_scale(std::move(b), -1.0)); }

FieldFn ff_mul(FieldFn a, FieldFn b) {
    auto pa = std::make_shared<const FieldFn>(std::move(a));
    auto pb = std::make_shared<const FieldFn>(std::move(b));
    FieldFn f;
    f.eval = [pa, pb](const CVec& z) { return pa->eval(z) * pb->eval(z); };
    f.dh = [pa, pb](int j) { return ff_add(ff_mul(pa->dh(j), *pb), ff_mul(*pa, pb->dh(j))); };
    f.da = [pa, pb](int j) { return ff_add(ff_mul(pa->da(j), *pb), ff_mul(*pa, pb->da(j))); };
    f.holo = pa->holo && pb->holo;
    return f;
}

FieldFn ff_scale(FieldFn a, cplx s) {
    auto pa = std::make_shared<const FieldFn>(std::move(a));
    FieldFn f;
    f.eval = [pa, s](const CVec& z) { return s * pa->eval(z); };
    f.dh = [pa, s](int j) { return ff_scale(pa->dh(j), s); };
    f.da = [pa, s](int j) { return ff_scale(pa->da(j), s); };
    f.holo = pa->holo;
    return f;
}

FieldFn ff_conj(FieldFn a) {
    auto pa = std::make_shared<const FieldFn>(std::move(a));
    FieldFn f;
    f.eval = [pa](const CVec& z) { return std::conj(pa->eval(z)); };
    f.dh = [pa](int j) { return ff_conj(pa->da(j)); };
    f.da = [pa](int j) { return ff_conj(pa->dh(j)); };
    return f;
}

FieldFn ff_recip(FieldFn a) {
    auto pa = std::make_shared<const FieldFn>(std::move(a));
    FieldFn f;
    f.eval = [pa](const CVec& z) { return 1.0 / pa->eval(z); };
    f.dh = [pa](int j) { return ff_scale(ff_mul(pa->dh(j), ff_ipow(ff_recip(*pa), 2)), -1.0); };
    f.da = [pa](int j) { return ff_scale(ff_mul(pa->da(j), ff_ipow(ff_recip(*pa), 2)), -1.0); };
    f.holo = pa->holo;
    return f;
}

FieldFn ff_ipow(FieldFn a, int m) {
    if (m < 0) throw std::invalid_argument("ff_ipow wants m >= 0");
    if (m == 0) return ff_const(1.0);
    if (m == 1) return a;
    auto pa = std::make_shared<const FieldFn>(std::move(a));
    FieldFn f;
    f.eval = [pa, m](const CVec& z) {
        cplx v = pa->eval(z), r = 1.0;
        for (int i = 0; i < m; ++i) r *= v;
        return r;
    };
    f.dh = [pa, m](int j) {
        return ff_scale(ff_mul(ff_ipow(*pa, m - 1), pa->dh(j)), static_cast<double>(m));
    };
    f.da = [pa, m](int j) {
        return ff_scale(ff_mul(ff_ipow(*pa, m - 1), pa->da(j)), static_cast<double>(m));
    };
    f.holo = pa->holo;
    return f;
}

// ---------- PolyField ----------

PolyField PolyField::zero(int n) {
    PolyField f;
    f.n = n;
    return f;
}

PolyField PolyField::constant(int n, cplx c) {
    PolyField f = zero(n);
    if (c != 0.0) f.terms[{std::vector<int>(n, 0), std::vector<int>(n, 0)}] = c;
    return f;
}

PolyField PolyField::coord(int n, int j) {
    PolyField f = zero(n);
    std::vector<int> a(n, 0), b(n, 0);
    a[j] = 1;
    f.terms[{a, b}] = 1.0;
    return f;
}

PolyField PolyField::coord_bar(int n, int j) {
    PolyField f = zero(n);
    std::vector<int> a(n, 0), b(n, 0);
    b[j] = 1;
    f.terms[{a, b}] = 1.0;
    return f;
}

PolyField PolyField::one_minus_nsq(int n) {
    PolyField f = constant(n, 1.0);
    for (int j = 0; j < n; ++j) {
        std::vector<int> a(n, 0), b(n, 0);
        a[j] = 1;
        b[j] = 1;
        f.terms[{a, b}] = -1.0;
    }
    return f;
}

void PolyField::add_term(const std::vector<int>& alpha, const std::vector<int>& beta, cplx c) {
    if (c == 0.0) return;
    auto key = std::make_pair(alpha, beta);
    auto it = terms.find(key);
    if (it == terms.end()) {
        terms[key] = c;
    } else {
        it->second += c;
        if (it->second == 0.0) terms.erase(it);
    }
}

PolyField PolyField::plus(const PolyField& o) const {
    PolyField r = *this;
    for (const auto& [k, c] : o.terms) r.add_term(k.first, k.second, c);
    return r;
}

PolyField PolyField::minus(const PolyField& o) const { return plus(o.scaled(-1.0)); }

PolyField PolyField::times(const PolyField& o) const {
    PolyField r = zero(n);
    for (const auto& [ka, ca] : terms)
        for (const auto& [kb, cb] : o.terms) {
            std::vector<int> a(n), b(n);
            for (int i = 0; i < n; ++i) {
                a[i] = ka.first[i] + kb.first[i];
                b[i] = ka.second[i] + kb.second[i];
            }
            r.add_term(a, b, ca * cb);
        }
    return r;
}

PolyField PolyField::scaled(cplx s) const {
    PolyField r = zero(n);
    if (s == 0.0) return r;
    for (const auto& [k, c] : terms) r.terms[k] = c * s;
    return r;
}

PolyField PolyField::dh(int j) const {
    PolyField r = zero(n);
    for (const auto& [k, c] : terms) {
        if (k.first[j] == 0) continue;
        std::vector<int> a = k.first;
        double e = a[j];
        a[j] -= 1;
        r.add_term(a, k.second, c * e);
    }
    return r;
}

PolyField PolyField::da(int j) const {
    PolyField r = zero(n);
    for (const auto& [k, c] : terms) {
        if (k.second[j] == 0) continue;
        std::vector<int> b = k.second;
        double e = b[j];
        b[j] -= 1;
        r.add_term(k.first, b, c * e);
    }
    return r;
}

PolyField PolyField::conjugate() const {
    PolyField r = zero(n);
    for (const auto& [k, c] : terms) r.terms[{k.second, k.first}] = std::conj(c);
    return r;
}

PolyField PolyField::radial() const {
    PolyField r = zero(n);
    for (const auto& [k, c] : terms) {
        int deg = 0;
        for (int j = 0; j < n; ++j) deg += k.first[j];
        if (deg) r.terms[k] = c * static_cast<double>(deg);
    }
    return r;
}

cplx PolyField::eval(const CVec& z) const {
    std::vector<cplx> parts;
    parts.reserve(terms.size());
    for (const auto& [k, c] : terms) {
        cplx v = c;
        for (int j = 0; j < n; ++j) {
            for (int e = 0; e < k.first[j]; ++e) v *= z[j];
            for (int e = 0; e < k.second[j]; ++e) v *= std::conj(z[j]);
        }
        parts.push_back(v);
    }
    return pairwise_sum(parts);
}

bool PolyField::holomorphic() const {
    for (const auto& [k, c] : terms)
        for (int j = 0; j < n; ++j)
            if (k.second[j]) return false;
    return true;
}

double PolyField::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms) m = std::max(m, std::abs(c));
    return m;
}

FieldFn PolyField::fn() const {
    auto self = std::make_shared<const PolyField>(*this);
    FieldFn f;
    f.eval = [self](const CVec& z) { return self->eval(z); };
    f.dh = [self](int j) { return self->dh(j).fn(); };
    f.da = [self](int j) { return self->da(j).fn(); };
    f.holo = holomorphic();
    return f;
}

// ---------- derivative operators ----------

FieldFn radial_fn(FieldFn f, int n) {
    auto pf = std::make_shared<const FieldFn>(std::move(f));
    FieldFn r;
    r.eval = [pf, n](const CVec& z) {
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += z[j] * pf->dh(j).eval(z);
        return s;
    };
    r.dh = [pf, n](int i) { return ff_add(pf->dh(i), radial_fn(pf->dh(i), n)); };
    r.da = [pf, n](int i) { return radial_fn(pf->da(i), n); };
    r.holo = pf->holo;
    return r;
}

// matrix M(a) = (1-|a|^2) P_a + sqrt(1-|a|^2) Q_a, entries M_{kj}
static std::vector<std::vector<cplx>> da_matrix(const BallPoint& a, int n) {
    double one_a = 1.0 - a.nsq;
    double root = std::sqrt(one_a);
    std::vector<std::vector<cplx>> M(n, std::vector<cplx>(n, 0.0));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            cplx p = 0.0;
            if (a.nsq > 0.0) p = a.z[k] * std::conj(a.z[j]) / a.nsq; // (P_a)_{kj}
            cplx q = (k == j ? 1.0 : 0.0) - p;
            M[k][j] = one_a * p + root * q;
        }
    return M;
}

std::vector<FieldFn> d_a(const FieldFn& f, const BallPoint& a, int n) {
    auto M = da_matrix(a, n);
    std::vector<FieldFn> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        FieldFn acc = ff_zero();
        for (int k = 0; k < n; ++k) acc = ff_add(acc, ff_scale(f.dh(k), -M[k][j]));
        out.push_back(acc);
    }
    return out;
}

std::vector<FieldFn> d_a_conj(const FieldFn& f, const BallPoint& a, int n) {
    auto M = da_matrix(a, n);
    std::vector<FieldFn> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        FieldFn acc = ff_zero();
        for (int k = 0; k < n; ++k) acc = ff_add(acc, ff_scale(f.da(k), -std::conj(M[k][j])));
        out.push_back(acc);
    }
    return out;
}

std::vector<FieldFn> d_a_pow(const FieldFn& f, const BallPoint& a, int n, int m) {
    std::vector<FieldFn> cur{f};
    for (int step = 0; step < m; ++step) {
        std::vector<FieldFn> nxt;
        nxt.reserve(cur.size() * n);
        for (const FieldFn& g : cur) {
            auto dg = d_a(g, a, n);
            for (int j = 0; j < n; ++j) nxt.push_back(dg[j]);
        }
        cur.swap(nxt);
    }
    return cur;
}

std::vector<cplx> d_pow_at(const FieldFn& f, const BallPoint& z, int m) {
    auto tensor = d_a_pow(f, z, z.n(), m);
    std::vector<cplx> out;
    out.reserve(tensor.size());
    for (const FieldFn& g : tensor) out.push_back(g.eval(z.z));
    return out;
}

PolyField rb_pow(const PolyField& f, double b, int m) {
    if (b <= -1.0) throw std::domain_error("rb_pow wants b > -1");
    if (m < 1) throw std::invalid_argument("rb_pow wants m >= 1");
    PolyField cur = f;
    for (int i = 0; i < m; ++i) {
        double bi = b + i;
        double c0 = (f.n + bi + 1.0) / (bi + 1.0);
        double c1 = 1.0 / (bi + 1.0);
        cur = cur.scaled(c0).plus(cur.radial().scaled(c1));
    }
    return cur;
}

double r_gamma_t_multiplier(int n, int k, double gamma, double t) {
    double a1 = n + 1.0 + gamma;
    double a2 = n + 1.0 + k + gamma + t;
    double a3 = n + 1.0 + gamma + t;
    double a4 = n + 1.0 + k + gamma;
    for (double v : {a1, a2, a3, a4})
        if (v <= 0.0 && v == std::floor(v)) throw std::domain_error("gamma ratio pole");
    if (a1 <= 0.0 || a2 <= 0.0 || a3 <= 0.0 || a4 <= 0.0)
        throw std::domain_error("gamma ratio wants positive arguments");
    return std::exp(std::lgamma(a1) + std::lgamma(a2) - std::lgamma(a3) - std::lgamma(a4));
}

PolyField r_gamma_t(const PolyField& f, double gamma, double t) {
    if (!f.holomorphic()) throw std::invalid_argument("r_gamma_t wants a holomorphic expansion");
    PolyField r = PolyField::zero(f.n);
    for (const auto& [key, c] : f.terms) {
        int k = 0;
        for (int j = 0; j < f.n; ++j) k += key.first[j];
        r.terms[key] = c * r_gamma_t_multiplier(f.n, k, gamma, t);
    }
    return r;
}

std::vector<cplx> deriv_word_eval(const DerivWord& word, Flavor fl, const FieldFn& f,
                                  const BallPoint& z) {
    // frozen 1-|a|^2 factors commute out; count them, then apply live R / frozen-a D
    int n = z.n();
    int scale_count = 0;
    std::vector<FieldFn> cur{f};
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
        switch (*it) {
            case Letter::SCALE_I: scale_count += 1; break;
            case Letter::SCALED_R: {
                scale_count += 1;
                for (FieldFn& g : cur) g = radial_fn(g, n);
                break;
            }
            case Letter::D: {
                std::vector<FieldFn> nxt;
                nxt.reserve(cur.size() * n);
                for (const FieldFn& g : cur) {
                    auto dg = (fl == Flavor::X) ? d_a_conj(g, z, n) : d_a(g, z, n);
                    for (int j = 0; j < n; ++j) nxt.push_back(dg[j]);
                }
                cur.swap(nxt);
                break;
            }
        }
    }
    double pref = std::pow(1.0 - z.nsq, scale_count);
    std::vector<cplx> out;
    out.reserve(cur.size());
    for (const FieldFn& g : cur) out.push_back(pref * g.eval(z.z));
    return out;
}

std::vector<DerivWord> deriv_family(int m) {
    std::vector<DerivWord> words;
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
        DerivWord w;
        int c = code;
        for (int i = 0; i < m; ++i) {
            w.letters.push_back(static_cast<Letter>(c % 3));
            c /= 3;
        }
        words.push_back(w);
    }
    return words;
}

double grad_norm(const PolyField& f, int k, const CVec& z) {
    // derivative words over 2n directions: 0..n-1 holomorphic, n..2n-1 anti
    int n = f.n;
    std::vector<PolyField> cur{f};
    for (int step = 0; step < k; ++step) {
        std::vector<PolyField> nxt;
        nxt.reserve(cur.size() * 2 * n);
        for (const PolyField& g : cur) {
            for (int j = 0; j < n; ++j) nxt.push_back(g.dh(j));
            for (int j = 0; j < n; ++j) nxt.push_back(g.da(j));
        }
        cur.swap(nxt);
    }
    std::vector<double> sq;
    sq.reserve(cur.size());
    for (const PolyField& g : cur) sq.push_back(abs_sq(g.eval(z)));
    return std::sqrt(comp_sum(sq));
}

double besov_norm(const PolyField& f, double p, double sigma, int m, const BallRule& rule) {
    int n = f.n;
    if (!(m + sigma > n / p)) throw std::domain_error("besov_norm wants m + sigma > n/p");
    CVec origin(n, cplx(0.0, 0.0));
    double head = 0.0;
    for (int k = 0; k < m; ++k) head += grad_norm(f, k, origin);
    double integral = integrate_real(
        [&](const BallPoint& w) {
            double g = grad_norm(f, m, w.z);
            return std::pow(std::pow(1.0 - w.nsq, m + sigma) * g, p);
        },
        rule, WeightKind::invariant);
    return head + std::pow(integral, 1.0 / p);
}

} // namespace corona
