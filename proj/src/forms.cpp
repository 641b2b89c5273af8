#include "corona/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corona {

bool inc_contains(const IncIndex& J, int k) {
    return std::binary_search(J.begin(), J.end(), k);
}

int mu_pos(int k, const IncIndex& J) {
    if (inc_contains(J, k)) throw std::invalid_argument("mu_pos: k already present");
    int pos = 1;
    for (int j : J)
        if (j < k) ++pos;
    return pos;
}

IncIndex inc_insert(int k, const IncIndex& J) {
    IncIndex out = J;
    out.insert(std::lower_bound(out.begin(), out.end(), k), k);
    return out;
}

std::vector<IncIndex> all_inc(int n, int q) {
    std::vector<IncIndex> out;
    if (q < 0 || q > n) return out;
    IncIndex cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == q) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v <= n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(1);
    return out;
}

int sort_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        size_t j = i;
        while (j > 0 && idx[j] < idx[j - 1]) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
            --j;
        }
        if (j > 0 && idx[j] == idx[j - 1]) return 0;
    }
    return sign;
}

FormQ FormQ::zero(int n, int q) {
    FormQ f;
    f.n = n;
    f.q = q;
    return f;
}

void FormQ::set(const IncIndex& I, FieldFn f) {
    if (static_cast<int>(I.size()) != q) throw std::invalid_argument("FormQ::set: rank");
    coeffs[I] = std::move(f);
}

void FormQ::accumulate(const IncIndex& I, FieldFn f) {
    auto it = coeffs.find(I);
    if (it == coeffs.end())
        set(I, std::move(f));
    else
        it->second = ff_add(it->second, std::move(f));
}

std::map<IncIndex, cplx> FormQ::eval(const CVec& z) const {
    std::map<IncIndex, cplx> out;
    for (const auto& [I, f] : coeffs) out[I] = f.eval(z);
    return out;
}

double FormQ::sup_on(const std::vector<CVec>& pts) const {
    double m = 0.0;
    for (const auto& z : pts)
        for (const auto& [I, f] : coeffs) m = std::max(m, std::abs(f.eval(z)));
    return m;
}

PolyForm PolyForm::zero(int n, int q) {
    PolyForm f;
    f.n = n;
    f.q = q;
    return f;
}

void PolyForm::accumulate(const IncIndex& I, const PolyField& f) {
    auto it = coeffs.find(I);
    if (it == coeffs.end())
        coeffs.emplace(I, f);
    else
        it->second = it->second.plus(f);
}

PolyForm PolyForm::dbar() const {
    PolyForm out = PolyForm::zero(n, q + 1);
    for (const auto& [I, f] : coeffs) {
        for (int j = 1; j <= n; ++j) {
            if (inc_contains(I, j)) continue;
            PolyField df = f.da(j - 1);
            if (df.is_zero()) continue;
            int sgn = (mu_pos(j, I) % 2 == 1) ? 1 : -1;
            out.accumulate(inc_insert(j, I), df.scaled(sgn));
        }
    }
    return out;
}

bool PolyForm::is_zero() const {
    for (const auto& [I, f] : coeffs)
        if (!f.is_zero()) return false;
    return true;
}

FormQ PolyForm::fn() const {
    FormQ out = FormQ::zero(n, q);
    for (const auto& [I, f] : coeffs) out.set(I, f.fn());
    return out;
}

FormQ dbar_fn(const FormQ& w) {
    FormQ out = FormQ::zero(w.n, w.q + 1);
    for (const auto& [I, f] : w.coeffs) {
        for (int j = 1; j <= w.n; ++j) {
            if (inc_contains(I, j)) continue;
            int sgn = (mu_pos(j, I) % 2 == 1) ? 1 : -1;
            out.accumulate(inc_insert(j, I), ff_scale(f.da(j - 1), sgn));
        }
    }
    return out;
}

FormQ form_wedge(const FormQ& a, const FormQ& b) {
    if (a.n != b.n) throw std::invalid_argument("form_wedge: mixed dimensions");
    FormQ out = FormQ::zero(a.n, a.q + b.q);
    for (const auto& [A, fa] : a.coeffs) {
        for (const auto& [B, fb] : b.coeffs) {
            std::vector<int> M = A;
            M.insert(M.end(), B.begin(), B.end());
            int sgn = sort_sign(M);
            if (sgn == 0) continue;
            out.accumulate(M, ff_scale(ff_mul(fa, fb), sgn));
        }
    }
    return out;
}

FormQ form_scale(const FormQ& a, cplx s) {
    FormQ out = FormQ::zero(a.n, a.q);
    for (const auto& [I, f] : a.coeffs) out.set(I, ff_scale(f, s));
    return out;
}

FormQ form_add(const FormQ& a, const FormQ& b) {
    if (a.n != b.n || a.q != b.q) throw std::invalid_argument("form_add: shape");
    FormQ out = a;
    for (const auto& [I, f] : b.coeffs) out.accumulate(I, f);
    return out;
}

FormQ interior(const FormQ& eta, const IncIndex& J) {
    if (static_cast<int>(J.size()) + 1 != eta.q)
        throw std::invalid_argument("interior: |J| must be q-1 of eta");
    FormQ out = FormQ::zero(eta.n, 1);
    for (int k = 1; k <= eta.n; ++k) {
        if (inc_contains(J, k)) continue;
        auto it = eta.coeffs.find(inc_insert(k, J));
        if (it == eta.coeffs.end()) continue;
        int sgn = (mu_pos(k, J) % 2 == 1) ? -1 : 1;
        out.set({k}, ff_scale(it->second, sgn));
    }
    return out;
}

namespace {

void multi_indices(int n, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == n - 1) {
        cur.push_back(m);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= m; ++v) {
        cur.push_back(v);
        multi_indices(n, m - v, cur, out);
        cur.pop_back();
    }
}

FieldFn wbar_minus(const CVec& z, int j) {
    return ff_sub(ff_coord_bar(j), ff_const(std::conj(z[j])));
}

} // namespace

FieldFn zbar_m(const FieldFn& f, const CVec& z, int m) {
    if (m == 0) return f;
    int n = static_cast<int>(z.size());
    std::vector<std::vector<int>> alphas;
    std::vector<int> cur;
    multi_indices(n, m, cur, alphas);
    FieldFn acc = ff_zero();
    for (const auto& alpha : alphas) {
        FieldFn der = f;
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < alpha[j]; ++r) der = der.da(j);
        FieldFn term = der;
        for (int j = 0; j < n; ++j)
            if (alpha[j] > 0) term = ff_mul(term, ff_ipow(wbar_minus(z, j), alpha[j]));
        acc = ff_add(acc, term);
    }
    return acc;
}

DbarM dbar_m_form(const FormQ& eta, const CVec& z, int m) {
    int n = eta.n;
    int q = eta.q - 1;
    if (q < 0) throw std::invalid_argument("dbar_m_form: eta must have positive degree");
    DbarM out;
    out.form = FormQ::zero(n, q);
    for (const auto& J : all_inc(n, q)) {
        FieldFn acc = ff_zero();
        bool any = false;
        for (int k = 1; k <= n; ++k) {
            if (inc_contains(J, k)) continue;
            auto it = eta.coeffs.find(inc_insert(k, J));
            if (it == eta.coeffs.end()) continue;
            int sgn = (mu_pos(k, J) % 2 == 1) ? -1 : 1;
            FieldFn term = ff_mul(wbar_minus(z, k - 1), zbar_m(it->second, z, m));
            acc = ff_add(acc, ff_scale(term, sgn));
            out.rogue_tags.emplace_back(J, k);
            any = true;
        }
        if (any) out.form.set(J, acc);
    }
    return out;
}

FieldFn vec_norm_sq(const VecField& g) {
    FieldFn acc = ff_zero();
    for (const auto& gj : g.entries) acc = ff_add(acc, ff_mul(gj, ff_conj(gj)));
    return acc;
}

GenTensorForm GenTensorForm::zero(int n, int N, int r, int q) {
    GenTensorForm f;
    f.n = n;
    f.N = N;
    f.r = r;
    f.q = q;
    return f;
}

void GenTensorForm::set(const IncIndex& I, FormQ f) {
    if (static_cast<int>(I.size()) != r) throw std::invalid_argument("GenTensorForm::set: rank");
    entries[I] = std::move(f);
}

const FormQ* GenTensorForm::find(const IncIndex& I) const {
    auto it = entries.find(I);
    return it == entries.end() ? nullptr : &it->second;
}

GenTensorForm gt_scale(const GenTensorForm& F, cplx s) {
    GenTensorForm out = GenTensorForm::zero(F.n, F.N, F.r, F.q);
    for (const auto& [I, f] : F.entries) out.set(I, form_scale(f, s));
    return out;
}

GenTensorForm gt_add(const GenTensorForm& F, const GenTensorForm& G) {
    if (F.r != G.r || F.q != G.q) throw std::invalid_argument("gt_add: shape");
    GenTensorForm out = F;
    for (const auto& [I, f] : G.entries) {
        auto it = out.entries.find(I);
        if (it == out.entries.end())
            out.set(I, f);
        else
            it->second = form_add(it->second, f);
    }
    return out;
}

GenTensorForm wedge(const GenTensorForm& F, const GenTensorForm& G) {
    if (F.N != G.N || F.n != G.n) throw std::invalid_argument("wedge: mixed shapes");
    GenTensorForm out = GenTensorForm::zero(F.n, F.N, F.r + G.r, F.q + G.q);
    for (const auto& [I, fi] : F.entries) {
        for (const auto& [J, gj] : G.entries) {
            std::vector<int> K = I;
            K.insert(K.end(), J.begin(), J.end());
            int sgn = sort_sign(K);
            if (sgn == 0) continue;
            FormQ piece = form_wedge(fi, gj);
            if (sgn == -1) piece = form_scale(piece, -1.0);
            auto it = out.entries.find(K);
            if (it == out.entries.end())
                out.set(K, piece);
            else
                it->second = form_add(it->second, piece);
        }
    }
    return out;
}

GenTensorForm contract_g(const GenTensorForm& F, const VecField& g) {
    if (g.N() != F.N) throw std::invalid_argument("contract_g: generator count");
    int r = F.r;
    GenTensorForm out = GenTensorForm::zero(F.n, F.N, r - 1, F.q);
    for (const auto& I : all_inc(F.N, r - 1)) {
        FormQ acc = FormQ::zero(F.n, F.q);
        bool any = false;
        for (int k = 1; k <= F.N; ++k) {
            if (inc_contains(I, k)) continue;
            const FormQ* fk = F.find(inc_insert(k, I));
            if (!fk) continue;
            int sgn = ((r - mu_pos(k, I)) % 2 == 0) ? 1 : -1;
            FormQ piece = FormQ::zero(F.n, F.q);
            for (const auto& [w, c] : fk->coeffs)
                piece.set(w, ff_scale(ff_mul(g.entries[k - 1], c), sgn));
            acc = form_add(acc, piece);
            any = true;
        }
        if (any) out.set(I, acc);
    }
    return out;
}

GenTensorForm gt_dbar(const GenTensorForm& F) {
    GenTensorForm out = GenTensorForm::zero(F.n, F.N, F.r, F.q + 1);
    for (const auto& [I, f] : F.entries) out.set(I, dbar_fn(f));
    return out;
}

GenTensorForm omega0(const VecField& g) {
    FieldFn recip = ff_recip(vec_norm_sq(g));
    GenTensorForm out = GenTensorForm::zero(g.n, g.N(), 1, 0);
    for (int i = 1; i <= g.N(); ++i) {
        FormQ f = FormQ::zero(g.n, 0);
        f.set({}, ff_mul(ff_conj(g.entries[i - 1]), recip));
        out.set({i}, f);
    }
    return out;
}

GenTensorForm omega_tilde(const VecField& g) { return gt_dbar(omega0(g)); }

GenTensorForm omega(const VecField& g, int l) {
    GenTensorForm acc = omega0(g);
    if (l == 0) return acc;
    GenTensorForm tld = omega_tilde(g);
    double fact = 1.0;
    for (int i = 1; i <= l; ++i) {
        acc = wedge(acc, tld);
        fact *= i;
    }
    return gt_scale(acc, -1.0 / fact);
}

GenTensorForm omega12_direct(const VecField& g) {
    FieldFn nsq = vec_norm_sq(g);
    FieldFn recip4 = ff_recip(ff_mul(nsq, nsq));
    GenTensorForm out = GenTensorForm::zero(g.n, g.N(), 2, 1);
    for (int j = 1; j <= g.N(); ++j) {
        for (int k = j + 1; k <= g.N(); ++k) {
            FormQ f = FormQ::zero(g.n, 1);
            for (int i = 0; i < g.n; ++i) {
                FieldFn num = ff_sub(ff_mul(g.entries[k - 1], g.entries[j - 1].dh(i)),
                                     ff_mul(g.entries[j - 1], g.entries[k - 1].dh(i)));
                f.set({i + 1}, ff_mul(ff_conj(num), recip4));
            }
            out.set({j, k}, f);
        }
    }
    return out;
}

} // namespace corona
