#pragma once
#include "corona/calculus.hpp"

#include <map>
#include <utility>
#include <vector>

namespace corona {

// Strictly increasing multi-index over {1..n} (or {1..N} for generator tensors),
// 1-based entries.
using IncIndex = std::vector<int>;

bool inc_contains(const IncIndex& J, int k);
// 1-based position of k inside sorted(J + {k}); k must not be in J
int mu_pos(int k, const IncIndex& J);
IncIndex inc_insert(int k, const IncIndex& J);
std::vector<IncIndex> all_inc(int n, int q);
// sign of the permutation sorting idx ascending (in place); 0 if an entry repeats
int sort_sign(std::vector<int>& idx);

// (0,q)-form with FieldFn coefficients, stored on increasing indices only.
struct FormQ {
    int n = 1;
    int q = 0;
    std::map<IncIndex, FieldFn> coeffs;

    static FormQ zero(int n, int q);
    void set(const IncIndex& I, FieldFn f);
    void accumulate(const IncIndex& I, FieldFn f); // adds
    std::map<IncIndex, cplx> eval(const CVec& z) const;
    double sup_on(const std::vector<CVec>& pts) const;
};

// Same shape with exact polynomial coefficients.
struct PolyForm {
    int n = 1;
    int q = 0;
    std::map<IncIndex, PolyField> coeffs;

    static PolyForm zero(int n, int q);
    void accumulate(const IncIndex& I, const PolyField& f);
    PolyForm dbar() const; // exact antiholomorphic exterior derivative
    bool is_zero() const;
    FormQ fn() const;
};

FormQ dbar_fn(const FormQ& w);
FormQ form_wedge(const FormQ& a, const FormQ& b);
FormQ form_scale(const FormQ& a, cplx s);
FormQ form_add(const FormQ& a, const FormQ& b);

// interior product against dwbar^J: sum_{k not in J} (-1)^{mu(k,J)} eta_{J+k} dwbar_k
FormQ interior(const FormQ& eta, const IncIndex& J);

// sum_{|alpha|=m} (wbar-zbar)^alpha d^m f / dwbar^alpha, z a frozen parameter
FieldFn zbar_m(const FieldFn& f, const CVec& z, int m);

// D-bar-m of a (0,q+1)-form: output in dzbar^J with coefficients in w; each term
// carries the rogue factor (wbar_k - zbar_k), recorded per (J,k) in tags.
struct DbarM {
    FormQ form;
    std::vector<std::pair<IncIndex, int>> rogue_tags; // (J, rogue k)
};
DbarM dbar_m_form(const FormQ& eta, const CVec& z, int m);

// Vector of N fields, the finite truncation of an l^2-valued symbol.
struct VecField {
    int n = 1;
    std::vector<FieldFn> entries;
    int N() const { return static_cast<int>(entries.size()); }
};
FieldFn vec_norm_sq(const VecField& g); // sum g_j conj(g_j) with oracles

// Alternating r-tensor over generator indices with (0,q)-form values.
struct GenTensorForm {
    int n = 1;
    int N = 1;
    int r = 0;
    int q = 0;
    std::map<IncIndex, FormQ> entries;

    static GenTensorForm zero(int n, int N, int r, int q);
    void set(const IncIndex& I, FormQ f);
    const FormQ* find(const IncIndex& I) const;
};

GenTensorForm gt_scale(const GenTensorForm& F, cplx s);
GenTensorForm gt_add(const GenTensorForm& F, const GenTensorForm& G);
// shuffle wedge: signs from the parity of the generator-index interleaving
GenTensorForm wedge(const GenTensorForm& F, const GenTensorForm& G);
// contraction by g in the final tensor variable
GenTensorForm contract_g(const GenTensorForm& F, const VecField& g);
GenTensorForm gt_dbar(const GenTensorForm& F);

// Koszul data: Omega_0^1 entries gbar_i/|g|^2; in the shuffle-wedge convention
// the factorization reads Omega_l^{l+1} = -(1/l!) Omega_0^1 ^ (dbar-part)^l.
GenTensorForm omega0(const VecField& g);
GenTensorForm omega_tilde(const VecField& g);
GenTensorForm omega(const VecField& g, int l);
// direct two-index formula conj(g_k dg_j - g_j dg_k)/|g|^4 for the consistency test
GenTensorForm omega12_direct(const VecField& g);

} // namespace corona
