#pragma once
#include "corona/ball.hpp"
#include "corona/forms.hpp"
#include "corona/rational.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace corona {

// s(w,z) = wbar (1 - w.zbar) - zbar (1 - |w|^2); pairing = s.(w-z) = Delta(w,z)
struct SectionVal {
    CVec s;
    cplx pairing;
};
SectionVal section(const BallPoint& w, const BallPoint& z);
// closed-form first derivatives of s_i, 0-based indices
cplx section_dw(int i, int j, const CVec& w, const CVec& z);
cplx section_dwbar(int i, int j, const CVec& w, const CVec& z);
cplx section_dzbar(int i, int j, const CVec& w, const CVec& z);

// (1 - w.zbar)^{n-1-q} (1 - |w|^2)^q / Delta^n
cplx phi_nq(int n, int q, const BallPoint& w, const BallPoint& z);

// integer powers of a complex number by repeated multiplication
cplx cpow_int(cplx base, int e);

// Evaluated solution kernel at (w,z): coefficient of dzbar^J ^ dwbar^K ^ omega_n(w),
// K the ascending complement of J+{k}, keyed by (J, rogue index k).
struct KernelCoeff {
    int n = 1;
    int q = 0;
    int s = 0; // 0 for the plain kernel, >n for the ameliorated one
    std::map<std::pair<IncIndex, int>, cplx> coeffs;
    cplx common_factor = 0.0;
};
// sign of the coefficient at (J,k): parity of the arrangement (k, K asc, J asc)
// of (1..n), times (-1)^q from the overall kernel sign, times (-1)^{q(n-1-q)}
// from commuting the dzbar block past dwbar^K
int kernel_sign(int n, int q, const IncIndex& J, int k);
KernelCoeff kernel_c0q(int n, int q, const BallPoint& w, const BallPoint& z);
KernelCoeff kernel_amel(int n, int s, int q, const BallPoint& w, const BallPoint& z);

// Psi_{n,k}^{0,q}(t) = (1-t)^n t^{-k} int_0^t (t-r)^q (1-t+r)^{-(n+k)} r^{k-1} dr,
// a polynomial of degree <= n-1 vanishing to order exactly q at t=0.
struct PsiPoly {
    int n = 1, k = 1, q = 0;
    std::vector<Rat> coefficients; // coefficients[j] multiplies t^j
    double eval(double t) const;
    double eval_shifted(double t) const; // t^{-q} Psi(t), shift done on coefficients
    int degree() const;
};
const PsiPoly& psi_poly(int n, int k, int q);

// pi^{s-n} / (s-n-1)!
double amel_prefactor(int n, int s);
// Phi_{n,s}^q = prefactor * Phi_n^q * ((1-|w|^2)/(1-wbar.z))^{s-n} * t^{-q} Psi_{n,s-n}^{0,q}(t),
// t = (1-|w|^2)(1-|z|^2)/|1-w.zbar|^2
cplx amel_phi(int n, int s, int q, const BallPoint& w, const BallPoint& z);

// one additive term of the expanded ameliorated kernel, exponents by factor
struct AmelTerm {
    int j = 0;           // power of t in Psi
    double coeff = 0.0;  // Psi coefficient as double
    int num_one_minus_wzbar = 0;
    int num_one_minus_wsq = 0;
    int num_one_minus_zsq = 0;
    int den_delta = 0; // counts double in the balance
    int den_one_minus_wbarz = 0;
    int den_one_minus_wzbar = 0;
    int balance() const;
};
std::vector<AmelTerm> amel_terms(int n, int s, int q);
cplx amel_eval_from_terms(const std::vector<AmelTerm>& terms, int n, int s,
                          const BallPoint& w, const BallPoint& z);

// versioned key-value store; key (n,q,s), q = -1 marks boundary-kernel rows
struct ConstantsTable {
    struct Entry {
        double value = 0.0;
        std::string provenance; // "derived" or "calibrated"
    };
    std::map<std::tuple<int, int, int>, Entry> rows;

    static ConstantsTable load(const std::string& path);
    void save(const std::string& path) const;
    bool has(int n, int q, int s) const;
    double get(int n, int q, int s) const;
    const Entry& entry(int n, int q, int s) const;
    void put(int n, int q, int s, double value, const std::string& provenance);
};
std::string default_constants_path();

// S_{n,s}(w,z) = c_{n,s} (1-|w|^2)^{s-n-1} / (1-wbar.z)^s, c from the table
cplx boundary_kernel(int n, int s, const BallPoint& w, const BallPoint& z,
                     const ConstantsTable& tbl);

} // namespace corona
