#include "corona/kernels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace corona {

SectionVal section(const BallPoint& w, const BallPoint& z) {
    int n = static_cast<int>(w.z.size());
    cplx wz = dot_wzbar(w.z, z.z);
    cplx a = 1.0 - wz;        // 1 - w.zbar
    double b = 1.0 - w.nsq;   // 1 - |w|^2
    SectionVal out;
    out.s.resize(n);
    for (int i = 0; i < n; ++i) out.s[i] = std::conj(w.z[i]) * a - std::conj(z.z[i]) * b;
    std::vector<cplx> prods(n);
    for (int i = 0; i < n; ++i) prods[i] = out.s[i] * (w.z[i] - z.z[i]);
    out.pairing = comp_sum_c(prods);
    return out;
}

cplx section_dw(int i, int j, const CVec& w, const CVec& z) {
    return std::conj(z[i]) * std::conj(w[j]) - std::conj(w[i]) * std::conj(z[j]);
}

cplx section_dwbar(int i, int j, const CVec& w, const CVec& z) {
    cplx v = std::conj(z[i]) * w[j];
    if (i == j) v += 1.0 - dot_wzbar(w, z);
    return v;
}

cplx section_dzbar(int i, int j, const CVec& w, const CVec& z) {
    cplx v = -std::conj(w[i]) * w[j];
    if (i == j) v -= 1.0 - comp_norm_sq(w);
    return v;
}

cplx cpow_int(cplx base, int e) {
    if (e < 0) return 1.0 / cpow_int(base, -e);
    cplx r = 1.0;
    while (e-- > 0) r *= base;
    return r;
}

cplx phi_nq(int n, int q, const BallPoint& w, const BallPoint& z) {
    if (q < 0 || q > n - 1) throw std::invalid_argument("phi_nq: need 0 <= q <= n-1");
    double delta = delta_stable(w, z);
    if (delta <= 0.0) throw std::domain_error("phi_nq: singular at w = z");
    cplx a = 1.0 - dot_wzbar(w.z, z.z);
    double b = 1.0 - w.nsq;
    return cpow_int(a, n - 1 - q) * std::pow(b, q) / std::pow(delta, n);
}

int kernel_sign(int n, int q, const IncIndex& J, int k) {
    IncIndex full = inc_insert(k, J);
    std::vector<int> arr;
    arr.reserve(n);
    arr.push_back(k);
    for (int v = 1; v <= n; ++v)
        if (!inc_contains(full, v)) arr.push_back(v);
    arr.insert(arr.end(), J.begin(), J.end());
    int sgn = sort_sign(arr);
    if (q % 2 == 1) sgn = -sgn;
    if ((q * (n - 1 - q)) % 2 == 1) sgn = -sgn;
    return sgn;
}

namespace {

KernelCoeff kernel_build(int n, int q, const BallPoint& w, const BallPoint& z, cplx factor,
                         int s) {
    KernelCoeff out;
    out.n = n;
    out.q = q;
    out.s = s;
    out.common_factor = factor;
    for (const auto& J : all_inc(n, q)) {
        for (int k = 1; k <= n; ++k) {
            if (inc_contains(J, k)) continue;
            cplx rogue = std::conj(w.z[k - 1]) - std::conj(z.z[k - 1]);
            out.coeffs[{J, k}] = static_cast<double>(kernel_sign(n, q, J, k)) * rogue * factor;
        }
    }
    return out;
}

} // namespace

KernelCoeff kernel_c0q(int n, int q, const BallPoint& w, const BallPoint& z) {
    return kernel_build(n, q, w, z, phi_nq(n, q, w, z), 0);
}

KernelCoeff kernel_amel(int n, int s, int q, const BallPoint& w, const BallPoint& z) {
    return kernel_build(n, q, w, z, amel_phi(n, s, q, w, z), s);
}

namespace {

using RPoly = std::vector<Rat>; // coefficient of t^j at index j

RPoly rp_trim(RPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

RPoly rp_sub(const RPoly& a, const RPoly& b) {
    RPoly out(std::max(a.size(), b.size()), Rat{0, 1});
    for (size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = out[i] - b[i];
    return rp_trim(out);
}

RPoly rp_mul(const RPoly& a, const RPoly& b) {
    if (a.empty() || b.empty()) return {};
    RPoly out(a.size() + b.size() - 1, Rat{0, 1});
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    return rp_trim(out);
}

RPoly rp_scale(const RPoly& a, Rat s) {
    RPoly out = a;
    for (auto& c : out) c = c * s;
    return rp_trim(out);
}

RPoly rp_one_minus_t_pow(int n) {
    RPoly out(n + 1, Rat{0, 1});
    for (int i = 0; i <= n; ++i) out[i] = Rat{(i % 2 == 0 ? 1 : -1) * binom_ll(n, i), 1};
    return out;
}

RPoly rp_div_t(const RPoly& a) {
    if (a.empty()) return {};
    if (!a[0].is_zero()) throw std::logic_error("rp_div_t: nonzero constant term");
    return RPoly(a.begin() + 1, a.end());
}

PsiPoly make_psi(int n, int k, int q);

const PsiPoly& psi_memo(int n, int k, int q) {
    static std::map<std::tuple<int, int, int>, PsiPoly> cache;
    auto key = std::make_tuple(n, k, q);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, make_psi(n, k, q)).first;
    return it->second;
}

PsiPoly make_psi(int n, int k, int q) {
    PsiPoly out;
    out.n = n;
    out.k = k;
    out.q = q;
    RPoly p;
    if (q > 0) {
        // Psi_{n,k}^{0,q} = Psi_{n,k}^{0,q-1} - (1-t) Psi_{n-1,k}^{0,q-1}
        const RPoly& hi = psi_memo(n, k, q - 1).coefficients;
        const RPoly& lo = psi_memo(n - 1, k, q - 1).coefficients;
        p = rp_sub(hi, rp_mul(rp_one_minus_t_pow(1), lo));
    } else if (k > 1) {
        // Psi_{n,k}^{0,0} = (Psi_{n,k-1}^{0,0} - (1/(k-1))(1-t)^n) * (k-1)/((n+k-1) t)
        const RPoly& prev = psi_memo(n, k - 1, 0).coefficients;
        RPoly num = rp_sub(prev, rp_scale(rp_one_minus_t_pow(n), Rat{1, k - 1}));
        p = rp_scale(rp_div_t(num), Rat{k - 1, n + k - 1});
    } else {
        // Psi_{n,1}^{0,0} = (1 - (1-t)^n)/(n t): coefficient of t^{i-1} is
        // (-1)^{i+1} binom(n,i)/n
        p.resize(n, Rat{0, 1});
        for (int i = 1; i <= n; ++i)
            p[i - 1] = Rat{(i % 2 == 1 ? 1 : -1) * binom_ll(n, i), static_cast<long long>(n)};
    }
    p = rp_trim(p);
    if (static_cast<int>(p.size()) > n) throw std::logic_error("psi_poly: degree exceeds n-1");
    for (int j = 0; j < q && j < static_cast<int>(p.size()); ++j)
        if (!p[j].is_zero()) throw std::logic_error("psi_poly: fails to vanish to order q");
    if (static_cast<int>(p.size()) <= q || p[q].is_zero())
        throw std::logic_error("psi_poly: vanishing order exceeds q");
    out.coefficients = p;
    return out;
}

} // namespace

double PsiPoly::eval(double t) const {
    double acc = 0.0;
    for (size_t i = coefficients.size(); i-- > 0;) acc = acc * t + coefficients[i].to_double();
    return acc;
}

double PsiPoly::eval_shifted(double t) const {
    double acc = 0.0;
    for (size_t i = coefficients.size(); i-- > static_cast<size_t>(q);)
        acc = acc * t + coefficients[i].to_double();
    return acc;
}

int PsiPoly::degree() const { return static_cast<int>(coefficients.size()) - 1; }

const PsiPoly& psi_poly(int n, int k, int q) {
    if (n < 1 || k < 1 || q < 0 || q > n - 1)
        throw std::invalid_argument("psi_poly: need n >= 1, k >= 1, 0 <= q <= n-1");
    return psi_memo(n, k, q);
}

double amel_prefactor(int n, int s) {
    int k = s - n;
    if (k < 1) throw std::invalid_argument("amel_prefactor: need s > n");
    double fact = 1.0;
    for (int i = 2; i <= k - 1; ++i) fact *= i;
    return std::pow(M_PI, k) / fact;
}

cplx amel_phi(int n, int s, int q, const BallPoint& w, const BallPoint& z) {
    int k = s - n;
    if (k < 1) throw std::invalid_argument("amel_phi: need integer s > n");
    double bw = 1.0 - w.nsq;
    double bz = 1.0 - z.nsq;
    cplx one_minus_wbarz = 1.0 - dot_wzbar(z.z, w.z); // 1 - wbar.z = 1 - sum z_j wbar_j
    cplx one_minus_wzbar = 1.0 - dot_wzbar(w.z, z.z);
    double t = bw * bz / std::norm(one_minus_wzbar);
    cplx a_pow = cpow_int(cplx(bw, 0.0) / one_minus_wbarz, k);
    return amel_prefactor(n, s) * phi_nq(n, q, w, z) * a_pow * psi_poly(n, k, q).eval_shifted(t);
}

int AmelTerm::balance() const {
    int num = num_one_minus_wzbar + num_one_minus_wsq + num_one_minus_zsq;
    int den = 2 * den_delta + den_one_minus_wbarz + den_one_minus_wzbar;
    return den - num;
}

std::vector<AmelTerm> amel_terms(int n, int s, int q) {
    int k = s - n;
    const PsiPoly& psi = psi_poly(n, k, q);
    std::vector<AmelTerm> out;
    for (int j = q; j <= psi.degree(); ++j) {
        if (psi.coefficients[j].is_zero()) continue;
        AmelTerm t;
        t.j = j;
        t.coeff = psi.coefficients[j].to_double();
        t.num_one_minus_wzbar = n - 1 - q;
        t.num_one_minus_wsq = k + j;
        t.num_one_minus_zsq = j - q;
        t.den_delta = n;
        t.den_one_minus_wbarz = k + (j - q);
        t.den_one_minus_wzbar = j - q;
        out.push_back(t);
    }
    return out;
}

cplx amel_eval_from_terms(const std::vector<AmelTerm>& terms, int n, int s, const BallPoint& w,
                          const BallPoint& z) {
    double delta = delta_stable(w, z);
    if (delta <= 0.0) throw std::domain_error("amel_eval_from_terms: singular at w = z");
    cplx wzbar = 1.0 - dot_wzbar(w.z, z.z);
    cplx wbarz = 1.0 - dot_wzbar(z.z, w.z);
    double bw = 1.0 - w.nsq;
    double bz = 1.0 - z.nsq;
    cplx acc = 0.0;
    for (const auto& t : terms) {
        cplx num = cpow_int(wzbar, t.num_one_minus_wzbar) * std::pow(bw, t.num_one_minus_wsq) *
                   std::pow(bz, t.num_one_minus_zsq);
        cplx den = std::pow(delta, t.den_delta) * cpow_int(wbarz, t.den_one_minus_wbarz) *
                   cpow_int(wzbar, t.den_one_minus_wzbar);
        acc += t.coeff * num / den;
    }
    return amel_prefactor(n, s) * acc;
}

ConstantsTable ConstantsTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("constants table not found: " + path);
    ConstantsTable tbl;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int n, q, s;
        double v;
        std::string prov;
        if (!(ss >> n >> q >> s >> v >> prov))
            throw std::runtime_error("constants table: malformed line: " + line);
        tbl.rows[{n, q, s}] = Entry{v, prov};
    }
    return tbl;
}

void ConstantsTable::save(const std::string& path) const {
    std::ostringstream out;
    out << "# corona constants table v1\n";
    out << "# columns: n q s value provenance; q = -1 marks boundary-kernel rows\n";
    char buf[64];
    for (const auto& [key, e] : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.value);
        out << std::get<0>(key) << ' ' << std::get<1>(key) << ' ' << std::get<2>(key) << ' '
            << buf << ' ' << e.provenance << '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("constants table: cannot write " + path);
    f << out.str();
}

bool ConstantsTable::has(int n, int q, int s) const { return rows.count({n, q, s}) > 0; }

double ConstantsTable::get(int n, int q, int s) const { return entry(n, q, s).value; }

const ConstantsTable::Entry& ConstantsTable::entry(int n, int q, int s) const {
    auto it = rows.find({n, q, s});
    if (it == rows.end()) {
        std::ostringstream ss;
        ss << "constants table: missing key (" << n << "," << q << "," << s << ")";
        throw std::runtime_error(ss.str());
    }
    return it->second;
}

void ConstantsTable::put(int n, int q, int s, double value, const std::string& provenance) {
    rows[{n, q, s}] = Entry{value, provenance};
}

std::string default_constants_path() { return std::string(CORONA_DATA_DIR) + "/constants_table.txt"; }

cplx boundary_kernel(int n, int s, const BallPoint& w, const BallPoint& z,
                     const ConstantsTable& tbl) {
    if (s <= n) throw std::invalid_argument("boundary_kernel: need integer s > n");
    double c = tbl.get(n, -1, s);
    cplx wbarz = 1.0 - dot_wzbar(z.z, w.z);
    return c * std::pow(1.0 - w.nsq, s - n - 1) / cpow_int(wbarz, s);
}

} // namespace corona
