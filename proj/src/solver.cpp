#include "corona/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <utility>

namespace corona {

namespace {

using cplxl = std::complex<long double>;

// all kernel building blocks at one (w, z); under pullback every factor is a
// product of smooth terms, so the diagonal cancellation never happens in floats
struct KernelFactors {
    cplx one_minus_wz; // 1 - sum w_j conj(z_j)
    double one_minus_wsq;
    double delta;
    double tau;
};

KernelFactors direct_factors(const BallPoint& w, const BallPoint& z) {
    KernelFactors f;
    f.one_minus_wz = 1.0 - dot_wzbar(w.z, z.z);
    f.one_minus_wsq = 1.0 - w.nsq;
    f.delta = delta_stable(w, z);
    f.tau = f.one_minus_wsq * (1.0 - z.nsq) / std::norm(f.one_minus_wz);
    return f;
}

struct PullbackPoint {
    BallPoint w;
    KernelFactors f;
    double jac; // volume distortion of w = phi_z(zeta)
};

PullbackPoint pullback_point(const BallPoint& z, const BallPoint& zeta) {
    cplx d = 1.0 - dot_wzbar(zeta.z, z.z);
    double md2 = std::norm(d);
    double x = 1.0 - z.nsq;
    double tz = 1.0 - zeta.nsq;
    PullbackPoint p{BallPoint(moebius(z, zeta)), KernelFactors{}, 0.0};
    p.f.one_minus_wz = x / d;
    p.f.one_minus_wsq = x * tz / md2;
    p.f.delta = x * x * zeta.nsq / md2;
    p.f.tau = tz;
    p.jac = std::pow(x / md2, z.n() + 1);
    return p;
}

cplx kernel_scalar(const KernelOpParams& p, const KernelFactors& f) {
    switch (p.kind) {
        case KernelKind::S_ns:
            return std::pow(f.one_minus_wsq, p.s - p.n - 1) /
                   cpow_int(std::conj(f.one_minus_wz), p.s);
        case KernelKind::C0q:
        case KernelKind::Phi_ns_ell: {
            int lev = p.ell >= 0 ? p.ell : p.q;
            cplx phi = cpow_int(f.one_minus_wz, p.n - 1 - lev) * std::pow(f.one_minus_wsq, lev) /
                       std::pow(f.delta, p.n);
            if (p.kind == KernelKind::C0q) return phi;
            int k = p.s - p.n;
            cplx a = cplx(f.one_minus_wsq, 0.0) / std::conj(f.one_minus_wz);
            return amel_prefactor(p.n, p.s) * phi * cpow_int(a, k) *
                   psi_poly(p.n, k, lev).eval_shifted(f.tau);
        }
    }
    return cplx(0.0, 0.0);
}

// contraction bookkeeping for output index sets: which input keys feed each
// output key and with what sign
struct ContractionPlan {
    std::vector<IncIndex> out;
    std::vector<std::vector<int>> ks;       // 1-based missing index
    std::vector<std::vector<int>> signs;    // (-1)^{mu(k, J)}
    std::vector<std::vector<IncIndex>> in_keys;
};

ContractionPlan contraction_plan(int n, int q) {
    ContractionPlan plan;
    plan.out = all_inc(n, q);
    plan.ks.resize(plan.out.size());
    plan.signs.resize(plan.out.size());
    plan.in_keys.resize(plan.out.size());
    for (size_t j = 0; j < plan.out.size(); ++j) {
        const IncIndex& J = plan.out[j];
        for (int k = 1; k <= n; ++k) {
            if (inc_contains(J, k)) continue;
            plan.ks[j].push_back(k);
            plan.signs[j].push_back((mu_pos(k, J) % 2 == 1) ? -1 : 1);
            plan.in_keys[j].push_back(inc_insert(k, J));
        }
    }
    return plan;
}

double smooth5(double dist, double eps) {
    double t = (dist - eps) / (0.5 * eps);
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

cplx contract_at(const ContractionPlan& plan, size_t j, const FormValue& ev, const CVec& w,
                 const CVec& z) {
    cplx acc(0.0, 0.0);
    for (size_t m = 0; m < plan.ks[j].size(); ++m) {
        auto it = ev.find(plan.in_keys[j][m]);
        if (it == ev.end()) continue;
        int k = plan.ks[j][m] - 1;
        acc += static_cast<double>(plan.signs[j][m]) * (std::conj(w[k]) - std::conj(z[k])) *
               it->second;
    }
    return acc;
}

void check_eval_point(const KernelOpParams& p, const BallPoint& z) {
    if (std::sqrt(z.nsq) > p.max_abs_z + 1e-9)
        throw std::invalid_argument("apply_kernel_op: evaluation point outside the envelope");
}

FormValue pullback_apply(const KernelOpParams& p, const FormEval& eta, const BallPoint& z,
                         const BallRule& rule) {
    ContractionPlan plan = contraction_plan(p.n, p.q);
    std::vector<cplxl> acc(plan.out.size(), cplxl(0.0L, 0.0L));
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const BallPoint& zeta = rule.nodes[i];
        if (zeta.nsq < 1e-30) continue;
        PullbackPoint pb = pullback_point(z, zeta);
        cplx kw = kernel_scalar(p, pb.f) * (pb.jac * rule.weights[i]);
        FormValue ev = eta(pb.w);
        for (size_t j = 0; j < plan.out.size(); ++j) {
            cplx v = kw * contract_at(plan, j, ev, pb.w.z, z.z);
            acc[j] += cplxl(v.real(), v.imag());
        }
    }
    FormValue out;
    for (size_t j = 0; j < plan.out.size(); ++j)
        out[plan.out[j]] =
            p.constant * cplx(static_cast<double>(acc[j].real()), static_cast<double>(acc[j].imag()));
    return out;
}

// two window radii accumulated in one pass; the Richardson combination
// (4 I(eps/2) - I(eps)) / 3 removes the leading even-order window error
FormValue exclusion_combine(const std::vector<cplxl>& full, const std::vector<cplxl>& half,
                            const std::vector<IncIndex>& keys, double constant) {
    FormValue out;
    for (size_t j = 0; j < keys.size(); ++j) {
        cplxl v = (4.0L * half[j] - full[j]) / 3.0L;
        out[keys[j]] = constant * cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
    return out;
}

FormValue exclusion_apply(const KernelOpParams& p, const FormEval& eta, const BallPoint& z,
                          const BallRule& rule) {
    ContractionPlan plan = contraction_plan(p.n, p.q);
    std::vector<cplxl> full(plan.out.size()), half(plan.out.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const BallPoint& w = rule.nodes[i];
        double dist = std::sqrt(comp_norm_sq(sub(w.z, z.z)));
        double ch = smooth5(dist, 0.5 * p.eps);
        if (ch == 0.0) continue;
        double cf = smooth5(dist, p.eps);
        cplx kw = kernel_scalar(p, direct_factors(w, z)) * rule.weights[i];
        FormValue ev = eta(w);
        for (size_t j = 0; j < plan.out.size(); ++j) {
            cplx v = kw * contract_at(plan, j, ev, w.z, z.z);
            full[j] += cplxl(cf * v.real(), cf * v.imag());
            half[j] += cplxl(ch * v.real(), ch * v.imag());
        }
    }
    return exclusion_combine(full, half, plan.out, p.constant);
}

FormValue scalar_apply(const KernelOpParams& p, const FormEval& eta, const BallPoint& z,
                       const BallRule& rule) {
    // no diagonal singularity for interior z; plain node sum
    cplxl acc(0.0L, 0.0L);
    IncIndex empty;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        KernelFactors f = direct_factors(rule.nodes[i], z);
        FormValue ev = eta(rule.nodes[i]);
        auto it = ev.find(empty);
        if (it == ev.end()) continue;
        cplx v = kernel_scalar(p, f) * rule.weights[i] * it->second;
        acc += cplxl(v.real(), v.imag());
    }
    FormValue out;
    out[empty] =
        p.constant * cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    return out;
}

} // namespace

void KernelOpParams::validate() const {
    if (n < 1) throw std::invalid_argument("kernel op: n must be >= 1");
    switch (kind) {
        case KernelKind::C0q:
            if (s != 0) throw std::invalid_argument("kernel op: plain block needs s = 0");
            break;
        case KernelKind::Phi_ns_ell:
        case KernelKind::S_ns:
            if (s <= n) throw std::invalid_argument("kernel op: amelioration needs integer s > n");
            break;
    }
    if (kind == KernelKind::S_ns) {
        if (q != 0) throw std::invalid_argument("kernel op: scalar kernel needs q = 0");
    } else {
        int lev = ell >= 0 ? ell : q;
        if (q < 0 || q > n - 1 || lev < 0 || lev > n - 1)
            throw std::invalid_argument("kernel op: need 0 <= q, ell <= n - 1");
    }
    if (dbar_m < 0 || dbar_m > 1) throw std::invalid_argument("kernel op: dbar_m must be 0 or 1");
    if (eps <= 0.0 || eps >= 0.5) throw std::invalid_argument("kernel op: eps out of range");
}

FormValue apply_kernel_op_fn(const KernelOpParams& p, const FormEval& eta, const BallPoint& z,
                             const BallRule& rule) {
    p.validate();
    if (p.dbar_m != 0)
        throw std::invalid_argument("apply_kernel_op_fn: contraction of derivative data needs "
                                    "coefficient functions; use the FormQ overload");
    check_eval_point(p, z);
    if (p.kind == KernelKind::S_ns) return scalar_apply(p, eta, z, rule);
    if (p.strategy == SingularStrategy::pullback) return pullback_apply(p, eta, z, rule);
    return exclusion_apply(p, eta, z, rule);
}

FormValue apply_kernel_op(const KernelOpParams& p, const FormQ& eta, const BallPoint& z,
                          const BallRule& rule) {
    p.validate();
    check_eval_point(p, z);
    if (p.kind == KernelKind::S_ns) {
        FormEval ev = [eta](const BallPoint& w) { return eta.eval(w.z); };
        return scalar_apply(p, ev, z, rule);
    }
    if (eta.q != p.q + 1)
        throw std::invalid_argument("apply_kernel_op: eta degree must be q + 1");
    if (p.dbar_m == 1) {
        // contraction against first-order derivative data, assembled once per z
        DbarM dm = dbar_m_form(eta, z.z, 1);
        std::vector<IncIndex> keys;
        std::vector<const FieldFn*> fns;
        for (const auto& [J, c] : dm.form.coeffs) {
            keys.push_back(J);
            fns.push_back(&c);
        }
        std::vector<cplxl> accf(keys.size()), acch(keys.size());
        bool excl = p.strategy == SingularStrategy::exclusion;
        auto tally = [&](const CVec& w, const KernelFactors& f, double jw, double cf, double ch,
                         double qw) {
            cplx kw = kernel_scalar(p, f) * (jw * qw);
            for (size_t j = 0; j < keys.size(); ++j) {
                cplx v = kw * fns[j]->eval(w);
                accf[j] += cplxl(cf * v.real(), cf * v.imag());
                acch[j] += cplxl(ch * v.real(), ch * v.imag());
            }
        };
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            const BallPoint& w = rule.nodes[i];
            if (excl) {
                double dist = std::sqrt(comp_norm_sq(sub(w.z, z.z)));
                double ch = smooth5(dist, 0.5 * p.eps);
                if (ch == 0.0) continue;
                tally(w.z, direct_factors(w, z), 1.0, smooth5(dist, p.eps), ch, rule.weights[i]);
            } else {
                if (w.nsq < 1e-30) continue;
                PullbackPoint pb = pullback_point(z, w);
                tally(pb.w.z, pb.f, pb.jac, 1.0, 1.0, rule.weights[i]);
            }
        }
        if (excl) return exclusion_combine(accf, acch, keys, p.constant);
        FormValue out;
        for (size_t j = 0; j < keys.size(); ++j)
            out[keys[j]] = p.constant * cplx(static_cast<double>(accf[j].real()),
                                             static_cast<double>(accf[j].imag()));
        return out;
    }
    FormEval ev = [eta](const BallPoint& w) { return eta.eval(w.z); };
    if (p.strategy == SingularStrategy::pullback) return pullback_apply(p, ev, z, rule);
    return exclusion_apply(p, ev, z, rule);
}

FormSamples sample_form(const FormEval& eta, int n, int q, const BallRule& rule) {
    FormSamples s;
    s.n = n;
    s.q = q;
    s.index_set = all_inc(n, q);
    s.values.resize(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        FormValue v = eta(rule.nodes[i]);
        s.values[i].resize(s.index_set.size(), cplx(0.0, 0.0));
        for (size_t j = 0; j < s.index_set.size(); ++j) {
            auto it = v.find(s.index_set[j]);
            if (it != v.end()) s.values[i][j] = it->second;
        }
    }
    return s;
}

FormValue apply_kernel_op_sampled(const KernelOpParams& p, const FormSamples& eta,
                                  const BallPoint& z, const BallRule& rule) {
    p.validate();
    check_eval_point(p, z);
    if (p.strategy != SingularStrategy::exclusion)
        throw std::invalid_argument("apply_kernel_op_sampled: samples only make sense with the "
                                    "exclusion strategy");
    if (eta.values.size() != rule.nodes.size())
        throw std::invalid_argument("apply_kernel_op_sampled: samples do not match the rule");
    ContractionPlan plan = contraction_plan(p.n, p.q);
    // positions of the input keys inside the sample layout
    std::vector<std::vector<int>> pos(plan.out.size());
    for (size_t j = 0; j < plan.out.size(); ++j)
        for (const IncIndex& key : plan.in_keys[j]) {
            auto it = std::find(eta.index_set.begin(), eta.index_set.end(), key);
            pos[j].push_back(it == eta.index_set.end()
                                 ? -1
                                 : static_cast<int>(it - eta.index_set.begin()));
        }
    std::vector<cplxl> full(plan.out.size()), half(plan.out.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const BallPoint& w = rule.nodes[i];
        double dist = std::sqrt(comp_norm_sq(sub(w.z, z.z)));
        double ch = smooth5(dist, 0.5 * p.eps);
        if (ch == 0.0) continue;
        double cf = smooth5(dist, p.eps);
        cplx kw = kernel_scalar(p, direct_factors(w, z)) * rule.weights[i];
        for (size_t j = 0; j < plan.out.size(); ++j) {
            cplx c(0.0, 0.0);
            for (size_t m = 0; m < plan.ks[j].size(); ++m) {
                if (pos[j][m] < 0) continue;
                int k = plan.ks[j][m] - 1;
                c += static_cast<double>(plan.signs[j][m]) *
                     (std::conj(w.z[k]) - std::conj(z.z[k])) * eta.values[i][pos[j][m]];
            }
            cplx v = kw * c;
            full[j] += cplxl(cf * v.real(), cf * v.imag());
            half[j] += cplxl(ch * v.real(), ch * v.imag());
        }
    }
    return exclusion_combine(full, half, plan.out, p.constant);
}

cplx fd_deriv(const std::function<cplx(double)>& f, double h) {
    cplx d1 = (f(h) - f(-h)) / (2.0 * h);
    cplx d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

cplx fd_dbar_scalar(const std::function<cplx(const BallPoint&)>& F, const BallPoint& z, int j,
                    double h) {
    auto at = [&](cplx off) {
        CVec p = z.z;
        p[j] += off;
        return F(BallPoint(p));
    };
    cplx dx = fd_deriv([&](double t) { return at(cplx(t, 0.0)); }, h);
    cplx dy = fd_deriv([&](double t) { return at(cplx(0.0, t)); }, h);
    return 0.5 * (dx + cplx(0.0, 1.0) * dy);
}

namespace {
cplx fv_get(const FormValue& v, const IncIndex& k) {
    auto it = v.find(k);
    return it == v.end() ? cplx(0.0, 0.0) : it->second;
}
} // namespace

double form_value_sup(const FormValue& v) {
    double m = 0.0;
    for (const auto& [k, c] : v) m = std::max(m, std::abs(c));
    return m;
}

FormValue form_value_sub(const FormValue& a, const FormValue& b) {
    FormValue out = a;
    for (const auto& [k, c] : b) out[k] -= c;
    return out;
}

FormValue fd_dbar_form(const FormEval& F, int n, int q, const BallPoint& z, double h) {
    auto shifted = [&](int j, cplx off) {
        CVec p = z.z;
        p[j] += off;
        return F(BallPoint(p));
    };
    auto rich = [&](int j, bool im) {
        auto at = [&](double t) { return shifted(j, im ? cplx(0.0, t) : cplx(t, 0.0)); };
        FormValue p1 = at(h), m1 = at(-h), p2 = at(0.5 * h), m2 = at(-0.5 * h);
        FormValue out;
        for (const auto& [k, v] : p1) {
            cplx d1 = (v - m1.at(k)) / (2.0 * h);
            cplx d2 = (p2.at(k) - m2.at(k)) / h;
            out[k] = (4.0 * d2 - d1) / 3.0;
        }
        return out;
    };
    std::vector<FormValue> db(n);
    for (int j = 0; j < n; ++j) {
        FormValue dx = rich(j, false), dy = rich(j, true);
        for (const auto& [k, v] : dx) db[j][k] = 0.5 * (v + cplx(0.0, 1.0) * dy.at(k));
    }
    FormValue out;
    for (const IncIndex& I : all_inc(n, q + 1)) {
        cplx acc(0.0, 0.0);
        for (size_t pos = 0; pos < I.size(); ++pos) {
            int j = I[pos];
            IncIndex rest;
            for (int v : I)
                if (v != j) rest.push_back(v);
            auto it = db[j - 1].find(rest);
            if (it == db[j - 1].end()) continue;
            int sgn = (pos % 2 == 0) ? 1 : -1; // (-1)^{mu - 1}, mu = pos + 1
            acc += static_cast<double>(sgn) * it->second;
        }
        out[I] = acc;
    }
    return out;
}

namespace {

std::vector<BallPoint> random_ball_points(Rng& rng, int n, int count, double radius) {
    std::vector<BallPoint> pts;
    while (static_cast<int>(pts.size()) < count) {
        CVec z(n);
        double nsq = 0.0;
        for (int j = 0; j < n; ++j) {
            double re = rng.uniform(-radius, radius);
            double im = rng.uniform(-radius, radius);
            z[j] = cplx(re, im);
            nsq += re * re + im * im;
        }
        if (nsq > radius * radius) continue;
        pts.emplace_back(std::move(z));
    }
    return pts;
}

} // namespace

DbarSolution solve_dbar_fn(const FormQ& eta, int s, const BallRule& rule,
                           const ConstantsTable& tbl, const std::vector<BallPoint>& eval_points,
                           const SolveOptions& opt) {
    int n = eta.n, q_in = eta.q;
    if (q_in < 1 || q_in > n)
        throw std::invalid_argument("solve_dbar: data degree must lie in [1, n]");
    int q_out = q_in - 1;
    if (!tbl.has(n, q_out, s))
        throw std::runtime_error("solve_dbar: missing constant for (n, q, s); run calibration");
    DbarReport rep;
    rep.n = n;
    rep.q_in = q_in;
    rep.s = s;
    rep.constant = tbl.get(n, q_out, s);

    FormEval eta_ev = [eta](const BallPoint& w) { return eta.eval(w.z); };
    if (opt.closedness == ClosednessMode::exact_poly)
        throw std::invalid_argument("solve_dbar: exact closedness needs polynomial data; use the "
                                    "polynomial overload");
    if (q_in == n) {
        rep.closedness_mode = "structural";
    } else if (opt.closedness == ClosednessMode::finite_difference) {
        rep.closedness_mode = "finite-difference";
        Rng rng(substream(opt.seed, "dbar-closedness"));
        for (const BallPoint& z : random_ball_points(rng, n, opt.closedness_points, 0.5)) {
            FormValue d = fd_dbar_form(eta_ev, n, q_in, z, opt.fd_step);
            rep.closedness = std::max(rep.closedness, form_value_sup(d));
        }
        if (rep.closedness > opt.closedness_tol)
            throw std::invalid_argument("solve_dbar: data is not dbar-closed within tolerance");
    } else {
        rep.closedness_mode = "skipped";
    }

    KernelOpParams p;
    p.kind = s == 0 ? KernelKind::C0q : KernelKind::Phi_ns_ell;
    p.n = n;
    p.q = q_out;
    p.s = s;
    p.constant = rep.constant;
    p.strategy = opt.strategy;
    p.eps = opt.eps;
    p.max_abs_z = opt.max_abs_z;
    p.validate();

    const BallRule* rptr = &rule; // rule must outlive the returned closure
    FormEval u_eval = [p, eta_ev, rptr](const BallPoint& z) {
        return apply_kernel_op_fn(p, eta_ev, z, *rptr);
    };

    DbarSolution sol;
    sol.u.n = n;
    sol.u.q = q_out;
    for (const BallPoint& z : eval_points) {
        sol.u.points.push_back(z);
        sol.u.values.push_back(u_eval(z));
    }
    if (opt.measure_residual) {
        Rng rng(substream(opt.seed, "dbar-residual"));
        double rad = std::min(0.55, opt.max_abs_z - 0.02);
        rep.residual = 0.0;
        rep.residual_points = opt.residual_points;
        for (const BallPoint& z : random_ball_points(rng, n, opt.residual_points, rad)) {
            FormValue d = fd_dbar_form(u_eval, n, q_out, z, opt.fd_step);
            rep.residual = std::max(rep.residual, form_value_sup(form_value_sub(d, eta.eval(z.z))));
        }
    }
    sol.report = rep;
    sol.u_eval = u_eval;
    return sol;
}

DbarSolution solve_dbar(const PolyForm& eta, int s, const BallRule& rule,
                        const ConstantsTable& tbl, const std::vector<BallPoint>& eval_points,
                        const SolveOptions& opt) {
    SolveOptions sub = opt;
    double measured = 0.0;
    std::string mode = "skipped";
    if (opt.closedness == ClosednessMode::exact_poly) {
        sub.closedness = ClosednessMode::skip;
        if (eta.q < eta.n) { // at top degree closedness is structural, nothing to measure
            PolyForm d = eta.dbar();
            for (const auto& [I, c] : d.coeffs) measured = std::max(measured, c.max_abs_coeff());
            if (measured > opt.closedness_tol)
                throw std::invalid_argument("solve_dbar: data is not dbar-closed within tolerance");
            mode = "exact_poly";
        }
    }
    DbarSolution sol = solve_dbar_fn(eta.fn(), s, rule, tbl, eval_points, sub);
    if (mode == "exact_poly") {
        sol.report.closedness_mode = mode;
        sol.report.closedness = measured;
    }
    return sol;
}

CoronaInfeasible::CoronaInfeasible(CVec w, double v)
    : std::runtime_error("corona data infeasible: inf |g| falls below delta"),
      witness(std::move(w)),
      value(v) {}

CoronaProblem::CoronaProblem(int n_, VecField g_, double delta_, FieldFn h_, BallRule rule_,
                             std::vector<int> s_params_)
    : n(n_), g(std::move(g_)), delta(delta_), h(std::move(h_)), rule(std::move(rule_)),
      s_params(std::move(s_params_)) {
    if (delta <= 0.0) throw std::invalid_argument("corona data: delta must be positive");
    const BallPoint* worst = nullptr;
    double best = 0.0;
    for (const BallPoint& w : rule.nodes) {
        double v = 0.0;
        for (const FieldFn& gj : g.entries) v += std::norm(gj.eval(w.z));
        v = std::sqrt(v);
        if (!worst || v < best) {
            worst = &w;
            best = v;
        }
    }
    if (worst && best < delta) throw CoronaInfeasible(worst->z, best);
}

int CoronaProblem::s_for_stage(int q) const {
    if (q >= 1 && q <= static_cast<int>(s_params.size()) && s_params[q - 1] > 0)
        return s_params[q - 1];
    return n + q + 2;
}

namespace {

// shared chain state kept alive by the returned closures
struct ChainCtx {
    VecField g;
    FieldFn h;
    const BallRule* rule = nullptr;
    std::vector<GenTensorForm> om; // omega(g, l) for l = 0..n
    std::vector<FormSamples> stash;
};

// final-slot contraction of a rank r tensor of form values against g
FormValue lam_g_values(const std::shared_ptr<ChainCtx>& ctx, int r,
                       const std::map<IncIndex, FormEval>& T, const IncIndex& I,
                       const BallPoint& z) {
    FormValue acc;
    for (int k = 1; k <= ctx->g.N(); ++k) {
        if (inc_contains(I, k)) continue;
        auto it = T.find(inc_insert(k, I));
        if (it == T.end()) continue;
        double sgn = ((r - mu_pos(k, I)) % 2 == 0) ? 1.0 : -1.0;
        cplx gk = ctx->g.entries[k - 1].eval(z.z);
        for (const auto& [key, v] : it->second(z)) acc[key] += sgn * gk * v;
    }
    return acc;
}

FormValue omega_h_value(const std::shared_ptr<ChainCtx>& ctx, int l, const IncIndex& I,
                        const BallPoint& z) {
    FormValue out;
    const FormQ* f = ctx->om[l].find(I);
    if (!f) return out;
    cplx hv = ctx->h.eval(z.z);
    for (const auto& [key, v] : f->eval(z.z)) out[key] = hv * v;
    return out;
}

} // namespace

CoronaSolution corona_solve(const CoronaProblem& prob, const ConstantsTable& tbl,
                            const CoronaOptions& opt) {
    int n = prob.n, N = prob.g.N();
    auto ctx = std::make_shared<ChainCtx>();
    ctx->g = prob.g;
    ctx->h = prob.h;
    ctx->rule = &prob.rule;
    for (int l = 0; l <= n; ++l) ctx->om.push_back(omega(prob.g, l));

    CoronaSolution sol;
    sol.n = n;
    sol.N = N;

    std::map<IncIndex, FormEval> gamma; // current potentials, one rank ahead
    for (int q = n; q >= 1; --q) {
        std::vector<IncIndex> comps = all_inc(N, q + 1);
        StageReport st;
        st.q = q;
        st.s = prob.s_for_stage(q);
        st.components = static_cast<int>(comps.size());
        if (comps.empty()) {
            gamma.clear();
            st.strategy = "empty";
            sol.stages.push_back(st);
            continue;
        }
        if (!tbl.has(n, q - 1, st.s))
            throw std::runtime_error("corona_solve: missing constant; run calibration");

        KernelOpParams p;
        p.kind = KernelKind::Phi_ns_ell;
        p.n = n;
        p.q = q - 1;
        p.s = st.s;
        p.constant = tbl.get(n, q - 1, st.s);
        p.eps = opt.eps;
        p.max_abs_z = opt.max_abs_z + 0.05;

        std::map<IncIndex, FormEval> rhs;
        std::map<IncIndex, FormEval> prev = gamma;
        int rank = q + 2;
        for (const IncIndex& I : comps)
            rhs[I] = [ctx, q, I, prev, rank](const BallPoint& z) {
                FormValue v = omega_h_value(ctx, q, I, z);
                for (const auto& [key, lv] : lam_g_values(ctx, rank, prev, I, z)) v[key] -= lv;
                return v;
            };

        if (opt.check_closedness && q < n) {
            // degree-n data is closed for free; here the defect tracks the
            // error of the previous solved stage
            st.closedness = 0.0;
            st.closedness_tol = 1e-2;
            Rng rng(substream(opt.seed, "stage-closedness"));
            for (const BallPoint& z : random_ball_points(rng, n, 2, 0.45))
                for (const IncIndex& I : comps)
                    st.closedness = std::max(
                        st.closedness, form_value_sup(fd_dbar_form(rhs[I], n, q, z, opt.fd_step)));
        }

        std::map<IncIndex, FormEval> next;
        if (prev.empty()) {
            p.strategy = SingularStrategy::pullback;
            st.strategy = "pullback";
            for (const IncIndex& I : comps) {
                FormEval r = rhs[I];
                next[I] = [p, r, ctx](const BallPoint& z) {
                    return apply_kernel_op_fn(p, r, z, *ctx->rule);
                };
            }
        } else {
            // later stages re-read the previous potentials at every node, so
            // cache their values once and integrate by exclusion
            p.strategy = SingularStrategy::exclusion;
            st.strategy = "exclusion-cached";
            std::map<IncIndex, std::vector<FormValue>> gcache;
            for (const auto& [Jc, fe] : prev) {
                std::vector<FormValue>& vals = gcache[Jc];
                vals.reserve(ctx->rule->nodes.size());
                for (const BallPoint& w : ctx->rule->nodes) vals.push_back(fe(w));
            }
            std::vector<IncIndex> keys = all_inc(n, q);
            for (const IncIndex& I : comps) {
                FormSamples fs;
                fs.n = n;
                fs.q = q;
                fs.index_set = keys;
                fs.values.resize(ctx->rule->nodes.size());
                for (size_t i = 0; i < ctx->rule->nodes.size(); ++i) {
                    const BallPoint& w = ctx->rule->nodes[i];
                    FormValue v = omega_h_value(ctx, q, I, w);
                    for (int k = 1; k <= N; ++k) {
                        if (inc_contains(I, k)) continue;
                        auto it = gcache.find(inc_insert(k, I));
                        if (it == gcache.end()) continue;
                        double sgn = ((rank - mu_pos(k, I)) % 2 == 0) ? 1.0 : -1.0;
                        cplx gk = ctx->g.entries[k - 1].eval(w.z);
                        for (const auto& [key, gv] : it->second[i]) v[key] -= sgn * gk * gv;
                    }
                    fs.values[i].resize(keys.size(), cplx(0.0, 0.0));
                    for (size_t kk = 0; kk < keys.size(); ++kk) {
                        auto it = v.find(keys[kk]);
                        if (it != v.end()) fs.values[i][kk] = it->second;
                    }
                }
                ctx->stash.push_back(std::move(fs));
                size_t slot = ctx->stash.size() - 1;
                next[I] = [p, ctx, slot](const BallPoint& z) {
                    return apply_kernel_op_sampled(p, ctx->stash[slot], z, *ctx->rule);
                };
            }
        }
        gamma = next;
        sol.stages.push_back(st);
    }

    std::map<IncIndex, FormEval> gamma0 = gamma;
    sol.f_eval = [ctx, gamma0, N](const BallPoint& z) {
        std::map<IncIndex, cplx> gv;
        for (const auto& [I, fe] : gamma0) {
            FormValue v = fe(z);
            auto it = v.find(IncIndex{});
            gv[I] = it == v.end() ? cplx(0.0, 0.0) : it->second;
        }
        cplx hv = ctx->h.eval(z.z);
        std::vector<cplx> f(N);
        for (int j = 1; j <= N; ++j) {
            const FormQ* oj = ctx->om[0].find(IncIndex{j});
            cplx acc = oj ? fv_get(oj->eval(z.z), IncIndex{}) * hv : cplx(0.0, 0.0);
            for (int k = 1; k <= N; ++k) {
                if (k == j) continue;
                auto it = gv.find(inc_insert(k, IncIndex{j}));
                if (it == gv.end()) continue;
                double sgn = ((2 - mu_pos(k, IncIndex{j})) % 2 == 0) ? 1.0 : -1.0;
                acc -= sgn * ctx->g.entries[k - 1].eval(z.z) * it->second;
            }
            f[j - 1] = acc;
        }
        return f;
    };

    Rng rng(substream(opt.seed, "corona-grid"));
    sol.grid = random_ball_points(rng, n, opt.grid_points, opt.max_abs_z);
    for (const BallPoint& z : sol.grid) {
        std::vector<cplx> f = sol.f_eval(z);
        cplx pair(0.0, 0.0);
        for (int j = 0; j < N; ++j) pair += ctx->g.entries[j].eval(z.z) * f[j];
        sol.residual_bezout = std::max(sol.residual_bezout, std::abs(pair - ctx->h.eval(z.z)));
        sol.f.push_back(std::move(f));
    }
    if (opt.measure_dbar) {
        Rng rng2(substream(opt.seed, "corona-dbar"));
        sol.residual_dbar = 0.0;
        auto feval = sol.f_eval;
        double h = opt.fd_step;
        for (const BallPoint& z :
             random_ball_points(rng2, n, opt.dbar_points, opt.max_abs_z - 0.05)) {
            for (int dir = 0; dir < n; ++dir) {
                auto at = [&](cplx off) {
                    CVec pz = z.z;
                    pz[dir] += off;
                    return feval(BallPoint(pz));
                };
                auto rich = [&](bool im) {
                    auto sh = [&](double t) { return at(im ? cplx(0.0, t) : cplx(t, 0.0)); };
                    auto p1 = sh(h), m1 = sh(-h), p2 = sh(0.5 * h), m2 = sh(-0.5 * h);
                    std::vector<cplx> out(N);
                    for (int j = 0; j < N; ++j) {
                        cplx d1 = (p1[j] - m1[j]) / (2.0 * h);
                        cplx d2 = (p2[j] - m2[j]) / h;
                        out[j] = (4.0 * d2 - d1) / 3.0;
                    }
                    return out;
                };
                std::vector<cplx> dx = rich(false), dy = rich(true);
                for (int j = 0; j < N; ++j)
                    sol.residual_dbar = std::max(sol.residual_dbar,
                                                 std::abs(0.5 * (dx[j] + cplx(0.0, 1.0) * dy[j])));
            }
        }
    }
    return sol;
}

IbpGap verify_ibp_radial_fn(const FieldFn& psi, int n, int b, int m, const BallRule& rule) {
    FieldFn cur = psi;
    for (int j = 0; j < m; ++j) {
        double bj = b + j;
        cur = ff_add(ff_scale(cur, (n + bj + 1.0) / (bj + 1.0)),
                     ff_scale(radial_fn(cur, n), 1.0 / (bj + 1.0)));
    }
    auto wrap = [](const FieldFn& f) {
        return [f](const BallPoint& z) { return f.eval(z.z); };
    };
    IbpGap out;
    out.lhs = integrate(wrap(psi), rule, WeightKind::nu, static_cast<double>(b));
    out.rhs = integrate(wrap(cur), rule, WeightKind::nu, static_cast<double>(b + m));
    out.gap = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
    return out;
}

IbpGap verify_ibp_radial(const PolyField& psi, int b, int m, const BallRule& rule) {
    PolyField moved = rb_pow(psi, static_cast<double>(b), m);
    auto wrap = [](const PolyField& f) {
        return [f](const BallPoint& z) { return f.eval(z.z); };
    };
    IbpGap out;
    out.lhs = integrate(wrap(psi), rule, WeightKind::nu, static_cast<double>(b));
    out.rhs = integrate(wrap(moved), rule, WeightKind::nu, static_cast<double>(b + m));
    out.gap = std::abs(out.lhs - out.rhs) / std::max(1.0, std::abs(out.lhs));
    return out;
}

OnceReport verify_once(const FormQ& eta, int ell, const BallRule& rule, const SphereRule& srule,
                       Rng& rng, int npts, int stokes_pts, double max_abs_z) {
    int n = eta.n, q = eta.q - 1;
    if (ell < 1 || ell > q || q > n - 1)
        throw std::invalid_argument("verify_once: need 1 <= ell <= q <= n - 1");
    OnceReport rep;
    rep.points = npts;
    auto op = [&](int lev, int m) {
        KernelOpParams p;
        p.kind = KernelKind::C0q;
        p.n = n;
        p.q = q;
        p.ell = lev;
        p.dbar_m = m;
        p.max_abs_z = max_abs_z;
        return p;
    };
    std::vector<BallPoint> pts = random_ball_points(rng, n, npts, max_abs_z);
    for (const BallPoint& z : pts) {
        FormValue lhs = apply_kernel_op(op(ell, 0), eta, z, rule);
        FormValue d1 = apply_kernel_op(op(ell, 1), eta, z, rule);
        FormValue lo = apply_kernel_op(op(ell - 1, 0), eta, z, rule);
        for (const auto& [J, v] : lhs) {
            cplx rhs = -fv_get(d1, J) / static_cast<double>(ell + 1) +
                       static_cast<double>(ell) / static_cast<double>(ell + 1) * fv_get(lo, J);
            rep.max_gap = std::max(rep.max_gap, std::abs(v - rhs) / std::max(1.0, std::abs(v)));
        }
    }
    // sphere factor (1 - |w|^2)^ell kills the boundary term for ell >= 1
    for (int i = 0; i < stokes_pts && i < static_cast<int>(pts.size()); ++i) {
        const BallPoint& z = pts[i];
        DbarM dm = dbar_m_form(eta, z.z, 0);
        for (const CVec& w : srule.nodes) {
            double bw = 1.0 - comp_norm_sq(w);
            cplx wz = 1.0 - dot_wzbar(w, z.z);
            double delta = std::norm(wz) - bw * (1.0 - z.nsq);
            cplx t = std::pow(bw, ell) * cpow_int(wz, n - 1 - ell) / std::pow(delta, n);
            for (const auto& [J, c] : dm.form.coeffs)
                rep.stokes_max = std::max(rep.stokes_max, std::abs(t * c.eval(w)));
        }
    }
    return rep;
}

bool snap_constant(double raw, double rel_tol, long long& num, long long& den, int& pi_exp) {
    if (raw == 0.0 || !std::isfinite(raw)) return false;
    for (long long q = 1; q <= 720; ++q) {
        for (int step = 0; step <= 12; ++step) {
            int e = (step + 1) / 2 * ((step % 2) ? -1 : 1); // 0, -1, 1, -2, 2, ...
            double y = raw / std::pow(M_PI, e);
            long long p = std::llround(y * static_cast<double>(q));
            if (p == 0) continue;
            double approx = static_cast<double>(p) / static_cast<double>(q);
            if (std::abs(y - approx) <= rel_tol * std::abs(y)) {
                long long g = std::gcd(std::llabs(p), q);
                num = p / g;
                den = q / g;
                pi_exp = e;
                return true;
            }
        }
    }
    return false;
}

CalibrationResult calibrate_op_constant(int n, int q, int s, const BallRule& rule,
                                        double fd_step) {
    if (q != 0 && q != 1)
        throw std::invalid_argument("calibrate_op_constant: manufactured data covers q in {0, 1}");
    FormQ eta = FormQ::zero(n, q + 1);
    if (q == 0) {
        eta.set(IncIndex{1}, ff_const(cplx(1.0, 0.0)));
    } else {
        eta.set(IncIndex{1, 2}, ff_const(cplx(-1.0, 0.0)));
    }
    KernelOpParams p;
    p.kind = s == 0 ? KernelKind::C0q : KernelKind::Phi_ns_ell;
    p.n = n;
    p.q = q;
    p.s = s;
    p.max_abs_z = 0.5;
    p.validate();
    FormEval eta_ev = [eta](const BallPoint& w) { return eta.eval(w.z); };
    const BallRule* rptr = &rule;
    FormEval u_raw = [p, eta_ev, rptr](const BallPoint& z) {
        return apply_kernel_op_fn(p, eta_ev, z, *rptr);
    };
    std::vector<CVec> probes;
    if (n == 1) {
        probes = {{cplx(0.31, 0.17)}, {cplx(-0.22, 0.09)}, {cplx(0.05, -0.33)}};
    } else {
        probes = {{cplx(0.31, 0.17), cplx(-0.11, 0.06)},
                  {cplx(-0.20, 0.05), cplx(0.22, -0.13)},
                  {cplx(0.03, -0.30), cplx(0.14, 0.10)}};
        while (static_cast<int>(probes[0].size()) < n)
            for (auto& pr : probes) pr.push_back(cplx(0.05, -0.04));
    }
    std::vector<cplx> ests;
    IncIndex key = q == 0 ? IncIndex{1} : IncIndex{1, 2};
    cplx target = q == 0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    for (const CVec& pr : probes) {
        BallPoint z(pr);
        FormValue d = fd_dbar_form(u_raw, n, q, z, fd_step);
        ests.push_back(target / d.at(key));
    }
    CalibrationResult res;
    res.n = n;
    res.q = q;
    res.s = s;
    double mean = 0.0;
    for (const cplx& e : ests) mean += e.real();
    mean /= static_cast<double>(ests.size());
    res.raw = mean;
    for (const cplx& e : ests)
        res.spread = std::max(res.spread, std::abs(e - cplx(mean, 0.0)) / std::abs(mean));
    res.value = res.raw;
    if (snap_constant(res.raw, 1e-7, res.num, res.den, res.pi_exp)) {
        res.snapped = true;
        res.value = static_cast<double>(res.num) / static_cast<double>(res.den) *
                    std::pow(M_PI, res.pi_exp);
    }
    return res;
}

ConstantsTable calibrate_constants(int level_n1, int level_n2, double spread_tol) {
    ConstantsTable tbl;
    auto add = [&](int n, int q, int s, const BallRule& rule) {
        CalibrationResult r = calibrate_op_constant(n, q, s, rule);
        if (r.spread > spread_tol)
            throw std::runtime_error("calibrate_constants: probe spread too large; refusing to "
                                     "record the block constant");
        tbl.put(n, q, s, r.value, "calibrated");
    };
    BallRule r1 = ball_rule(1, level_n1);
    add(1, 0, 0, r1);
    add(1, 0, 4, r1);
    BallRule r2 = ball_rule(2, level_n2);
    add(2, 0, 0, r2);
    add(2, 1, 0, r2);
    add(2, 0, 4, r2);
    add(2, 0, 5, r2);
    add(2, 1, 6, r2);
    tbl.put(2, 0, 3, amel_prefactor(2, 3), "derived");
    tbl.put(1, -1, 2, 1.0, "derived");
    tbl.put(2, -1, 3, 1.0, "derived");
    return tbl;
}

} // namespace corona
