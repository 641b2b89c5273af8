#include "corona/ball.hpp"

#include <cmath>
#include <stdexcept>

namespace corona {

double abs_sq(cplx v) { return v.real() * v.real() + v.imag() * v.imag(); }

double comp_sum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

cplx comp_sum_c(const std::vector<cplx>& xs) {
    std::vector<double> re(xs.size()), im(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        re[i] = xs[i].real();
        im[i] = xs[i].imag();
    }
    return {comp_sum(re), comp_sum(im)};
}

double comp_norm_sq(const CVec& z) {
    double s = 0.0, c = 0.0;
    for (const cplx& v : z) {
        double x = abs_sq(v);
        double t = s + x;
        if (s >= x)
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

cplx dot_wzbar(const CVec& w, const CVec& z) {
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    for (size_t j = 0; j < w.size(); ++j) {
        cplx p = w[j] * std::conj(z[j]);
        double t = sr + p.real();
        if (std::abs(sr) >= std::abs(p.real()))
            cr += (sr - t) + p.real();
        else
            cr += (p.real() - t) + sr;
        sr = t;
        t = si + p.imag();
        if (std::abs(si) >= std::abs(p.imag()))
            ci += (si - t) + p.imag();
        else
            ci += (p.imag() - t) + si;
        si = t;
    }
    return {sr + cr, si + ci};
}

cplx pairwise_sum(const std::vector<cplx>& xs) {
    if (xs.empty()) return 0.0;
    std::vector<cplx> cur = xs;
    while (cur.size() > 1) {
        std::vector<cplx> nxt((cur.size() + 1) / 2);
        for (size_t i = 0; i + 1 < cur.size(); i += 2) nxt[i / 2] = cur[i] + cur[i + 1];
        if (cur.size() % 2) nxt.back() = cur.back();
        cur.swap(nxt);
    }
    return cur[0];
}

CVec sub(const CVec& a, const CVec& b) {
    CVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
CVec add(const CVec& a, const CVec& b) {
    CVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
CVec scale(const CVec& a, cplx s) {
    CVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

BallPoint::BallPoint(CVec coords) : z(std::move(coords)) {
    if (z.empty()) throw std::invalid_argument("dimension must be >= 1");
    nsq = comp_norm_sq(z);
    if (!(nsq < 1.0)) throw std::domain_error("point not strictly inside the unit ball");
    if (1.0 - nsq < 1e-14) throw std::domain_error("point too close to the boundary (1-|z|^2 < 1e-14)");
}

static void check_dims(const BallPoint& w, const BallPoint& z) {
    if (w.n() != z.n()) throw std::invalid_argument("dimension mismatch");
}

CVec proj_p(const CVec& a, const CVec& z) {
    double asq = comp_norm_sq(a);
    CVec r(z.size(), cplx(0.0, 0.0));
    if (asq == 0.0) return r; // P_0 = 0 convention
    cplx coef = dot_wzbar(z, a) / asq; // abar.z / |a|^2
    for (size_t i = 0; i < z.size(); ++i) r[i] = coef * a[i];
    return r;
}

CVec proj_q(const CVec& a, const CVec& z) { return sub(z, proj_p(a, z)); }

CVec moebius(const BallPoint& a, const BallPoint& z) {
    check_dims(a, z);
    CVec amz = sub(a.z, z.z);
    CVec p = proj_p(a.z, amz);
    CVec q = proj_q(a.z, amz);
    double root = std::sqrt(1.0 - a.nsq);
    cplx den = 1.0 - dot_wzbar(z.z, a.z); // 1 - abar.z
    CVec r(z.n());
    for (int i = 0; i < z.n(); ++i) r[i] = (p[i] + root * q[i]) / den;
    return r;
}

double delta_canonical(const BallPoint& w, const BallPoint& z) {
    cplx wz = dot_wzbar(w.z, z.z);
    return abs_sq(1.0 - wz) - (1.0 - w.nsq) * (1.0 - z.nsq);
}

double delta_stable(const BallPoint& w, const BallPoint& z) {
    // sum-of-squares face: no cancellation as w -> z, unlike the canonical
    // difference form, so kernel evaluation divides by this one
    CVec wmz = sub(w.z, z.z);
    return (1.0 - z.nsq) * comp_norm_sq(wmz) + abs_sq(dot_wzbar(wmz, z.z));
}

DeltaFaces delta_faces(const BallPoint& w, const BallPoint& z) {
    check_dims(w, z);
    DeltaFaces out{};
    CVec wmz = sub(w.z, z.z);
    double wmz_sq = comp_norm_sq(wmz);
    cplx wz = dot_wzbar(w.z, z.z);
    double one_w = 1.0 - w.nsq, one_z = 1.0 - z.nsq;

    out.faces[0] = abs_sq(1.0 - wz) - one_w * one_z;
    // zbar.(w-z) and wbar.(w-z) scalar pairings
    out.faces[1] = one_z * wmz_sq + abs_sq(dot_wzbar(wmz, z.z));
    out.faces[2] = one_w * wmz_sq + abs_sq(dot_wzbar(wmz, w.z));
    out.faces[3] = abs_sq(1.0 - wz) * comp_norm_sq(moebius(w, z));
    out.faces[4] = abs_sq(1.0 - wz) * comp_norm_sq(moebius(z, w));
    {
        CVec zmw = sub(z.z, w.z);
        CVec p = proj_p(w.z, zmw), q = proj_q(w.z, zmw);
        CVec v = add(p, scale(q, std::sqrt(one_w)));
        out.faces[5] = comp_norm_sq(v);
    }
    {
        CVec zmw = sub(z.z, w.z);
        CVec p = proj_p(z.z, zmw), q = proj_q(z.z, zmw);
        CVec v = add(p, scale(q, std::sqrt(one_z)));
        out.faces[6] = comp_norm_sq(v);
    }
    out.canonical = out.faces[0];
    return out;
}

MetricBundle metric_bundle(const BallPoint& w, const BallPoint& z) {
    check_dims(w, z);
    MetricBundle m{};
    double dd = delta_stable(w, z);
    m.d = std::sqrt(dd > 0.0 ? dd : 0.0);
    m.delta_half = std::sqrt(std::abs(1.0 - dot_wzbar(w.z, z.z)));
    double r2 = comp_norm_sq(moebius(z, w));
    m.rho = std::sqrt(r2 > 0.0 ? r2 : 0.0);
    m.beta = 0.5 * std::log((1.0 + m.rho) / (1.0 - m.rho));
    return m;
}

double measure_weight(const BallPoint& z, WeightKind kind, double t) {
    switch (kind) {
        case WeightKind::lebesgue: return 1.0;
        case WeightKind::invariant: return std::pow(1.0 - z.nsq, -static_cast<double>(z.n()) - 1.0);
        case WeightKind::nu: return std::pow(1.0 - z.nsq, t);
    }
    return 1.0;
}

} // namespace corona
