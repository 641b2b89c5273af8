#pragma once
#include <array>
#include <complex>
#include <vector>

namespace corona {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Neumaier-compensated sums: every formula downstream divides by 1-|z|^2,
// so the squared norm is computed with a running correction term.
double comp_norm_sq(const CVec& z);
// scalar product w.zbar = sum_j w_j conj(z_j); its conjugate is wbar.z
cplx dot_wzbar(const CVec& w, const CVec& z);
double comp_sum(const std::vector<double>& xs);
cplx comp_sum_c(const std::vector<cplx>& xs);
cplx pairwise_sum(const std::vector<cplx>& xs);

CVec sub(const CVec& a, const CVec& b);
CVec add(const CVec& a, const CVec& b);
CVec scale(const CVec& a, cplx s);
double abs_sq(cplx v);

// Point of the open unit ball with the cached squared norm.
struct BallPoint {
    CVec z;
    double nsq;
    explicit BallPoint(CVec coords);
    int n() const { return static_cast<int>(z.size()); }
};

struct MetricBundle {
    double d;          // sqrt(Delta)
    double delta_half; // |1 - w.zbar|^{1/2}
    double rho;        // |phi_z(w)|, pseudohyperbolic
    double beta;       // Bergman distance, (1/2) log((1+rho)/(1-rho))
};

struct DeltaFaces {
    std::array<double, 7> faces;
    double canonical; // equals faces[0]
};

// All seven equivalent expressions for Delta(w,z), each evaluated independently.
DeltaFaces delta_faces(const BallPoint& w, const BallPoint& z);
// canonical face: |1-w.zbar|^2 - (1-|w|^2)(1-|z|^2)
double delta_canonical(const BallPoint& w, const BallPoint& z);
double delta_stable(const BallPoint& w, const BallPoint& z);

// P_a z = (abar.z/|a|^2) a with P_0 = 0; Q_a z = z - P_a z.
CVec proj_p(const CVec& a, const CVec& z);
CVec proj_q(const CVec& a, const CVec& z);

// phi_a(z) = (P_a(a-z) + sqrt(1-|a|^2) Q_a(a-z)) / (1 - abar.z); involutive automorphism.
CVec moebius(const BallPoint& a, const BallPoint& z);

MetricBundle metric_bundle(const BallPoint& w, const BallPoint& z);

enum class WeightKind { lebesgue, invariant, nu };
// invariant: (1-|z|^2)^{-n-1}; nu: (1-|z|^2)^t; lebesgue: 1.
double measure_weight(const BallPoint& z, WeightKind kind, double t = 0.0);

} // namespace corona
