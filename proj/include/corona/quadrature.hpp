#pragma once
#include "corona/ball.hpp"

#include <functional>
#include <vector>

namespace corona {

void gauss_legendre_01(int m, std::vector<double>& x, std::vector<double>& w);

enum class RuleKind { tensor_polar, low_discrepancy };

// Product rule in polar coordinates for n <= 2, Halton rejection sampling for n = 3.
// Weights carry the Lebesgue volume element; each refinement level at least
// doubles the node count.
struct BallRule {
    int n = 1;
    int level = 1;
    RuleKind kind = RuleKind::tensor_polar;
    std::vector<BallPoint> nodes;
    std::vector<double> weights;
};

struct SphereRule {
    int n = 1;
    int level = 1;
    std::vector<CVec> nodes; // |w| = 1
    std::vector<double> weights;
};

BallRule ball_rule(int n, int level);
BallRule ball_rule(int n, int level, RuleKind kind);
SphereRule sphere_rule(int n, int level);

double ball_volume(int n);  // pi^n / n!
double sphere_area(int n);  // 2 pi^n / (n-1)!

cplx integrate(const std::function<cplx(const BallPoint&)>& f, const BallRule& rule,
               WeightKind kind = WeightKind::lebesgue, double t = 0.0);
double integrate_real(const std::function<double(const BallPoint&)>& f, const BallRule& rule,
                      WeightKind kind = WeightKind::lebesgue, double t = 0.0);
cplx integrate_sphere(const std::function<cplx(const CVec&)>& f, const SphereRule& rule);

} // namespace corona
