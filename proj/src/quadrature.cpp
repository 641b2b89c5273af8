#include "corona/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace corona {

void gauss_legendre_01(int m, std::vector<double>& x, std::vector<double>& w) {
    // Newton on P_m over [-1,1], then map to [0,1]
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double p0 = 0.0, p1 = 0.0, dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p0 = 1.0;
            p1 = 0.0;
            for (int k = 0; k < m; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
            }
            dp = m * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = 0.5 * (1.0 - t);
        w[i] = 0.5 * wi;
        x[m - 1 - i] = 0.5 * (1.0 + t);
        w[m - 1 - i] = 0.5 * wi;
    }
}

double ball_volume(int n) {
    double v = 1.0;
    for (int k = 1; k <= n; ++k) v *= M_PI / k;
    return v;
}

double sphere_area(int n) {
    double a = 2.0 * M_PI;
    for (int k = 1; k < n; ++k) a *= M_PI / k;
    return a;
}

static double halton(uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

BallRule ball_rule(int n, int level) {
    return ball_rule(n, level, n <= 2 ? RuleKind::tensor_polar : RuleKind::low_discrepancy);
}

BallRule ball_rule(int n, int level, RuleKind kind) {
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    if (n < 1 || n > 3) throw std::invalid_argument("supported dimensions: 1, 2, 3");
    BallRule rule;
    rule.n = n;
    rule.level = level;
    rule.kind = kind;

    if (kind == RuleKind::low_discrepancy) {
        // Halton rejection into the ball; equal weights summing exactly to Vol(B_n)
        size_t target = static_cast<size_t>(4096) << (level - 1);
        static const int bases[6] = {2, 3, 5, 7, 11, 13};
        std::vector<CVec> pts;
        pts.reserve(target);
        uint64_t idx = 1;
        while (pts.size() < target) {
            CVec z(n);
            double nsq = 0.0;
            for (int j = 0; j < n; ++j) {
                double re = 2.0 * halton(idx, bases[2 * j]) - 1.0;
                double im = 2.0 * halton(idx, bases[2 * j + 1]) - 1.0;
                z[j] = {re, im};
                nsq += re * re + im * im;
            }
            ++idx;
            if (nsq < 1.0 - 1e-12) pts.push_back(std::move(z));
        }
        double w = ball_volume(n) / static_cast<double>(target);
        for (auto& z : pts) {
            rule.nodes.emplace_back(std::move(z));
            rule.weights.push_back(w);
        }
        return rule;
    }

    if (n == 1) {
        int nr = 16 << (level - 1);
        int nt = 32 << (level - 1);
        std::vector<double> rx, rw;
        gauss_legendre_01(nr, rx, rw);
        for (int i = 0; i < nr; ++i) {
            double r = rx[i];
            double wr = rw[i] * r; // Jacobian r
            for (int j = 0; j < nt; ++j) {
                double th = 2.0 * M_PI * (j + 0.5) / nt;
                rule.nodes.emplace_back(CVec{cplx(r * std::cos(th), r * std::sin(th))});
                rule.weights.push_back(wr * 2.0 * M_PI / nt);
            }
        }
        return rule;
    }

    // n == 2: radius (Jacobian r^3) x S^3 via u = sin^2(phi), two circle angles
    int k1 = level / 2, k2 = (level - 1) / 2;
    int nr = 8 << k1, nu = 4 << k1, nt = 8 << k2;
    std::vector<double> rx, rw, ux, uw;
    gauss_legendre_01(nr, rx, rw);
    gauss_legendre_01(nu, ux, uw);
    for (int i = 0; i < nr; ++i) {
        double r = rx[i];
        double wr = rw[i] * r * r * r;
        for (int a = 0; a < nu; ++a) {
            double u = ux[a];
            double c1 = std::sqrt(1.0 - u), s1 = std::sqrt(u);
            double wu = 0.5 * uw[a];
            for (int b = 0; b < nt; ++b) {
                double t1 = 2.0 * M_PI * (b + 0.5) / nt;
                cplx z1 = r * c1 * cplx(std::cos(t1), std::sin(t1));
                for (int c = 0; c < nt; ++c) {
                    double t2 = 2.0 * M_PI * (c + 0.5) / nt;
                    cplx z2 = r * s1 * cplx(std::cos(t2), std::sin(t2));
                    rule.nodes.emplace_back(CVec{z1, z2});
                    rule.weights.push_back(wr * wu * (2.0 * M_PI / nt) * (2.0 * M_PI / nt));
                }
            }
        }
    }
    return rule;
}

SphereRule sphere_rule(int n, int level) {
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    SphereRule rule;
    rule.n = n;
    rule.level = level;
    if (n == 1) {
        int nt = 64 << (level - 1);
        for (int j = 0; j < nt; ++j) {
            double th = 2.0 * M_PI * (j + 0.5) / nt;
            rule.nodes.push_back(CVec{cplx(std::cos(th), std::sin(th))});
            rule.weights.push_back(2.0 * M_PI / nt);
        }
        return rule;
    }
    if (n == 2) {
        int nu = 8 << (level - 1), nt = 16 << (level - 1);
        std::vector<double> ux, uw;
        gauss_legendre_01(nu, ux, uw);
        for (int a = 0; a < nu; ++a) {
            double u = ux[a];
            double c1 = std::sqrt(1.0 - u), s1 = std::sqrt(u);
            for (int b = 0; b < nt; ++b) {
                double t1 = 2.0 * M_PI * (b + 0.5) / nt;
                for (int c = 0; c < nt; ++c) {
                    double t2 = 2.0 * M_PI * (c + 0.5) / nt;
                    rule.nodes.push_back(CVec{c1 * cplx(std::cos(t1), std::sin(t1)),
                                              s1 * cplx(std::cos(t2), std::sin(t2))});
                    rule.weights.push_back(0.5 * uw[a] * (2.0 * M_PI / nt) * (2.0 * M_PI / nt));
                }
            }
        }
        return rule;
    }
    if (n == 3) {
        // sigma = int (1/4) du1 (1/2) du2 dtheta^3 with u1 = sin^4(phi1), u2 = sin^2(phi2)
        int n1 = 8 << (level - 1), n2 = 4 << (level - 1), nt = 8 << (level - 1);
        std::vector<double> x1, w1, x2, w2;
        gauss_legendre_01(n1, x1, w1);
        gauss_legendre_01(n2, x2, w2);
        for (int a = 0; a < n1; ++a) {
            double s1 = std::pow(x1[a], 0.25), c1 = std::sqrt(1.0 - std::sqrt(x1[a]));
            for (int b = 0; b < n2; ++b) {
                double s2 = std::sqrt(x2[b]), c2 = std::sqrt(1.0 - x2[b]);
                for (int i = 0; i < nt; ++i) {
                    double t1 = 2.0 * M_PI * (i + 0.5) / nt;
                    for (int j = 0; j < nt; ++j) {
                        double t2 = 2.0 * M_PI * (j + 0.5) / nt;
                        for (int k = 0; k < nt; ++k) {
                            double t3 = 2.0 * M_PI * (k + 0.5) / nt;
                            rule.nodes.push_back(
                                CVec{c1 * cplx(std::cos(t1), std::sin(t1)),
                                     s1 * c2 * cplx(std::cos(t2), std::sin(t2)),
                                     s1 * s2 * cplx(std::cos(t3), std::sin(t3))});
                            double dt = 2.0 * M_PI / nt;
                            rule.weights.push_back(0.25 * w1[a] * 0.5 * w2[b] * dt * dt * dt);
                        }
                    }
                }
            }
        }
        return rule;
    }
    throw std::invalid_argument("supported dimensions: 1, 2, 3");
}

cplx integrate(const std::function<cplx(const BallPoint&)>& f, const BallRule& rule,
               WeightKind kind, double t) {
    std::vector<cplx> parts(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double w = rule.weights[i];
        if (kind != WeightKind::lebesgue) w *= measure_weight(rule.nodes[i], kind, t);
        cplx v = f(rule.nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("non-finite integrand value at a quadrature node");
        parts[i] = w * v;
    }
    return pairwise_sum(parts);
}

double integrate_real(const std::function<double(const BallPoint&)>& f, const BallRule& rule,
                      WeightKind kind, double t) {
    return integrate([&](const BallPoint& z) { return cplx(f(z), 0.0); }, rule, kind, t).real();
}

cplx integrate_sphere(const std::function<cplx(const CVec&)>& f, const SphereRule& rule) {
    std::vector<cplx> parts(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) parts[i] = rule.weights[i] * f(rule.nodes[i]);
    return pairwise_sum(parts);
}

} // namespace corona
