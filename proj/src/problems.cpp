#include "stgfdm/problems.hpp"

#include <cmath>
#include <numbers>

#include "stgfdm/errors.hpp"

namespace stgfdm {

namespace {

struct RadialEval {
    double g, g1, g2;  // g(phi0) and derivatives in phi0
};

RadialEval radial(double phi0, bool sine) {
    if (sine) return {std::sin(phi0), std::cos(phi0), -std::sin(phi0)};
    return {phi0, 1.0, 0.0};
}

LevelSetInterface circle_interface(std::function<double(double)> cx,
                                   std::function<double(double)> cy, double radius) {
    LevelSetInterface itf;
    const double r2 = radius * radius;
    itf.phi = [=](double x, double y, double t) {
        const double X = x - cx(t), Y = y - cy(t);
        return X * X + Y * Y - r2;
    };
    itf.grad_phi = [=](double x, double y, double t) {
        return Vec2{2.0 * (x - cx(t)), 2.0 * (y - cy(t))};
    };
    itf.center = [=](double t) { return Vec2{cx(t), cy(t)}; };
    itf.radius = [=](double, double) { return radius; };
    return itf;
}

// Star-shaped polar curve rho = R(theta, t) about a moving center.
LevelSetInterface polar_interface(std::function<double(double)> cx,
                                  std::function<double(double)> cy,
                                  std::function<double(double, double)> R,
                                  std::function<double(double, double)> dR_dtheta) {
    LevelSetInterface itf;
    itf.phi = [=](double x, double y, double t) {
        const double X = x - cx(t), Y = y - cy(t);
        const double rho = std::hypot(X, Y);
        const double th = std::atan2(Y, X);
        return rho - R(th, t);
    };
    itf.grad_phi = [=](double x, double y, double t) {
        const double X = x - cx(t), Y = y - cy(t);
        const double rho = std::hypot(X, Y);
        if (rho < 1e-14) return Vec2{0.0, 0.0};
        const double th = std::atan2(Y, X);
        const double Rp = dR_dtheta(th, t);
        // grad(rho - R(theta)) = rho_hat - R' * theta_hat / rho
        return Vec2{X / rho + Rp * Y / (rho * rho), Y / rho - Rp * X / (rho * rho)};
    };
    itf.center = [=](double t) { return Vec2{cx(t), cy(t)}; };
    itf.radius = R;
    return itf;
}

}  // namespace

FieldEval ExactSolution::u(double x, double y, double t, int side) const {
    const auto& q = prm_;
    const double k = 1.0 / (side == 1 ? q.beta1 : q.beta2);
    const double X = x - q.cx(t), Y = y - q.cy(t);
    const double phi0 = X * X + Y * Y - q.r2;
    const auto [g, g1, g2] = radial(phi0, q.sine_radial);
    const double T = q.sine_time ? std::sin(t) : t;
    const double dT = q.sine_time ? std::cos(t) : 1.0;
    const double phi0_t = -2.0 * (X * q.dcx(t) + Y * q.dcy(t));
    FieldEval f;
    f.v = Y * g * T * k;
    f.dx = Y * 2.0 * X * g1 * T * k;
    f.dy = (g + 2.0 * Y * Y * g1) * T * k;
    f.dxx = Y * (2.0 * g1 + 4.0 * X * X * g2) * T * k;
    f.dyy = (6.0 * Y * g1 + 4.0 * Y * Y * Y * g2) * T * k;
    f.dt = (-q.dcy(t) * g + Y * g1 * phi0_t) * T * k + Y * g * dT * k;
    return f;
}

FieldEval ExactSolution::v(double x, double y, double t, int side) const {
    const auto& q = prm_;
    const double k = 1.0 / (side == 1 ? q.beta1 : q.beta2);
    const double X = x - q.cx(t), Y = y - q.cy(t);
    const double phi0 = X * X + Y * Y - q.r2;
    const auto [g, g1, g2] = radial(phi0, q.sine_radial);
    const double T = q.sine_time ? std::sin(t) : t;
    const double dT = q.sine_time ? std::cos(t) : 1.0;
    const double phi0_t = -2.0 * (X * q.dcx(t) + Y * q.dcy(t));
    FieldEval f;
    f.v = -X * g * T * k;
    f.dx = -(g + 2.0 * X * X * g1) * T * k;
    f.dy = -X * 2.0 * Y * g1 * T * k;
    f.dxx = -(6.0 * X * g1 + 4.0 * X * X * X * g2) * T * k;
    f.dyy = -X * (2.0 * g1 + 4.0 * Y * Y * g2) * T * k;
    f.dt = (q.dcx(t) * g - X * g1 * phi0_t) * T * k - X * g * dT * k;
    return f;
}

PressureEval ExactSolution::p(double x, double y, double t) const {
    const auto& q = prm_;
    const double X = x - q.cx(t), Y = y - q.cy(t);
    const double phi0 = X * X + Y * Y - q.r2;
    const double Tp = q.pressure_time ? t : 1.0;
    const double a = 0.1 * (x * x * x - y * y * y);
    const double ax = 0.3 * x * x, ay = -0.3 * y * y;
    const double axx = 0.6 * x, ayy = -0.6 * y;
    PressureEval f;
    f.v = a * phi0 * Tp;
    f.dx = (ax * phi0 + 2.0 * a * X) * Tp;
    f.dy = (ay * phi0 + 2.0 * a * Y) * Tp;
    f.dxx = (axx * phi0 + 4.0 * ax * X + 2.0 * a) * Tp;
    f.dyy = (ayy * phi0 + 4.0 * ay * Y + 2.0 * a) * Tp;
    return f;
}

ProblemSpec example(int n) {
    ProblemSpec spec;
    spec.id = n;
    ExactSolution::Params q;
    switch (n) {
        case 1: {
            spec.beta1 = 100, spec.beta2 = 1, spec.rho1 = 100, spec.rho2 = 1;
            auto c = [](double t) { return 0.3 + 0.1 * t; };
            auto dc = [](double) { return 0.1; };
            q.cx = q.cy = c;
            q.dcx = q.dcy = dc;
            q.r2 = 0.01;
            spec.interface = circle_interface(c, c, 0.1);
            break;
        }
        case 2:
        case 3: {
            spec.beta1 = 100, spec.beta2 = 1, spec.rho1 = 100, spec.rho2 = 1;
            auto cx = [](double t) { return 0.3 + 0.1 * (t + std::sin(5.0 * t)); };
            auto dcx = [](double t) { return 0.1 * (1.0 + 5.0 * std::cos(5.0 * t)); };
            auto cy = [](double t) { return 0.3 + 0.1 * (t + t * t * t); };
            auto dcy = [](double t) { return 0.1 * (1.0 + 3.0 * t * t); };
            q.cx = cx, q.cy = cy, q.dcx = dcx, q.dcy = dcy;
            q.r2 = 0.01;
            q.pressure_time = true;
            if (n == 2) {
                spec.interface = circle_interface(cx, cy, 0.1);
            } else {
                // octagon-like polar curve, radius about 0.19
                constexpr int kN = 8;
                constexpr double c0 = 0.5 * 3.0 / (10.0 * kN * kN);
                auto R = [](double th, double) {
                    return c0 * (1.0 + 2.0 * kN + kN * kN - (kN + 1.0) * std::cos(kN * th));
                };
                auto dR = [](double th, double) {
                    return c0 * kN * (kN + 1.0) * std::sin(kN * th);
                };
                spec.interface = polar_interface(cx, cy, R, dR);
            }
            break;
        }
        case 4:
        case 5: {
            spec.beta1 = (n == 4) ? 1000 : 10000;
            spec.beta2 = spec.rho1 = spec.rho2 = 1;
            spec.domain.x_min = spec.domain.y_min = -1.0;
            spec.domain.x_max = spec.domain.y_max = 1.0;
            spec.domain.dt = 1.0 / 20.0;
            spec.domain.spacing = 2.0 / 20.0;
            const double w = 0.1;
            q.cx = q.cy = [w](double t) { return w * t; };
            q.dcx = q.dcy = [w](double) { return w; };
            q.r2 = 0.0625;
            q.sine_radial = true;
            q.sine_time = true;
            spec.interface = flower_interface(n == 4 ? 3 : 8, spec.domain.t_max, w);
            break;
        }
        default:
            throw UnknownExample("example: n must be 1..5, got " + std::to_string(n));
    }
    q.beta1 = spec.beta1;
    q.beta2 = spec.beta2;
    spec.exact = ExactSolution(q);
    return spec;
}

void apply_jump_ratio(ProblemSpec& spec, double ratio) {
    if (!(ratio > 0.0)) throw ConfigError("jump ratio must be positive");
    spec.beta1 = ratio * spec.beta2;
    spec.rho1 = ratio * spec.rho2;
    spec.exact.set_beta(spec.beta1, spec.beta2);
}

double forcing(const ProblemSpec& spec, const Point3& p, int side, Component comp) {
    if (side != 1 && side != 2) throw SideMismatch("forcing: side must be 1 or 2");
    const double beta = (side == 1) ? spec.beta1 : spec.beta2;
    const double rho = (side == 1) ? spec.rho1 : spec.rho2;
    const FieldEval f = (comp == Component::X) ? spec.exact.u(p.x, p.y, p.t, side)
                                               : spec.exact.v(p.x, p.y, p.t, side);
    double out = rho * f.dt - beta * (f.dxx + f.dyy);
    if (side == 1) {
        const PressureEval pr = spec.exact.p(p.x, p.y, p.t);
        out += (comp == Component::X) ? pr.dx : pr.dy;
    }
    return out;
}

double forcing_f3(const ProblemSpec& spec, const Point3& p) {
    // div f1 reduces to Laplacian(p); the exact velocity is divergence-free.
    const PressureEval pr = spec.exact.p(p.x, p.y, p.t);
    return pr.dxx + pr.dyy;
}

std::array<double, 2> traction(const ProblemSpec& spec, const Point3& p, const Vec2& n1,
                               const Vec2& n2) {
    if (std::abs(spec.interface.phi(p.x, p.y, p.t)) > 1e-8)
        throw NotOnInterface("traction: point is not on the interface");
    const FieldEval u1 = spec.exact.u(p.x, p.y, p.t, 1);
    const FieldEval v1 = spec.exact.v(p.x, p.y, p.t, 1);
    const FieldEval u2 = spec.exact.u(p.x, p.y, p.t, 2);
    const FieldEval v2 = spec.exact.v(p.x, p.y, p.t, 2);
    const PressureEval pr = spec.exact.p(p.x, p.y, p.t);
    const double b1 = spec.beta1, b2 = spec.beta2;
    // Components of (beta1 grad(u1) - p1 I) n1 + beta2 grad(u2) n2.
    const double tau1 = b1 * (u1.dx * n1.x + u1.dy * n1.y) - pr.v * n1.x +
                        b2 * (u2.dx * n2.x + u2.dy * n2.y);
    const double tau2 = b1 * (v1.dx * n1.x + v1.dy * n1.y) - pr.v * n1.y +
                        b2 * (v2.dx * n2.x + v2.dy * n2.y);
    return {tau1, tau2};
}

LevelSetInterface flower_interface(int petals, double T, double w) {
    if (!(T > 0.0)) throw ConfigError("flower_interface: T must be positive");
    const double k = petals;
    auto R = [k, T](double th, double t) {
        const double blend = t / T;
        return (1.0 - blend) * 0.4 * (0.8 + 0.2 * std::sin(k * th)) + blend * 0.2;
    };
    auto dR = [k, T](double th, double t) {
        return (1.0 - t / T) * 0.4 * 0.2 * k * std::cos(k * th);
    };
    auto c = [w](double t) { return w * t; };
    LevelSetInterface itf;
    itf.phi = [=](double x, double y, double t) {
        const double X = x - c(t), Y = y - c(t);
        const double rho = std::hypot(X, Y);
        return rho - R(std::atan2(Y, X), t);
    };
    itf.grad_phi = [=](double x, double y, double t) {
        const double X = x - c(t), Y = y - c(t);
        const double rho = std::hypot(X, Y);
        if (rho < 1e-14) return Vec2{0.0, 0.0};
        const double th = std::atan2(Y, X);
        const double Rp = dR(th, t);
        return Vec2{X / rho + Rp * Y / (rho * rho), Y / rho - Rp * X / (rho * rho)};
    };
    itf.center = [=](double t) { return Vec2{c(t), c(t)}; };
    itf.radius = R;
    return itf;
}

}  // namespace stgfdm
