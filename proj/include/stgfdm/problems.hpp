#pragma once

#include <functional>

#include "stgfdm/geometry.hpp"

namespace stgfdm {

/// Value and partial derivatives of a velocity component at one point.
struct FieldEval {
    double v = 0, dx = 0, dy = 0, dt = 0, dxx = 0, dyy = 0;
};

/// Pressure value and spatial derivatives (side-1 field only).
struct PressureEval {
    double v = 0, dx = 0, dy = 0, dxx = 0, dyy = 0;
};

/// Closed-form exact solution family shared by the five benchmarks:
///   u =  (y - cy) g(phi0) T(t) / beta_side,   phi0 = (x-cx)^2 + (y-cy)^2 - r2
///   v = -(x - cx) g(phi0) T(t) / beta_side
///   p = 0.1 (x^3 - y^3) phi0 Tp(t)
/// with g = identity or sine, T = t or sin t, Tp = 1 or t.
class ExactSolution {
  public:
    struct Params {
        std::function<double(double)> cx, cy, dcx, dcy;
        double r2 = 0.01;
        bool sine_radial = false;   // g(s) = sin s instead of s
        bool sine_time = false;     // T(t) = sin t instead of t
        bool pressure_time = false; // Tp(t) = t instead of 1
        double beta1 = 1.0, beta2 = 1.0;
    };

    ExactSolution() = default;
    explicit ExactSolution(Params p) : prm_(std::move(p)) {}

    FieldEval u(double x, double y, double t, int side) const;
    FieldEval v(double x, double y, double t, int side) const;
    PressureEval p(double x, double y, double t) const;

    const Params& params() const { return prm_; }
    void set_beta(double beta1, double beta2) { prm_.beta1 = beta1; prm_.beta2 = beta2; }

  private:
    Params prm_;
};

struct ProblemSpec {
    int id = 0;
    double beta1 = 1, beta2 = 1, rho1 = 1, rho2 = 1;
    SpaceTimeDomain domain;  // box and T; spacing/dt filled by the caller
    LevelSetInterface interface;
    ExactSolution exact;
};

/// The five benchmark problems. Geometry pitches keep their defaults.
ProblemSpec example(int n);

/// Rescales the coefficient jump: beta1/beta2 = rho1/rho2 = ratio, with the
/// side-2 values kept from the base spec.
void apply_jump_ratio(ProblemSpec& spec, double ratio);

enum class Component { X, Y };

/// Analytic PDE operator applied to the exact solution on the given side.
double forcing(const ProblemSpec& spec, const Point3& p, int side, Component comp);

/// Right-hand side of the pressure Poisson row: div f1 = Laplacian(p).
double forcing_f3(const ProblemSpec& spec, const Point3& p);

/// Traction data from the exact fields, using the discrete flux expressions
/// and the supplied pair of unit normals.
std::array<double, 2> traction(const ProblemSpec& spec, const Point3& p, const Vec2& n1,
                               const Vec2& n2);

/// Relaxing polar flower: R(theta,t) blends 0.4(0.8 + 0.2 sin k*theta) into the
/// equilibrium circle of radius 0.2 linearly over [0, T]; center drifts at w.
LevelSetInterface flower_interface(int petals, double T, double w = 0.1);

}  // namespace stgfdm
