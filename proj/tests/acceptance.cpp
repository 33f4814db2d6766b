// Acceptance harness: one pass/fail line per criterion, exit code 0 only if
// every criterion holds. All tolerances are pinned here.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "stgfdm/runner.hpp"

using namespace stgfdm;

namespace {

int g_failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] %2d. %-34s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

RunConfig base_config(int nx, double dt, int m) {
    RunConfig cfg;
    cfg.example = 1;
    cfg.nx = nx;
    cfg.dt = dt;
    cfg.m = m;
    cfg.norm_slab = true;
    cfg.t_report = 0.5;
    return cfg;
}

// ---------------------------------------------------------------- criterion 1
// Every star of Example 1's nx = 16 cloud differentiates all nine degree-<=2
// monomials of the local offsets exactly (relative 1e-8).
void criterion_1() {
    Timer timer;
    const RunConfig cfg = base_config(16, 0.1, 60);
    const ProblemSpec problem = make_problem(cfg);
    SpaceTimeDomain domain = problem.domain;
    domain.spacing = 1.0 / 16.0;
    domain.dt = 0.1;
    RefinementPolicy refine;
    refine.min_side_nodes = cfg.m + 1;
    refine.min_nodes = cfg.m + 1;
    const PointCloud cloud = generate_cloud(domain, problem.interface, refine);
    const auto stars = build_all_stars(cloud, cfg.m);

    // monomial -> exact 9-vector of derivatives at the center (offset 0)
    const auto mono = [](const Point3& o, int j) {
        const double vals[9] = {o.x,       o.y,       o.t,       o.x * o.x, o.y * o.y,
                                o.t * o.t, o.x * o.y, o.x * o.t, o.y * o.t};
        return vals[j];
    };
    // exact derivative (row r) of monomial j at the origin
    const auto exact = [](int j, int r) {
        if (j < 3) return (r == j) ? 1.0 : 0.0;          // h, l, r
        if (j < 6) return (r == j) ? 2.0 : 0.0;          // h^2, l^2, r^2
        return (r == j) ? 1.0 : 0.0;                     // hl, hr, lr (rows 6..8)
    };

    double worst = 0.0;
    for (const auto& star : stars) {
        double d = 0.0;  // star radius: natural length scale of the rows
        for (const auto& o : star.offsets)
            d = std::max(d, std::sqrt(o.x * o.x + o.y * o.y + o.t * o.t));
        for (int j = 0; j < 9; ++j) {
            for (int r = 0; r < kDerivRows; ++r) {
                double acc = 0.0;  // the monomial vanishes at the center
                for (int k = 0; k < star.m(); ++k)
                    acc += star.E(r, k + 1) * mono(star.offsets[k], j);
                // a row of order o applied to a monomial of degree g has
                // natural magnitude d^(g-o); measure the defect against it
                const int g = (j < 3) ? 1 : 2;
                const int o = (r < 3) ? 1 : 2;
                const double unit = std::pow(d, g - o);
                worst = std::max(worst, std::abs(acc - exact(j, r)) / unit);
            }
        }
    }
    const bool pass = worst <= 1e-8 && timer.s() < 30.0;
    report(1, "stencil exactness", pass,
           fmt("worst relative defect %.2e over %zu stars (tol 1e-8)", worst, stars.size()),
           timer.s());
}

// ---------------------------------------------------------------- criterion 2
// build_stencil equals a from-scratch normal-equation solve on random stars.
void criterion_2() {
    Timer timer;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    PointCloud cloud;
    for (int i = 0; i < 400; ++i) {
        SpaceTimeNode n;
        n.pos = {dist(rng), dist(rng), dist(rng)};
        n.category = NodeCategory::Interior1;
        n.index = i;
        cloud.nodes.push_back(n);
        cloud.spacing.push_back(0.1);
        ++cloud.counts[0];
    }
    cloud.base_spacing = 0.1;
    cloud.dt = 0.1;
    const NeighborSearch search(cloud, 0.15);

    double worst = 0.0;
    std::uniform_int_distribution<int> pick(0, cloud.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
        Star star = select_star(cloud, search, pick(rng), 30);
        build_stencil(star);
        // oracle: weighted normal equations on offsets scaled by the star
        // radius, solved densely with full-pivot LU, then rescaled back
        double d = 0.0;
        for (const auto& o : star.offsets)
            d = std::max(d, std::sqrt(o.x * o.x + o.y * o.y + o.t * o.t));
        Eigen::Matrix<double, 9, 9> A = Eigen::Matrix<double, 9, 9>::Zero();
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(9, star.m() + 1);
        for (int k = 0; k < star.m(); ++k) {
            const double h = star.offsets[k].x / d, l = star.offsets[k].y / d,
                         r = star.offsets[k].t / d;
            Eigen::Matrix<double, 9, 1> s;
            s << h, l, r, 0.5 * h * h, 0.5 * l * l, 0.5 * r * r, h * l, h * r, l * r;
            const double w2 = star.weights[k] * star.weights[k];
            A += w2 * s * s.transpose();
            B.col(k + 1) = w2 * s;
            B.col(0) -= w2 * s;
        }
        Eigen::MatrixXd E = A.fullPivLu().solve(B);
        E.topRows(3) /= d;
        E.bottomRows(6) /= (d * d);
        for (int r = 0; r < 9; ++r) {
            const double row_scale =
                std::max(star.E.row(r).cwiseAbs().maxCoeff(), 1e-300);
            for (int c = 0; c <= star.m(); ++c)
                worst = std::max(worst, std::abs(star.E(r, c) - E(r, c)) / row_scale);
        }
    }
    const bool pass = worst <= 1e-10 && timer.s() < 10.0;
    report(2, "stencil oracle equivalence", pass,
           fmt("worst column defect %.2e over 100 stars (tol 1e-10)", worst), timer.s());
}

// ---------------------------------------------------------------- criterion 3
// Exact solution + derived forcing close every PDE identically.
void criterion_3() {
    Timer timer;
    double worst = 0.0;
    for (int ex = 1; ex <= 5; ++ex) {
        const ProblemSpec spec = example(ex);
        std::mt19937 rng(3000 + ex);
        std::uniform_real_distribution<double> ux(spec.domain.x_min, spec.domain.x_max);
        std::uniform_real_distribution<double> uy(spec.domain.y_min, spec.domain.y_max);
        std::uniform_real_distribution<double> ut(0.0, spec.domain.t_max);
        for (int trial = 0; trial < 1000; ++trial) {
            const double x = ux(rng), y = uy(rng), t = ut(rng);
            // the identity holds per side regardless of which region the
            // point lies in, so exercise both branches at every point
            const int side = 1 + (trial % 2);
            const double beta = side == 1 ? spec.beta1 : spec.beta2;
            const double rho = side == 1 ? spec.rho1 : spec.rho2;
            const auto u = spec.exact.u(x, y, t, side);
            const auto v = spec.exact.v(x, y, t, side);
            const auto p = spec.exact.p(x, y, t);
            double rx = rho * u.dt - beta * (u.dxx + u.dyy);
            double ry = rho * v.dt - beta * (v.dxx + v.dyy);
            if (side == 1) {
                rx += p.dx;
                ry += p.dy;
            }
            rx -= forcing(spec, {x, y, t}, side, Component::X);
            ry -= forcing(spec, {x, y, t}, side, Component::Y);
            double rp = 0.0;
            if (side == 1) rp = (p.dxx + p.dyy) - forcing_f3(spec, {x, y, t});
            const double div = u.dx + v.dy;
            const double scale = std::max(
                {1.0, std::abs(rho * u.dt), std::abs(beta * (u.dxx + u.dyy))});
            worst = std::max({worst, std::abs(rx) / scale, std::abs(ry) / scale,
                              std::abs(rp) / scale, std::abs(div)});
        }
    }
    const bool pass = worst <= 1e-10 && timer.s() < 10.0;
    report(3, "manufactured consistency", pass,
           fmt("worst residual %.2e, 1000 points x 5 examples (tol 1e-10)", worst),
           timer.s());
}

// ---------------------------------------------------------------- criterion 4
// Example 1 at the Table-1 density: L2 errors within a factor 5 of the
// reference values (8.15e-6, 4.40e-6, 1.87e-5).
void criterion_4() {
    Timer timer;
    const auto rep = run(base_config(30, 0.1, 60));
    const double ref_u = 8.15e-6, ref_v = 4.40e-6, ref_p = 1.87e-5;
    const double fu = rep.u.l2 / ref_u, fv = rep.v.l2 / ref_v, fp = rep.p.l2 / ref_p;
    const auto within = [](double f) { return f >= 0.2 && f <= 5.0; };
    const bool pass = within(fu) && within(fv) && within(fp) && timer.s() < 300.0;
    report(4, "benchmark accuracy", pass,
           fmt("L2 u %.2e v %.2e p %.2e; factors %.2f/%.2f/%.2f (each in [0.2, 5])",
               rep.u.l2, rep.v.l2, rep.p.l2, fu, fv, fp),
           timer.s());
}

// ---------------------------------------------------------------- criterion 5
// H1 convergence of the side-1 velocity between nx = 16 and nx = 32 is at
// least first order.
void criterion_5() {
    Timer timer;
    double h1u[2], h1v[2];
    for (int i = 0; i < 2; ++i) {
        const int nx = (i == 0) ? 16 : 32;
        RunConfig cfg = base_config(nx, 1.0 / nx, 60);
        const auto art = run_full(cfg);
        NormOptions opt;
        opt.mode = NormMode::TimeSlab;
        opt.t_report = 0.5;
        opt.side = SideFilter::Side1;
        h1u[i] = error_norms(art.cloud, art.stars, art.fields, art.problem, FieldId::U, opt).h1;
        h1v[i] = error_norms(art.cloud, art.stars, art.fields, art.problem, FieldId::V, opt).h1;
    }
    const double pu = convergence_order(h1u[0], h1u[1]);
    const double pv = convergence_order(h1v[0], h1v[1]);
    const bool pass = pu >= 1.0 && pv >= 1.0 && timer.s() < 600.0;
    report(5, "H1 convergence order", pass,
           fmt("order(u1) %.2f, order(v1) %.2f (tol >= 1.0; reference 1.67/1.64)", pu, pv),
           timer.s());
}

// ---------------------------------------------------------------- criterion 6
// Relative L2(u) moves by less than one decade across ratio = 1e2..1e6.
void criterion_6() {
    Timer timer;
    double lo = 1e300, hi = 0.0;
    std::string detail;
    for (double ratio : {1e2, 1e4, 1e6}) {
        RunConfig cfg = base_config(16, 0.1, 60);
        cfg.ratio = ratio;
        const auto rep = run(cfg);
        lo = std::min(lo, rep.u.l2_rel);
        hi = std::max(hi, rep.u.l2_rel);
        detail += fmt("%.2e ", rep.u.l2_rel);
    }
    const bool pass = hi / lo < 10.0 && timer.s() < 600.0;
    report(6, "jump-ratio stability", pass,
           fmt("L2 rel u over ratios 1e2/1e4/1e6: %s(spread %.2fx, tol < 10x)",
               detail.c_str(), hi / lo),
           timer.s());
}

// ---------------------------------------------------------------- criterion 7
// m in {55, 60, 63}: no singular moment matrix, all Linf below 1e-2 relative.
void criterion_7() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int m : {55, 60, 63}) {
        try {
            const auto rep = run(base_config(16, 0.1, m));
            const double worst =
                std::max({rep.u.linf_rel, rep.v.linf_rel, rep.p.linf_rel});
            detail += fmt("m=%d %.2e ", m, worst);
            if (!(worst < 1e-2)) pass = false;
        } catch (const SingularMomentMatrix& e) {
            detail += fmt("m=%d singular ", m);
            pass = false;
        }
    }
    pass = pass && timer.s() < 600.0;
    report(7, "m-robustness", pass, detail + "(tol < 1e-2 each)", timer.s());
}

// ---------------------------------------------------------------- criterion 8
// Errors concentrate near the interface: the 95th percentile of the nodal
// velocity error over interface-adjacent nodes exceeds the all-node median.
void criterion_8() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int ex : {1, 2}) {
        RunConfig cfg = base_config(16, 0.1, 60);
        cfg.example = ex;
        const auto art = run_full(cfg);
        std::vector<double> all, iface;
        for (const auto& node : art.cloud.nodes) {
            const int i = node.index;
            const int s = side_of(node.category);
            const auto& pt = node.pos;
            const double du = art.fields.u[i] - art.problem.exact.u(pt.x, pt.y, pt.t, s).v;
            const double dv = art.fields.v[i] - art.problem.exact.v(pt.x, pt.y, pt.t, s).v;
            const double e = std::hypot(du, dv);
            all.push_back(e);
            // adjacent: the interface samples themselves plus anything within
            // two local spacings of the surface
            const double phi = art.problem.interface.phi(pt.x, pt.y, pt.t);
            const Vec2 g = art.problem.interface.grad_phi(pt.x, pt.y, pt.t);
            const double gn = std::hypot(g.x, g.y);
            const double dist = gn > 1e-12 ? std::abs(phi) / gn : 1e300;
            if (node.category == NodeCategory::Interface1 ||
                node.category == NodeCategory::Interface2 ||
                dist < 2.0 * art.cloud.spacing[i])
                iface.push_back(e);
        }
        std::sort(all.begin(), all.end());
        std::sort(iface.begin(), iface.end());
        const double median = all[all.size() / 2];
        const double p95 = iface[static_cast<size_t>(0.95 * (iface.size() - 1))];
        detail += fmt("ex%d p95(iface) %.2e vs median %.2e; ", ex, p95, median);
        if (!(p95 > median)) pass = false;
    }
    report(8, "interface error localization", pass, detail, timer.s());
}

// ---------------------------------------------------------------- criterion 9
// Examples 3-5 run end-to-end; 4 and 5 keep H1(u) under 0.5 relative.
void criterion_9() {
    Timer timer;
    bool pass = true;
    std::string detail;
    for (int ex : {3, 4, 5}) {
        try {
            RunConfig cfg = base_config(16, 0.0, 60);  // dt 0: example default
            cfg.example = ex;
            const auto rep = run(cfg);
            detail += fmt("ex%d H1rel(u) %.2e ", ex, rep.u.h1_rel);
            if (ex >= 4 && !(rep.u.h1_rel < 0.5)) pass = false;
            if (!std::isfinite(rep.u.linf)) pass = false;
        } catch (const Error& e) {
            detail += fmt("ex%d threw (%s) ", ex, e.what());
            pass = false;
        }
    }
    report(9, "examples 3-5 smoke", pass, detail + "(tol ex4/ex5 < 0.5)", timer.s());
}

// --------------------------------------------------------------- criterion 10
// Zero data in, zero solution out.
void criterion_10() {
    Timer timer;
    RunConfig cfg = base_config(10, 0.2, 40);
    const ProblemSpec problem = make_problem(cfg);
    SpaceTimeDomain domain = problem.domain;
    domain.spacing = 1.0 / cfg.nx;
    domain.dt = cfg.dt;
    RefinementPolicy refine;
    refine.min_side_nodes = cfg.m + 1;
    refine.min_nodes = cfg.m + 1;
    const PointCloud cloud = generate_cloud(domain, problem.interface, refine);
    const auto stars = build_all_stars(cloud, cfg.m);
    const UnknownMap map(cloud);
    SparseSystem sys = assemble(cloud, stars, problem, map);
    std::fill(sys.rhs.begin(), sys.rhs.end(), 0.0);  // zero forcing and data
    const auto sol = solve(sys);
    double worst = 0.0;
    for (double x : sol.solution) worst = std::max(worst, std::abs(x));
    const auto res = residual(sys, sol.solution);
    double rmax = 0.0;
    for (double r : res) rmax = std::max(rmax, std::abs(r));
    const bool pass = worst <= 1e-10 && rmax <= 1e-10;
    report(10, "homogeneous zero solution", pass,
           fmt("max |x| %.2e, max residual %.2e (tol 1e-10)", worst, rmax), timer.s());
}

}  // namespace

int main() {
    std::printf("ST-GFDM acceptance criteria\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
