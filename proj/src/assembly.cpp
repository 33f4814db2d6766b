#include "stgfdm/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stgfdm/errors.hpp"

namespace stgfdm {

namespace {

bool is_boundary_like(NodeCategory c) {
    return c == NodeCategory::Boundary1 || c == NodeCategory::Boundary2 ||
           c == NodeCategory::Initial1 || c == NodeCategory::Initial2;
}

bool is_interface(NodeCategory c) {
    return c == NodeCategory::Interface1 || c == NodeCategory::Interface2;
}

}  // namespace

UnknownMap::UnknownMap(const PointCloud& cloud) {
    const int n = cloud.size();
    u_.assign(n, -1);
    v_.assign(n, -1);
    p_.assign(n, -1);

    std::vector<int> order;
    order.reserve(n);
    for (int side : {1, 2}) {
        for (int pass = 0; pass < 3; ++pass) {
            for (int i = 0; i < n; ++i) {
                const NodeCategory c = cloud.nodes[i].category;
                if (side_of(c) != side) continue;
                const int want = is_boundary_like(c) ? 0 : (is_interface(c) ? 1 : 2);
                if (want == pass) order.push_back(i);
            }
        }
    }

    int col = 0;
    for (int i : order) u_[i] = col++;
    for (int i : order) v_[i] = col++;
    for (int i : order)
        if (side_of(cloud.nodes[i].category) == 1) p_[i] = col++;
    cols_ = col;
}

SparseSystem assemble(const PointCloud& cloud, const std::vector<Star>& stars,
                      const ProblemSpec& problem, const UnknownMap& map,
                      const AssemblyOptions& opts) {
    if (static_cast<int>(stars.size()) != cloud.size())
        throw MissingStar("assemble: star count does not match node count");

    SparseSystem sys;
    sys.n = map.cols();
    sys.rhs.assign(sys.n, 0.0);
    sys.triplets.reserve(static_cast<size_t>(cloud.size()) * 64);

    auto add = [&](int row, int col, double value) {
        if (row < 0 || col < 0 || row >= sys.n || col >= sys.n)
            throw ShapeMismatch("assemble: row/col outside the unknown map");
        if (value != 0.0) sys.triplets.push_back({row, col, value});
    };

    // Spread one E row of `star`, scaled, over a field's columns.
    enum Field { U, V, P };
    auto add_row = [&](int row, const Star& star, DerivRow d, double scale, Field f) {
        auto col_of = [&](int node) {
            switch (f) {
                case U: return map.u_col(node);
                case V: return map.v_col(node);
                default: return map.p_col(node);
            }
        };
        add(row, col_of(star.center), scale * star.E(d, 0));
        for (int k = 0; k < star.m(); ++k)
            add(row, col_of(star.neighbors[k]), scale * star.E(d, k + 1));
    };

    const double b1 = problem.beta1, b2 = problem.beta2;
    const double r1 = problem.rho1, r2 = problem.rho2;
    const auto& exact = problem.exact;

    for (const auto& node : cloud.nodes) {
        const int i = node.index;
        const Point3& pt = node.pos;
        const Star& star = stars[i];
        const int ru = map.u_col(i), rv = map.v_col(i), rp = map.p_col(i);

        switch (node.category) {
            case NodeCategory::Interior1:
                // momentum rows, Stokes side
                add_row(ru, star, kDt, r1, U);
                add_row(ru, star, kDxx, -b1, U);
                add_row(ru, star, kDyy, -b1, U);
                add_row(ru, star, kDx, 1.0, P);
                sys.rhs[ru] = forcing(problem, pt, 1, Component::X);
                add_row(rv, star, kDt, r1, V);
                add_row(rv, star, kDxx, -b1, V);
                add_row(rv, star, kDyy, -b1, V);
                add_row(rv, star, kDy, 1.0, P);
                sys.rhs[rv] = forcing(problem, pt, 1, Component::Y);
                // pressure Poisson row
                add_row(rp, star, kDxx, 1.0, P);
                add_row(rp, star, kDyy, 1.0, P);
                sys.rhs[rp] = forcing_f3(problem, pt);
                break;

            case NodeCategory::Interior2:
                add_row(ru, star, kDt, r2, U);
                add_row(ru, star, kDxx, -b2, U);
                add_row(ru, star, kDyy, -b2, U);
                sys.rhs[ru] = forcing(problem, pt, 2, Component::X);
                add_row(rv, star, kDt, r2, V);
                add_row(rv, star, kDxx, -b2, V);
                add_row(rv, star, kDyy, -b2, V);
                sys.rhs[rv] = forcing(problem, pt, 2, Component::Y);
                break;

            case NodeCategory::Boundary1:
                add(ru, ru, 1.0);
                sys.rhs[ru] = exact.u(pt.x, pt.y, pt.t, 1).v;
                add(rv, rv, 1.0);
                sys.rhs[rv] = exact.v(pt.x, pt.y, pt.t, 1).v;
                // div u + p = p, realized through the stencil gradient rows
                add_row(rp, star, kDx, 1.0, U);
                add_row(rp, star, kDy, 1.0, V);
                add(rp, rp, 1.0);
                sys.rhs[rp] = exact.p(pt.x, pt.y, pt.t).v;
                break;

            case NodeCategory::Boundary2:
                add(ru, ru, 1.0);
                sys.rhs[ru] = exact.u(pt.x, pt.y, pt.t, 2).v;
                add(rv, rv, 1.0);
                sys.rhs[rv] = exact.v(pt.x, pt.y, pt.t, 2).v;
                break;

            case NodeCategory::Initial1:
                add(ru, ru, 1.0);
                sys.rhs[ru] = exact.u(pt.x, pt.y, pt.t, 1).v;
                add(rv, rv, 1.0);
                sys.rhs[rv] = exact.v(pt.x, pt.y, pt.t, 1).v;
                add(rp, rp, 1.0);
                sys.rhs[rp] = exact.p(pt.x, pt.y, pt.t).v;
                break;

            case NodeCategory::Initial2:
                add(ru, ru, 1.0);
                sys.rhs[ru] = exact.u(pt.x, pt.y, pt.t, 2).v;
                add(rv, rv, 1.0);
                sys.rhs[rv] = exact.v(pt.x, pt.y, pt.t, 2).v;
                break;

            case NodeCategory::Interface1: {
                // velocity continuity across the pair; pressure pinned on Gamma
                const int q = node.partner;
                if (q < 0) throw InconsistentNormal("assemble: unpaired interface node");
                add(ru, ru, 1.0);
                add(ru, map.u_col(q), -1.0);
                sys.rhs[ru] = exact.u(pt.x, pt.y, pt.t, 1).v - exact.u(pt.x, pt.y, pt.t, 2).v;
                add(rv, rv, 1.0);
                add(rv, map.v_col(q), -1.0);
                sys.rhs[rv] = exact.v(pt.x, pt.y, pt.t, 1).v - exact.v(pt.x, pt.y, pt.t, 2).v;
                add(rp, rp, 1.0);
                sys.rhs[rp] = exact.p(pt.x, pt.y, pt.t).v;
                break;
            }

            case NodeCategory::Interface2: {
                const int q = node.partner;
                if (q < 0 || !node.normal || !cloud.nodes[q].normal)
                    throw InconsistentNormal("assemble: interface node without pair/normal");
                const Vec2 n1 = *cloud.nodes[q].normal;  // side-1 normal
                const Vec2 n2 = *node.normal;
                const Star& star1 = stars[q];
                // rows of (b1 grad(u1) - p1 I) n1 + b2 grad(u2) n2 = tau
                add_row(ru, star1, kDx, b1 * n1.x, U);
                add_row(ru, star1, kDy, b1 * n1.y, U);
                add(ru, map.p_col(q), -n1.x);
                add_row(ru, star, kDx, b2 * n2.x, U);
                add_row(ru, star, kDy, b2 * n2.y, U);
                add_row(rv, star1, kDx, b1 * n1.x, V);
                add_row(rv, star1, kDy, b1 * n1.y, V);
                add(rv, map.p_col(q), -n1.y);
                add_row(rv, star, kDx, b2 * n2.x, V);
                add_row(rv, star, kDy, b2 * n2.y, V);
                const auto tau = traction(problem, pt, n1, n2);
                sys.rhs[ru] = tau[0];
                sys.rhs[rv] = tau[1];
                break;
            }
        }
    }

    if (opts.row_scaling) {
        std::vector<double> row_max(sys.n, 0.0);
        for (const auto& t : sys.triplets)
            row_max[t.row] = std::max(row_max[t.row], std::abs(t.value));
        for (auto& t : sys.triplets)
            if (row_max[t.row] > 0.0) t.value /= row_max[t.row];
        for (int r = 0; r < sys.n; ++r)
            if (row_max[r] > 0.0) sys.rhs[r] /= row_max[r];
    }

    return sys;
}

std::vector<double> residual(const SparseSystem& system, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != system.n)
        throw LengthMismatch("residual: vector length does not match system size");
    std::vector<double> r(system.n);
    for (int i = 0; i < system.n; ++i) r[i] = -system.rhs[i];
    for (const auto& t : system.triplets) r[t.row] += t.value * x[t.col];
    return r;
}

void dump_system(const SparseSystem& system, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << system.n << " " << system.n << " " << system.triplets.size() << "\n";
    char buf[96];
    for (const auto& t : system.triplets) {
        std::snprintf(buf, sizeof(buf), "%d %d %.16e\n", t.row + 1, t.col + 1, t.value);
        out << buf;
    }
}

}  // namespace stgfdm
