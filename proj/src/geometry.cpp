#include "stgfdm/geometry.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>
#include <ostream>

namespace stgfdm {

namespace {

constexpr double kGammaTol = 1e-12;

// First-order in-slice distance estimate to the interface curve.
double interface_distance(const LevelSetInterface& interface, double x, double y, double t) {
    const double f = interface.phi(x, y, t);
    const Vec2 g = interface.grad_phi(x, y, t);
    const double gn = std::hypot(g.x, g.y);
    if (gn < 1e-12) return std::abs(f) > 0 ? 1e300 : 0.0;
    return std::abs(f) / gn;
}

}  // namespace

void SpaceTimeDomain::validate() const {
    if (!(spacing > 0.0) || !(dt > 0.0))
        throw ConfigError("SpaceTimeDomain: spacing and dt must be positive");
    if (!(x_max > x_min) || !(y_max > y_min) || !(t_max > 0.0))
        throw ConfigError("SpaceTimeDomain: empty box");
}

int side_of(NodeCategory c) {
    switch (c) {
        case NodeCategory::Interior1:
        case NodeCategory::Boundary1:
        case NodeCategory::Initial1:
        case NodeCategory::Interface1:
            return 1;
        default:
            return 2;
    }
}

std::string_view category_name(NodeCategory c) {
    switch (c) {
        case NodeCategory::Interior1: return "Interior1";
        case NodeCategory::Interior2: return "Interior2";
        case NodeCategory::Boundary1: return "Boundary1";
        case NodeCategory::Boundary2: return "Boundary2";
        case NodeCategory::Initial1: return "Initial1";
        case NodeCategory::Initial2: return "Initial2";
        case NodeCategory::Interface1: return "Interface1";
        case NodeCategory::Interface2: return "Interface2";
    }
    return "?";
}

int PointCloud::side_count(int side) const {
    int n = 0;
    for (int i = 0; i < kCategoryCount; ++i)
        if (side_of(static_cast<NodeCategory>(i)) == side) n += counts[i];
    return n;
}

Subdomain classify_point(const Point3& p, const LevelSetInterface& interface) {
    const double f = interface.phi(p.x, p.y, p.t);
    if (std::abs(f) <= kGammaTol) return Subdomain::Gamma;
    return f > 0.0 ? Subdomain::Omega1 : Subdomain::Omega2;
}

Vec2 interface_normal(const Point3& p, const LevelSetInterface& interface, int side) {
    const Vec2 g = interface.grad_phi(p.x, p.y, p.t);
    const double gn = std::hypot(g.x, g.y);
    if (gn < 1e-12)
        throw DegenerateGradient("interface_normal: |grad phi| < 1e-12");
    // phi increases away from the hole; n1 points out of Omega1, into the hole.
    const double s = (side == 1) ? -1.0 : 1.0;
    return {s * g.x / gn, s * g.y / gn};
}

PointCloud generate_cloud(const SpaceTimeDomain& domain, const LevelSetInterface& interface,
                          const RefinementPolicy& refine) {
    domain.validate();

    const double h = domain.spacing;
    const int nx = static_cast<int>(std::llround((domain.x_max - domain.x_min) / h));
    const int ny = static_cast<int>(std::llround((domain.y_max - domain.y_min) / h));
    const int nt = static_cast<int>(std::llround(domain.t_max / domain.dt));
    if (nx < 2 || ny < 2 || nt < 1)
        throw ConfigError("generate_cloud: degenerate grid");

    PointCloud cloud;
    cloud.base_spacing = h;
    cloud.dt = domain.dt;

    auto push = [&](Point3 pos, NodeCategory cat, double local_h,
                    std::optional<Vec2> normal = std::nullopt, int partner = -1) {
        SpaceTimeNode n;
        n.pos = pos;
        n.category = cat;
        n.normal = normal;
        n.partner = partner;
        n.index = cloud.size();
        cloud.nodes.push_back(n);
        cloud.spacing.push_back(local_h);
        ++cloud.counts[static_cast<int>(cat)];
        return n.index;
    };

    // Hole geometry at a time level (polar form). radius <= 0 means no curve.
    struct HoleShape {
        bool has_curve = false;
        Vec2 c{};
        double r_max = 0.0, perimeter = 0.0;
    };
    auto probe_hole = [&](double t) {
        HoleShape s;
        s.c = interface.center(t);
        const int n_theta_probe = 720;
        double r_prev = interface.radius(0.0, t);
        if (!(r_prev > 0.0)) return s;
        s.has_curve = true;
        for (int i = 1; i <= n_theta_probe; ++i) {
            const double th = 2.0 * std::numbers::pi * i / n_theta_probe;
            const double r = interface.radius(th, t);
            if (!(r > 0.0)) { s.has_curve = false; return s; }
            const double dth = 2.0 * std::numbers::pi / n_theta_probe;
            const double dr = (r - r_prev) / dth;
            s.perimeter += std::sqrt(r * r + dr * dr) * dth;
            s.r_max = std::max(s.r_max, r);
            r_prev = r;
        }
        return s;
    };

    auto hole_interior = [&](const HoleShape& s, double t, double h2) {
        std::vector<Point3> nodes;
        const int i0 = static_cast<int>(std::floor((s.c.x - s.r_max - domain.x_min) / h2)) - 1;
        const int i1 = static_cast<int>(std::ceil((s.c.x + s.r_max - domain.x_min) / h2)) + 1;
        const int j0 = static_cast<int>(std::floor((s.c.y - s.r_max - domain.y_min) / h2)) - 1;
        const int j1 = static_cast<int>(std::ceil((s.c.y + s.r_max - domain.y_min) / h2)) + 1;
        for (int i = i0; i <= i1; ++i) {
            for (int j = j0; j <= j1; ++j) {
                const double x = domain.x_min + i * h2;
                const double y = domain.y_min + j * h2;
                if (x <= domain.x_min || x >= domain.x_max || y <= domain.y_min ||
                    y >= domain.y_max)
                    continue;
                if (interface.phi(x, y, t) >= 0.0) continue;
                if (interface_distance(interface, x, y, t) < refine.cull_factor * h2) continue;
                nodes.push_back({x, y, t});
            }
        }
        return nodes;
    };

    // The hole can be too small to feed the stencils; densify it in x, y and
    // t together (halving keeps the local cloud isotropic) until each slice
    // holds min_nodes. One global depth, sized on the stingiest slice.
    int depth = 0;
    for (; depth < refine.max_depth; ++depth) {
        const double h2 = h / static_cast<double>(1 << depth);
        int worst = INT_MAX;
        for (int k = 0; k <= nt; ++k) {
            const double t = (k == nt) ? domain.t_max : k * domain.dt;
            const HoleShape s = probe_hole(t);
            if (!s.has_curve) continue;
            worst = std::min(worst, static_cast<int>(hole_interior(s, t, h2).size()));
        }
        if (worst == INT_MAX || worst >= refine.min_nodes) break;
    }
    const double h2 = h / static_cast<double>(1 << depth);
    // Keep the hole cloud isotropic: subdivide each time step so the local
    // pitch in t matches the local pitch in x and y.
    const int ft = std::max(1, static_cast<int>(std::llround(domain.dt / h2)));
    const double dt2 = domain.dt / ft;
    const int nt2 = nt * ft;
    for (int kk = 0; kk <= nt2; ++kk) {
        const double t = (kk == nt2) ? domain.t_max : kk * dt2;
        const HoleShape s = probe_hole(t);
        if (!s.has_curve) continue;
        for (const Point3& p : hole_interior(s, t, h2))
            push(p, (kk == 0) ? NodeCategory::Initial2 : NodeCategory::Interior2, h2);

        // Interface ring, duplicated into side-1/side-2 pairs. Sampled on
        // the refined time grid so densified hole stars still see the
        // interface between the base slices.
        const double pitch = std::min(h, h2);
        const int n_ring = std::max(8, static_cast<int>(std::ceil(s.perimeter / pitch)));
        const int stride = std::max(1, static_cast<int>(std::llround(h / pitch)));
        // Side-1 pool keeps a coarse subset of the ring at roughly pitch h in
        // both theta and t, so coarse side-1 stars near the interface stay
        // isotropic instead of seeing ring samples only every dt.
        const bool pool_slice = (kk % stride == 0) || kk == nt2;
        for (int i = 0; i < n_ring; ++i) {
            const double th = 2.0 * std::numbers::pi * i / n_ring;
            const double r = interface.radius(th, t);
            const Point3 p{s.c.x + r * std::cos(th), s.c.y + r * std::sin(th), t};
            if (p.x <= domain.x_min || p.x >= domain.x_max || p.y <= domain.y_min ||
                p.y >= domain.y_max)
                throw InterfaceSamplingFailed(
                    "generate_cloud: interface touches the outer boundary");
            const double scale = std::max(1.0, r);
            if (std::abs(interface.phi(p.x, p.y, p.t)) > 1e-9 * scale)
                throw InterfaceSamplingFailed(
                    "generate_cloud: polar sample is not on phi = 0");
            const Vec2 n1 = interface_normal(p, interface, 1);
            const int i1 = push(p, NodeCategory::Interface1, pitch, n1);
            const int i2 = push(p, NodeCategory::Interface2, pitch, Vec2{-n1.x, -n1.y}, i1);
            cloud.nodes[i1].partner = i2;
            cloud.nodes[i1].pool = pool_slice && (i % stride == 0);
        }
    }

    for (int k = 0; k <= nt; ++k) {
        const double t = (k == nt) ? domain.t_max : k * domain.dt;
        const bool has_curve = probe_hole(t).has_curve;

        // Tensor grid: Omega1 interior plus boundary/initial faces of both sides.
        for (int i = 0; i <= nx; ++i) {
            for (int j = 0; j <= ny; ++j) {
                const double x = domain.x_min + i * h;
                const double y = domain.y_min + j * h;
                const bool on_face = (i == 0 || i == nx || j == 0 || j == ny);
                const double f = interface.phi(x, y, t);
                if (f < 0.0 && !on_face && k > 0) continue;  // hole interior comes from hole_nodes
                if (f < 0.0 && !on_face && k == 0) continue; // likewise at t = 0
                if (has_curve &&
                    interface_distance(interface, x, y, t) < refine.cull_factor * h)
                    continue;
                NodeCategory cat;
                if (k == 0)
                    cat = (f > 0.0) ? NodeCategory::Initial1 : NodeCategory::Initial2;
                else if (on_face)
                    cat = (f > 0.0) ? NodeCategory::Boundary1 : NodeCategory::Boundary2;
                else
                    cat = NodeCategory::Interior1;
                push({x, y, t}, cat, h);
            }
        }

    }

    for (int side : {1, 2}) {
        if (cloud.side_count(side) < refine.min_side_nodes)
            throw EmptySubdomain("generate_cloud: subdomain " + std::to_string(side) +
                                 " has only " + std::to_string(cloud.side_count(side)) +
                                 " nodes");
    }
    return cloud;
}

void dump_cloud(const PointCloud& cloud, std::ostream& out) {
    out << "index,x,y,t,category,nx,ny\n";
    char buf[160];
    for (const auto& n : cloud.nodes) {
        if (n.normal) {
            std::snprintf(buf, sizeof(buf), "%d,%.9e,%.9e,%.9e,%s,%.9e,%.9e\n", n.index,
                          n.pos.x, n.pos.y, n.pos.t,
                          std::string(category_name(n.category)).c_str(), n.normal->x,
                          n.normal->y);
        } else {
            std::snprintf(buf, sizeof(buf), "%d,%.9e,%.9e,%.9e,%s,,\n", n.index, n.pos.x,
                          n.pos.y, n.pos.t, std::string(category_name(n.category)).c_str());
        }
        out << buf;
    }
}

}  // namespace stgfdm
