#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stgfdm/errors.hpp"

namespace stgfdm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

/// Closed space-time box with uniform spatial pitch and time pitch.
struct SpaceTimeDomain {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    double t_max = 1.0;
    double spacing = 1.0 / 16.0;  // grid pitch in x and y
    double dt = 0.1;

    void validate() const;
};

/// Moving interface given both as a level set (phi < 0 inside the hole)
/// and as a star-shaped polar curve rho = radius(theta, t) about center(t).
/// The polar form is used to place interface nodes exactly on phi = 0.
struct LevelSetInterface {
    std::function<double(double, double, double)> phi;
    std::function<Vec2(double, double, double)> grad_phi;  // spatial gradient
    std::function<Vec2(double)> center;
    std::function<double(double, double)> radius;  // R(theta, t); <= 0 means no curve
};

enum class NodeCategory : std::uint8_t {
    Interior1,
    Interior2,
    Boundary1,
    Boundary2,
    Initial1,
    Initial2,
    Interface1,
    Interface2,
};

constexpr int kCategoryCount = 8;

/// 1 for the outer (fluid) subdomain, 2 for the hole (structure).
int side_of(NodeCategory c);
std::string_view category_name(NodeCategory c);

struct SpaceTimeNode {
    Point3 pos;
    NodeCategory category = NodeCategory::Interior1;
    std::optional<Vec2> normal;  // unit normal, interface nodes only
    int index = -1;
    int partner = -1;  // coincident node on the other side, interface only
    // Usable as a stencil neighbor. Densified interface samples are kept out
    // of the coarse side's stars so they cannot swamp the local fits there.
    bool pool = true;
};

struct PointCloud {
    std::vector<SpaceTimeNode> nodes;
    std::array<int, kCategoryCount> counts{};
    std::vector<double> spacing;  // local spacing per node
    double base_spacing = 0.0;
    double dt = 0.0;

    int count(NodeCategory c) const { return counts[static_cast<int>(c)]; }
    int side_count(int side) const;
    int size() const { return static_cast<int>(nodes.size()); }
};

struct RefinementPolicy {
    int min_nodes = 0;        // per-slice interior node target inside the hole; 0 = off
    double cull_factor = 0.4; // grid nodes closer than cull_factor*spacing to the interface are dropped
    int max_depth = 4;
    int min_side_nodes = 61;  // EmptySubdomain threshold (m + 1)
};

enum class Subdomain { Omega1, Omega2, Gamma };

Subdomain classify_point(const Point3& p, const LevelSetInterface& interface);

/// Unit normal at an interface point; side 1 points out of Omega1 (toward phi < 0).
Vec2 interface_normal(const Point3& p, const LevelSetInterface& interface, int side);

PointCloud generate_cloud(const SpaceTimeDomain& domain, const LevelSetInterface& interface,
                          const RefinementPolicy& refine = {});

/// CSV export: index,x,y,t,category,nx,ny
void dump_cloud(const PointCloud& cloud, std::ostream& out);

}  // namespace stgfdm
