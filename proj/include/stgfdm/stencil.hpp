#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "stgfdm/geometry.hpp"

namespace stgfdm {

/// Row indices of the stencil matrix E.
enum DerivRow : int {
    kDx = 0,
    kDy = 1,
    kDt = 2,
    kDxx = 3,
    kDyy = 4,
    kDtt = 5,
    kDxy = 6,
    kDxt = 7,
    kDyt = 8,
};

constexpr int kDerivRows = 9;

/// A center node, its m nearest same-side neighbors, and the 9 x (m+1)
/// derivative-weight matrix. Column 0 acts on the center value.
struct Star {
    int center = -1;
    std::vector<int> neighbors;
    std::vector<Point3> offsets;  // (h, l, r) per neighbor
    std::vector<double> weights;
    Eigen::Matrix<double, kDerivRows, Eigen::Dynamic> E;

    int m() const { return static_cast<int>(neighbors.size()); }
};

/// Quartic spline kernel; 1 at the center, 0 at and beyond d_m.
double weight(double d_k, double d_m);

/// Uniform-grid hash over (x, y, t) for same-side nearest-neighbor queries.
class NeighborSearch {
  public:
    NeighborSearch(const PointCloud& cloud, double cell_size);

    /// m nearest eligible nodes (same side as the center, center excluded),
    /// ties broken by lower index.
    std::vector<int> nearest(int center, int m) const;

    /// Stencil-eligible nodes on a side (1 or 2).
    int pool_count(int side) const { return pool_count_[side - 1]; }

    /// All nodes on a side; interface-centered stars may use all of them.
    int total_count(int side) const { return total_count_[side - 1]; }

  private:
    int pool_count_[2] = {0, 0};
    int total_count_[2] = {0, 0};
    struct Key { long long x, y, t; };
    const PointCloud& cloud_;
    double cell_;
    std::unordered_map<long long, std::vector<int>> cells_[2];  // per side
    long long key_of(double x, double y, double t) const;
};

Star select_star(const PointCloud& cloud, const NeighborSearch& search, int center, int m);

/// Fills star.E from the weighted normal equations of the quadratic
/// space-time Taylor fit.
void build_stencil(Star& star);

double apply_row(const Star& star, DerivRow row,
                 const std::function<double(int)>& values);

std::vector<Star> build_all_stars(const PointCloud& cloud, int m);

/// CSV export: center,neighbor,h,l,r,omega
void dump_stars(const std::vector<Star>& stars, std::ostream& out);

}  // namespace stgfdm
