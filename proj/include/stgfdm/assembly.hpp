#pragma once

#include <iosfwd>
#include <vector>

#include "stgfdm/problems.hpp"
#include "stgfdm/stencil.hpp"

namespace stgfdm {

/// Global column layout for the unknown vector (U; V; P1). Per subdomain the
/// node order is boundary/initial, interface, interior.
class UnknownMap {
  public:
    explicit UnknownMap(const PointCloud& cloud);

    int u_col(int node) const { return u_[node]; }
    int v_col(int node) const { return v_[node]; }
    int p_col(int node) const { return p_[node]; }  // -1 for side-2 nodes
    int cols() const { return cols_; }

  private:
    std::vector<int> u_, v_, p_;
    int cols_ = 0;
};

struct Triplet {
    int row, col;
    double value;
};

struct SparseSystem {
    std::vector<Triplet> triplets;
    std::vector<double> rhs;
    int n = 0;  // square
};

struct AssemblyOptions {
    bool row_scaling = false;  // per-row max-abs equilibration
};

SparseSystem assemble(const PointCloud& cloud, const std::vector<Star>& stars,
                      const ProblemSpec& problem, const UnknownMap& map,
                      const AssemblyOptions& opts = {});

std::vector<double> residual(const SparseSystem& system, const std::vector<double>& x);

/// MatrixMarket coordinate export of K (1-based), followed by no rhs.
void dump_system(const SparseSystem& system, std::ostream& out);

}  // namespace stgfdm
