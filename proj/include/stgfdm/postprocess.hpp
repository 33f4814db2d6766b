#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stgfdm/assembly.hpp"

namespace stgfdm {

enum class FieldId { U, V, P };
enum class NormMode { AllNodes, TimeSlab };
enum class SideFilter { All, Side1, Side2 };

struct FieldErrors {
    double linf = 0, l2 = 0, h1 = 0;
    double linf_rel = 0, l2_rel = 0, h1_rel = 0;
};

struct ErrorReport {
    FieldErrors u, v, p;
    int n_total = 0;
    double wall_time = 0;
    // metadata
    int example = 0;
    int m = 0;
    double ratio = 0;  // 0 when not overridden
    double spacing = 0, dt = 0;
    NormMode mode = NormMode::AllNodes;
    double t_report = 0;
};

/// Nodal solution split back into per-node fields (p is NaN on side 2).
struct NodalFields {
    std::vector<double> u, v, p;
};

NodalFields split_solution(const PointCloud& cloud, const UnknownMap& map,
                           const std::vector<double>& x);

struct NormOptions {
    NormMode mode = NormMode::AllNodes;
    double t_report = 0.5;  // slab center, used by TimeSlab
    SideFilter side = SideFilter::All;
};

/// Linf / L2 / H1 norms of the nodal error against the exact solution. The
/// numerical spatial gradient comes from each node's stencil; the exact
/// gradient is analytic.
FieldErrors error_norms(const PointCloud& cloud, const std::vector<Star>& stars,
                        const NodalFields& numerical, const ProblemSpec& problem,
                        FieldId field, const NormOptions& opts = {});

double convergence_order(double e_coarse, double e_fine);

/// errors.csv: header + one row per report.
void emit_errors_csv(const std::vector<ErrorReport>& reports, std::ostream& out);

/// field.csv: per-node numerical/exact values and absolute errors.
void emit_field_csv(const PointCloud& cloud, const NodalFields& numerical,
                    const ProblemSpec& problem, std::ostream& out);

/// Legacy-VTK unstructured points with u, v, p and error scalars.
void emit_vtk(const PointCloud& cloud, const NodalFields& numerical,
              const ProblemSpec& problem, std::ostream& out);

}  // namespace stgfdm
