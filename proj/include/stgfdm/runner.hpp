#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "stgfdm/postprocess.hpp"
#include "stgfdm/solver.hpp"

namespace stgfdm {

struct RunConfig {
    int example = 1;
    int nx = 16;       // spatial divisions of the box
    double dt = 0.0;   // 0 = example default
    int m = 60;
    double t_report = 0.5;
    bool norm_slab = false;  // report norms on the t_report slab instead of all nodes
    std::optional<double> ratio;
    std::optional<double> beta1, beta2, rho1, rho2;
    SolverOptions solver;
    RefinementPolicy refine;
    AssemblyOptions assembly;
    std::string out_dir;
    bool dump_cloud = false, dump_stars = false, dump_system = false, dump_vtk = false;
    int jobs = 0;  // sweep parallelism; 0 = hardware concurrency

    void validate() const;
};

/// Everything a run produces, for callers that want more than the report.
struct RunArtifacts {
    ProblemSpec problem;
    PointCloud cloud;
    std::vector<Star> stars;
    NodalFields fields;
    SolveReport solve;
    ErrorReport report;
};

ProblemSpec make_problem(const RunConfig& config);

RunArtifacts run_full(const RunConfig& config);

/// Pipeline: cloud -> stars -> assemble -> solve -> norms; writes artifacts
/// into config.out_dir when set.
ErrorReport run(const RunConfig& config);

enum class SweepAxis { M, Ratio, Nx };

struct SweepResult {
    std::vector<ErrorReport> reports;           // successful runs, in value order
    std::vector<std::string> failures;          // "value: error" strings
    std::vector<std::array<double, 3>> orders;  // nx axis: H1 orders for u, v, p
};

SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values);

}  // namespace stgfdm
