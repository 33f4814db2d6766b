#pragma once

#include <vector>

#include "stgfdm/assembly.hpp"

namespace stgfdm {

enum class SolveMethod { Auto, DirectLU, GMRES };

struct SolverOptions {
    SolveMethod method = SolveMethod::Auto;
    double tol = 1e-10;
    int max_iters = 10000;
    int restart = 100;
    int direct_limit = 25000;  // Auto: direct LU up to this many unknowns
    int ilut_fill = 60;
    double ilut_drop = 1e-6;
};

struct SolveReport {
    std::vector<double> solution;
    double relative_residual = 0.0;
    int iterations = 0;  // 0 for direct
    double wall_time = 0.0;
    SolveMethod method = SolveMethod::DirectLU;
};

SolveReport solve(const SparseSystem& system, const SolverOptions& opts = {});

}  // namespace stgfdm
