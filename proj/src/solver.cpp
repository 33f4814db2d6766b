#include "stgfdm/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cstdint>
#include <chrono>
#include <cmath>
#include <unsupported/Eigen/IterativeSolvers>

#include "stgfdm/errors.hpp"

namespace stgfdm {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat to_eigen(const SparseSystem& sys) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(sys.triplets.size());
    for (const auto& t : sys.triplets) trips.emplace_back(t.row, t.col, t.value);
    SpMat K(sys.n, sys.n);
    K.setFromTriplets(trips.begin(), trips.end());
    K.makeCompressed();
    return K;
}

}  // namespace

SolveReport solve(const SparseSystem& system, const SolverOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpMat K = to_eigen(system);
    const Eigen::VectorXd F =
        Eigen::Map<const Eigen::VectorXd>(system.rhs.data(), system.n);

    SolveMethod method = opts.method;
    if (method == SolveMethod::Auto)
        method = (system.n <= opts.direct_limit) ? SolveMethod::DirectLU : SolveMethod::GMRES;

    SolveReport report;
    Eigen::VectorXd x;

    if (method == SolveMethod::DirectLU) {
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(K);
        lu.factorize(K);
        if (lu.info() != Eigen::Success)
            throw SingularSystem("solve: sparse LU factorization failed");
        x = lu.solve(F);
        report.method = SolveMethod::DirectLU;
        report.iterations = 0;
    } else {
        // ILUT memory is roughly n * avg_row_nnz * fill * 12 bytes; cap the
        // fill factor so large systems stay within a ~2.5 GB budget.
        const double avg_nnz =
            static_cast<double>(K.nonZeros()) / std::max<std::int64_t>(system.n, 1);
        const double budget = 2.5e9 / (static_cast<double>(system.n) * avg_nnz * 12.0);
        const int fill = std::max(10, std::min(opts.ilut_fill, static_cast<int>(budget)));
        Eigen::GMRES<SpMat, Eigen::IncompleteLUT<double>> gmres;
        gmres.preconditioner().setFillfactor(fill);
        gmres.preconditioner().setDroptol(opts.ilut_drop);
        gmres.setTolerance(opts.tol);
        gmres.setMaxIterations(opts.max_iters);
        gmres.set_restart(opts.restart);
        gmres.compute(K);
        if (gmres.info() != Eigen::Success)
            throw SingularSystem("solve: ILUT preconditioner setup failed");
        x = gmres.solve(F);
        report.method = SolveMethod::GMRES;
        report.iterations = static_cast<int>(gmres.iterations());
        // Eigen can report success after an ILUT breakdown; trust the actual
        // residual, not the status flag.
        const double relres = (K * x - F).norm() / std::max(F.norm(), 1e-300);
        if (gmres.info() != Eigen::Success || !(relres < 100.0 * opts.tol)) {
            // direct factorization of very large systems would exhaust memory
            if (opts.method == SolveMethod::Auto && system.n <= 3 * opts.direct_limit) {
                // last resort: factor directly
                Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
                lu.analyzePattern(K);
                lu.factorize(K);
                if (lu.info() != Eigen::Success)
                    throw SingularSystem("solve: sparse LU factorization failed");
                x = lu.solve(F);
                report.method = SolveMethod::DirectLU;
                report.iterations = 0;
            } else {
                const double res = (K * x - F).norm() / std::max(F.norm(), 1e-300);
                throw NoConvergence("solve: GMRES stalled at relative residual " +
                                    std::to_string(res));
            }
        }
    }

    report.relative_residual = (K * x - F).norm() / std::max(F.norm(), 1e-300);
    report.solution.assign(x.data(), x.data() + system.n);
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace stgfdm
