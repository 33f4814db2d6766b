#include "stgfdm/runner.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "stgfdm/errors.hpp"

namespace stgfdm {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (example < 1 || example > 5) throw ConfigError("example must be 1..5");
    if (m < 10) throw ConfigError("m must be at least 10");
    if (nx < 4) throw ConfigError("nx must be at least 4");
    if (dt < 0.0) throw ConfigError("dt must be positive");
    if (ratio && !(*ratio > 0.0)) throw ConfigError("ratio must be positive");
}

ProblemSpec make_problem(const RunConfig& config) {
    ProblemSpec problem = example(config.example);
    if (config.ratio) apply_jump_ratio(problem, *config.ratio);
    if (config.beta1) problem.beta1 = *config.beta1;
    if (config.beta2) problem.beta2 = *config.beta2;
    if (config.rho1) problem.rho1 = *config.rho1;
    if (config.rho2) problem.rho2 = *config.rho2;
    problem.exact.set_beta(problem.beta1, problem.beta2);

    problem.domain.spacing = (problem.domain.x_max - problem.domain.x_min) / config.nx;
    if (config.dt > 0.0) problem.domain.dt = config.dt;
    if (problem.domain.dt > problem.domain.t_max)
        throw ConfigError("dt exceeds the final time");
    return problem;
}

RunArtifacts run_full(const RunConfig& config) {
    config.validate();
    RunArtifacts art;
    art.problem = make_problem(config);

    RefinementPolicy refine = config.refine;
    refine.min_side_nodes = std::max(refine.min_side_nodes, config.m + 1);
    // Hole slices must feed a full stencil on their own side or the traction
    // coupling loses accuracy; densify toward m nodes per slice by default.
    if (refine.min_nodes <= 0) refine.min_nodes = config.m + 1;
    art.cloud = generate_cloud(art.problem.domain, art.problem.interface, refine);

    art.stars = build_all_stars(art.cloud, config.m);

    const auto t0 = std::chrono::steady_clock::now();
    UnknownMap map(art.cloud);
    SparseSystem system = assemble(art.cloud, art.stars, art.problem, map, config.assembly);
    art.solve = solve(system, config.solver);
    const double assembly_solve_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    art.fields = split_solution(art.cloud, map, art.solve.solution);

    NormOptions norms;
    norms.mode = config.norm_slab ? NormMode::TimeSlab : NormMode::AllNodes;
    norms.t_report = config.t_report;
    art.report.u = error_norms(art.cloud, art.stars, art.fields, art.problem, FieldId::U, norms);
    art.report.v = error_norms(art.cloud, art.stars, art.fields, art.problem, FieldId::V, norms);
    art.report.p = error_norms(art.cloud, art.stars, art.fields, art.problem, FieldId::P, norms);
    art.report.n_total = art.cloud.size();
    art.report.wall_time = assembly_solve_time;
    art.report.example = config.example;
    art.report.m = config.m;
    art.report.ratio = config.ratio.value_or(0.0);
    art.report.spacing = art.problem.domain.spacing;
    art.report.dt = art.problem.domain.dt;
    art.report.mode = norms.mode;
    art.report.t_report = config.t_report;

    if (!config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        auto open = [&](const char* name) {
            std::ofstream f(fs::path(config.out_dir) / name);
            if (!f) throw IoError(std::string("cannot write ") + name);
            return f;
        };
        {
            auto f = open("errors.csv");
            emit_errors_csv({art.report}, f);
        }
        {
            auto f = open("field.csv");
            emit_field_csv(art.cloud, art.fields, art.problem, f);
        }
        if (config.dump_cloud) {
            auto f = open("cloud.csv");
            dump_cloud(art.cloud, f);
        }
        if (config.dump_stars) {
            auto f = open("stars.csv");
            dump_stars(art.stars, f);
        }
        if (config.dump_system) {
            auto f = open("system.mtx");
            dump_system(system, f);
        }
        if (config.dump_vtk) {
            auto f = open("field.vtk");
            emit_vtk(art.cloud, art.fields, art.problem, f);
        }
    }
    return art;
}

ErrorReport run(const RunConfig& config) { return run_full(config).report; }

SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: empty value list");

    const int n = static_cast<int>(values.size());
    std::vector<std::optional<ErrorReport>> slots(n);
    std::vector<std::string> failures(n);

    unsigned jobs = base.jobs > 0 ? base.jobs : std::thread::hardware_concurrency();
    jobs = std::max(1u, std::min<unsigned>(jobs, n));

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            RunConfig cfg = base;
            cfg.out_dir.clear();  // combined outputs are written once below
            switch (axis) {
                case SweepAxis::M: cfg.m = static_cast<int>(values[i]); break;
                case SweepAxis::Ratio: cfg.ratio = values[i]; break;
                case SweepAxis::Nx:
                    cfg.nx = static_cast<int>(values[i]);
                    if (base.dt == 0.0 && (base.example <= 3))
                        cfg.dt = 1.0 / cfg.nx;  // refine the time pitch with the grid
                    break;
            }
            try {
                slots[i] = run(cfg);
            } catch (const std::exception& e) {
                failures[i] = std::to_string(values[i]) + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SweepResult result;
    for (int i = 0; i < n; ++i) {
        if (slots[i])
            result.reports.push_back(*slots[i]);
        else if (!failures[i].empty())
            result.failures.push_back(failures[i]);
    }

    if (axis == SweepAxis::Nx) {
        for (size_t i = 1; i < result.reports.size(); ++i) {
            const auto& c = result.reports[i - 1];
            const auto& f = result.reports[i];
            result.orders.push_back({convergence_order(c.u.h1, f.u.h1),
                                     convergence_order(c.v.h1, f.v.h1),
                                     convergence_order(c.p.h1, f.p.h1)});
        }
    }

    if (!base.out_dir.empty() && !result.reports.empty()) {
        fs::create_directories(base.out_dir);
        std::ofstream f(fs::path(base.out_dir) / "errors.csv");
        if (!f) throw IoError("cannot write errors.csv");
        emit_errors_csv(result.reports, f);
        if (!result.orders.empty()) {
            std::ofstream g(fs::path(base.out_dir) / "orders.csv");
            g << "nx_coarse,nx_fine,order_H1_u,order_H1_v,order_H1_p\n";
            for (size_t i = 0; i + 1 < result.reports.size(); ++i) {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "%d,%d,%.4f,%.4f,%.4f\n",
                              static_cast<int>(values[i]), static_cast<int>(values[i + 1]),
                              result.orders[i][0], result.orders[i][1], result.orders[i][2]);
                g << buf;
            }
        }
    }
    return result;
}

}  // namespace stgfdm
