// stgfdm: space-time meshless benchmark runner.
//
//   stgfdm run   --example 1 --nx 20 --dt 0.1 --m 60 --out results/
//   stgfdm sweep --axis m --values 55,60,63 --example 1 --nx 16 --out sweep/

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "stgfdm/errors.hpp"
#include "stgfdm/runner.hpp"

namespace {

void add_common_options(CLI::App& cmd, stgfdm::RunConfig& cfg, double& beta1, double& beta2,
                        double& rho1, double& rho2, double& ratio) {
    cmd.add_option("--example", cfg.example, "benchmark problem (1..5)");
    cmd.add_option("--nx", cfg.nx, "spatial divisions of the box");
    cmd.add_option("--dt", cfg.dt, "time pitch (0 = example default)");
    cmd.add_option("--m", cfg.m, "stencil neighbor count");
    cmd.add_option("--t-report", cfg.t_report, "report-time slab center");
    cmd.add_flag("--slab", cfg.norm_slab, "norms over the t-report slab only");
    cmd.add_option("--ratio", ratio, "coefficient jump beta1/beta2 = rho1/rho2");
    cmd.add_option("--beta1", beta1, "override beta1");
    cmd.add_option("--beta2", beta2, "override beta2");
    cmd.add_option("--rho1", rho1, "override rho1");
    cmd.add_option("--rho2", rho2, "override rho2");
    cmd.add_option("--out", cfg.out_dir, "output directory")->envname("STGFDM_OUT");
    cmd.add_option("--min-nodes2", cfg.refine.min_nodes,
                   "locally-dense target per slice inside the hole");
    cmd.add_flag("--row-scaling", cfg.assembly.row_scaling, "per-row max-abs equilibration");
    cmd.add_flag("--dump-cloud", cfg.dump_cloud, "write cloud.csv");
    cmd.add_flag("--dump-stars", cfg.dump_stars, "write stars.csv");
    cmd.add_flag("--dump-system", cfg.dump_system, "write system.mtx (MatrixMarket)");
    cmd.add_flag("--dump-vtk", cfg.dump_vtk, "write field.vtk");
    cmd.add_option("--jobs", cfg.jobs, "sweep worker count (0 = cores)");

    static const std::map<std::string, stgfdm::SolveMethod> methods{
        {"auto", stgfdm::SolveMethod::Auto},
        {"lu", stgfdm::SolveMethod::DirectLU},
        {"gmres", stgfdm::SolveMethod::GMRES}};
    cmd.add_option("--solver.method", cfg.solver.method, "auto|lu|gmres")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
    cmd.add_option("--solver.tol", cfg.solver.tol, "iterative relative tolerance");
    cmd.add_option("--solver.max_iters", cfg.solver.max_iters, "iterative budget");

    cmd.set_config("--config")->configurable(false);
}

void apply_overrides(stgfdm::RunConfig& cfg, const CLI::App& cmd, double beta1, double beta2,
                     double rho1, double rho2, double ratio) {
    if (cmd.count("--ratio") > 0) cfg.ratio = ratio;
    if (cmd.count("--beta1") > 0) cfg.beta1 = beta1;
    if (cmd.count("--beta2") > 0) cfg.beta2 = beta2;
    if (cmd.count("--rho1") > 0) cfg.rho1 = rho1;
    if (cmd.count("--rho2") > 0) cfg.rho2 = rho2;
}

void print_report(const stgfdm::ErrorReport& r) {
    std::printf("example %d  N_T %d  m %d  wall %.2fs\n", r.example, r.n_total, r.m,
                r.wall_time);
    auto line = [](const char* name, const stgfdm::FieldErrors& e) {
        std::printf("  %s  Linf %.3e  L2 %.3e  H1 %.3e  (rel %.3e / %.3e / %.3e)\n", name,
                    e.linf, e.l2, e.h1, e.linf_rel, e.l2_rel, e.h1_rel);
    };
    line("u", r.u);
    line("v", r.v);
    line("p", r.p);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"space-time GFDM solver for the Stokes/Parabolic moving-interface problem"};
    app.require_subcommand(1);

    stgfdm::RunConfig cfg;
    double beta1 = 0, beta2 = 0, rho1 = 0, rho2 = 0, ratio = 0;

    CLI::App* cmd_run = app.add_subcommand("run", "single solve");
    add_common_options(*cmd_run, cfg, beta1, beta2, rho1, rho2, ratio);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweep");
    std::string axis = "m";
    std::vector<double> values;
    add_common_options(*cmd_sweep, cfg, beta1, beta2, rho1, rho2, ratio);
    cmd_sweep->add_option("--axis", axis, "m|ratio|nx")
        ->check(CLI::IsMember({"m", "ratio", "nx"}));
    cmd_sweep->add_option("--values", values, "sweep values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) {
            apply_overrides(cfg, *cmd_run, beta1, beta2, rho1, rho2, ratio);
            cfg.validate();
            print_report(stgfdm::run(cfg));
        } else {
            apply_overrides(cfg, *cmd_sweep, beta1, beta2, rho1, rho2, ratio);
            cfg.validate();
            const auto ax = axis == "m"       ? stgfdm::SweepAxis::M
                            : axis == "ratio" ? stgfdm::SweepAxis::Ratio
                                              : stgfdm::SweepAxis::Nx;
            const auto result = stgfdm::sweep(cfg, ax, values);
            for (const auto& r : result.reports) print_report(r);
            for (size_t i = 0; i < result.orders.size(); ++i)
                std::printf("order step %zu: H1 u %.2f  v %.2f  p %.2f\n", i,
                            result.orders[i][0], result.orders[i][1], result.orders[i][2]);
            for (const auto& f : result.failures)
                std::fprintf(stderr, "failed: %s\n", f.c_str());
            if (!result.failures.empty()) return 3;
        }
    } catch (const stgfdm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
