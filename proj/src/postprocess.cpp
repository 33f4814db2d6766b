#include "stgfdm/postprocess.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "stgfdm/errors.hpp"

namespace stgfdm {

namespace {

const char* kErrorsHeader =
    "example,N_T,m,ratio,"
    "Linf_u,L2_u,H1_u,Linf_rel_u,L2_rel_u,H1_rel_u,"
    "Linf_v,L2_v,H1_v,Linf_rel_v,L2_rel_v,H1_rel_v,"
    "Linf_p,L2_p,H1_p,Linf_rel_p,L2_rel_p,H1_rel_p,"
    "wall_time\n";

double safe_div(double a, double b) { return b > 0.0 ? a / b : 0.0; }

}  // namespace

NodalFields split_solution(const PointCloud& cloud, const UnknownMap& map,
                           const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != map.cols())
        throw LengthMismatch("split_solution: solution length mismatch");
    NodalFields f;
    const int n = cloud.size();
    f.u.resize(n);
    f.v.resize(n);
    f.p.assign(n, std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < n; ++i) {
        f.u[i] = x[map.u_col(i)];
        f.v[i] = x[map.v_col(i)];
        if (map.p_col(i) >= 0) f.p[i] = x[map.p_col(i)];
    }
    return f;
}

FieldErrors error_norms(const PointCloud& cloud, const std::vector<Star>& stars,
                        const NodalFields& numerical, const ProblemSpec& problem,
                        FieldId field, const NormOptions& opts) {
    const std::vector<double>* values = nullptr;
    switch (field) {
        case FieldId::U: values = &numerical.u; break;
        case FieldId::V: values = &numerical.v; break;
        case FieldId::P: values = &numerical.p; break;
    }
    if (static_cast<int>(values->size()) != cloud.size())
        throw MissingValues("error_norms: values not defined on all nodes");

    const double half_slab = 0.5 * cloud.dt;
    auto in_scope = [&](const SpaceTimeNode& node) {
        if (field == FieldId::P && side_of(node.category) != 1) return false;
        if (opts.side == SideFilter::Side1 && side_of(node.category) != 1) return false;
        if (opts.side == SideFilter::Side2 && side_of(node.category) != 2) return false;
        if (opts.mode == NormMode::TimeSlab &&
            std::abs(node.pos.t - opts.t_report) > half_slab)
            return false;
        return true;
    };

    double linf = 0, l2 = 0, h1 = 0;
    double linf_ex = 0, l2_ex = 0, h1_ex = 0;
    long count = 0;
    for (const auto& node : cloud.nodes) {
        if (!in_scope(node)) continue;
        const int i = node.index;
        const int side = side_of(node.category);
        double ex, ex_dx, ex_dy;
        switch (field) {
            case FieldId::U: {
                const auto e = problem.exact.u(node.pos.x, node.pos.y, node.pos.t, side);
                ex = e.v, ex_dx = e.dx, ex_dy = e.dy;
                break;
            }
            case FieldId::V: {
                const auto e = problem.exact.v(node.pos.x, node.pos.y, node.pos.t, side);
                ex = e.v, ex_dx = e.dx, ex_dy = e.dy;
                break;
            }
            default: {
                const auto e = problem.exact.p(node.pos.x, node.pos.y, node.pos.t);
                ex = e.v, ex_dx = e.dx, ex_dy = e.dy;
                break;
            }
        }
        const double err = (*values)[i] - ex;
        linf = std::max(linf, std::abs(err));
        linf_ex = std::max(linf_ex, std::abs(ex));
        l2 += err * err;
        l2_ex += ex * ex;
        auto val = [&](int j) { return (*values)[j]; };
        const double gx = apply_row(stars[i], kDx, val);
        const double gy = apply_row(stars[i], kDy, val);
        h1 += (gx - ex_dx) * (gx - ex_dx) + (gy - ex_dy) * (gy - ex_dy);
        h1_ex += ex_dx * ex_dx + ex_dy * ex_dy;
        ++count;
    }
    if (count == 0) throw MissingValues("error_norms: no nodes in scope");

    FieldErrors out;
    out.linf = linf;
    out.l2 = std::sqrt(l2 / count);
    out.h1 = std::sqrt(h1 / count);
    out.linf_rel = safe_div(linf, linf_ex);
    out.l2_rel = safe_div(out.l2, std::sqrt(l2_ex / count));
    out.h1_rel = safe_div(out.h1, std::sqrt(h1_ex / count));
    return out;
}

double convergence_order(double e_coarse, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0))
        throw NonPositiveError("convergence_order: errors must be positive");
    return std::log(e_coarse / e_fine) / std::log(2.0);
}

void emit_errors_csv(const std::vector<ErrorReport>& reports, std::ostream& out) {
    out << kErrorsHeader;
    char buf[700];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%d,%.6e,"
                      "%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,"
                      "%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,"
                      "%.6e,%.6e,%.6e,%.6e,%.6e,%.6e,"
                      "%.3f\n",
                      r.example, r.n_total, r.m, r.ratio, r.u.linf, r.u.l2, r.u.h1,
                      r.u.linf_rel, r.u.l2_rel, r.u.h1_rel, r.v.linf, r.v.l2, r.v.h1,
                      r.v.linf_rel, r.v.l2_rel, r.v.h1_rel, r.p.linf, r.p.l2, r.p.h1,
                      r.p.linf_rel, r.p.l2_rel, r.p.h1_rel, r.wall_time);
        out << buf;
    }
}

void emit_field_csv(const PointCloud& cloud, const NodalFields& numerical,
                    const ProblemSpec& problem, std::ostream& out) {
    out << "index,x,y,t,category,u_num,v_num,p_num,u_exact,v_exact,p_exact,"
           "abs_err_u,abs_err_v,abs_err_p\n";
    char buf[512];
    for (const auto& node : cloud.nodes) {
        const int i = node.index;
        const int side = side_of(node.category);
        const double ue = problem.exact.u(node.pos.x, node.pos.y, node.pos.t, side).v;
        const double ve = problem.exact.v(node.pos.x, node.pos.y, node.pos.t, side).v;
        if (side == 1) {
            const double pe = problem.exact.p(node.pos.x, node.pos.y, node.pos.t).v;
            std::snprintf(buf, sizeof(buf),
                          "%d,%.9e,%.9e,%.9e,%s,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n",
                          i, node.pos.x, node.pos.y, node.pos.t,
                          std::string(category_name(node.category)).c_str(), numerical.u[i],
                          numerical.v[i], numerical.p[i], ue, ve, pe,
                          std::abs(numerical.u[i] - ue), std::abs(numerical.v[i] - ve),
                          std::abs(numerical.p[i] - pe));
        } else {
            std::snprintf(buf, sizeof(buf),
                          "%d,%.9e,%.9e,%.9e,%s,%.9e,%.9e,,%.9e,%.9e,,%.9e,%.9e,\n", i,
                          node.pos.x, node.pos.y, node.pos.t,
                          std::string(category_name(node.category)).c_str(), numerical.u[i],
                          numerical.v[i], ue, ve, std::abs(numerical.u[i] - ue),
                          std::abs(numerical.v[i] - ve));
        }
        out << buf;
    }
}

void emit_vtk(const PointCloud& cloud, const NodalFields& numerical,
              const ProblemSpec& problem, std::ostream& out) {
    const int n = cloud.size();
    out << "# vtk DataFile Version 3.0\nstgfdm fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << n << " double\n";
    char buf[160];
    for (const auto& node : cloud.nodes) {
        std::snprintf(buf, sizeof(buf), "%.9e %.9e %.9e\n", node.pos.x, node.pos.y,
                      node.pos.t);
        out << buf;
    }
    out << "CELLS " << n << " " << 2 * n << "\n";
    for (int i = 0; i < n; ++i) out << "1 " << i << "\n";
    out << "CELL_TYPES " << n << "\n";
    for (int i = 0; i < n; ++i) out << "1\n";
    out << "POINT_DATA " << n << "\n";
    auto scalars = [&](const char* name, auto&& fn) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (const auto& node : cloud.nodes) {
            std::snprintf(buf, sizeof(buf), "%.9e\n", fn(node));
            out << buf;
        }
    };
    scalars("u", [&](const SpaceTimeNode& nd) { return numerical.u[nd.index]; });
    scalars("v", [&](const SpaceTimeNode& nd) { return numerical.v[nd.index]; });
    scalars("p", [&](const SpaceTimeNode& nd) {
        return std::isnan(numerical.p[nd.index]) ? 0.0 : numerical.p[nd.index];
    });
    scalars("err_u", [&](const SpaceTimeNode& nd) {
        const int side = side_of(nd.category);
        return std::abs(numerical.u[nd.index] -
                        problem.exact.u(nd.pos.x, nd.pos.y, nd.pos.t, side).v);
    });
}

}  // namespace stgfdm
