#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stgfdm/postprocess.hpp"
#include "stgfdm/runner.hpp"

using namespace stgfdm;

namespace {

struct Fixture {
    ProblemSpec problem = example(1);
    PointCloud cloud;
    std::vector<Star> stars;
    UnknownMap map;

    Fixture() : cloud(make_cloud()), map(cloud) { stars = build_all_stars(cloud, 40); }

    NodalFields exact_fields() const {
        NodalFields f;
        const int n = cloud.size();
        f.u.resize(n);
        f.v.resize(n);
        f.p.assign(n, std::nan(""));
        for (const auto& node : cloud.nodes) {
            const int s = side_of(node.category);
            const auto& pt = node.pos;
            f.u[node.index] = problem.exact.u(pt.x, pt.y, pt.t, s).v;
            f.v[node.index] = problem.exact.v(pt.x, pt.y, pt.t, s).v;
            if (s == 1) f.p[node.index] = problem.exact.p(pt.x, pt.y, pt.t).v;
        }
        return f;
    }

  private:
    PointCloud make_cloud() const {
        SpaceTimeDomain domain = problem.domain;
        domain.spacing = 1.0 / 10.0;
        domain.dt = 0.2;
        RefinementPolicy refine;
        refine.min_side_nodes = 41;
        refine.min_nodes = 41;
        return generate_cloud(domain, problem.interface, refine);
    }
};

}  // namespace

TEST_CASE("split_solution inverts the unknown map") {
    const Fixture f;
    std::vector<double> x(f.map.cols());
    for (const auto& node : f.cloud.nodes) {
        x[f.map.u_col(node.index)] = 1.0 + node.index;
        x[f.map.v_col(node.index)] = -2.0 - node.index;
        if (side_of(node.category) == 1) x[f.map.p_col(node.index)] = 0.5 * node.index;
    }
    const auto fields = split_solution(f.cloud, f.map, x);
    for (const auto& node : f.cloud.nodes) {
        CHECK(fields.u[node.index] == doctest::Approx(1.0 + node.index));
        CHECK(fields.v[node.index] == doctest::Approx(-2.0 - node.index));
        if (side_of(node.category) == 1)
            CHECK(fields.p[node.index] == doctest::Approx(0.5 * node.index));
        else
            CHECK(std::isnan(fields.p[node.index]));
    }
}

TEST_CASE("exact nodal values give zero Linf and L2 error") {
    const Fixture f;
    const auto fields = f.exact_fields();
    for (FieldId id : {FieldId::U, FieldId::V, FieldId::P}) {
        const auto e = error_norms(f.cloud, f.stars, fields, f.problem, id);
        CHECK(e.linf < 1e-14);
        CHECK(e.l2 < 1e-14);
        CHECK(e.linf_rel < 1e-9);
        // H1 also sees the stencil-gradient truncation error, not zero
        CHECK(e.h1 >= 0.0);
    }
}

TEST_CASE("a known offset shows up verbatim in Linf") {
    const Fixture f;
    auto fields = f.exact_fields();
    fields.u[7] += 1e-3;
    const auto e = error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U);
    CHECK(e.linf == doctest::Approx(1e-3).epsilon(1e-9));
    // L2 is the RMS over nodes, so a single offset is diluted
    CHECK(e.l2 < 1e-3);
    CHECK(e.l2 > 0.0);
}

TEST_CASE("time-slab mode ignores nodes outside the slab") {
    const Fixture f;
    auto fields = f.exact_fields();
    // perturb a node near t = 0 only
    int early = -1;
    for (const auto& node : f.cloud.nodes)
        if (node.pos.t == 0.0 && side_of(node.category) == 1) {
            early = node.index;
            break;
        }
    REQUIRE(early >= 0);
    fields.u[early] += 1.0;
    NormOptions slab;
    slab.mode = NormMode::TimeSlab;
    slab.t_report = 0.6;
    const auto e = error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U, slab);
    CHECK(e.linf < 1e-14);
    const auto all = error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U);
    CHECK(all.linf == doctest::Approx(1.0));
}

TEST_CASE("side filter restricts the norm support") {
    const Fixture f;
    auto fields = f.exact_fields();
    int side2 = -1;
    for (const auto& node : f.cloud.nodes)
        if (node.category == NodeCategory::Interior2) {
            side2 = node.index;
            break;
        }
    REQUIRE(side2 >= 0);
    fields.u[side2] += 1.0;
    NormOptions s1;
    s1.side = SideFilter::Side1;
    CHECK(error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U, s1).linf < 1e-14);
    NormOptions s2;
    s2.side = SideFilter::Side2;
    CHECK(error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U, s2).linf ==
          doctest::Approx(1.0));
}

TEST_CASE("H1 error uses the stencil spatial gradient") {
    const Fixture f;
    auto fields = f.exact_fields();
    const auto base = error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U);
    // H1 of the exact nodal data equals the pure gradient truncation; adding
    // a rough perturbation must increase it
    for (auto& u : fields.u) u += 1e-3 * ((&u - fields.u.data()) % 2 == 0 ? 1.0 : -1.0);
    const auto rough = error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U);
    CHECK(rough.h1 > base.h1);
    CHECK(rough.h1 > rough.l2);
}

TEST_CASE("convergence order hand values") {
    CHECK(convergence_order(4.0e-3, 1.0e-3) == doctest::Approx(2.0));
    CHECK(convergence_order(2.0e-5, 1.0e-5) == doctest::Approx(1.0));
    CHECK(convergence_order(1e-6, 1e-6) == doctest::Approx(0.0));
    CHECK_THROWS_AS(convergence_order(0.0, 1e-6), NonPositiveError);
    CHECK_THROWS_AS(convergence_order(1e-6, -1.0), NonPositiveError);
}

TEST_CASE("errors csv round trip") {
    ErrorReport r;
    r.example = 1;
    r.m = 60;
    r.spacing = 0.0625;
    r.dt = 0.1;
    r.u.linf = 1e-5;
    r.u.l2 = 2e-6;
    std::ostringstream out;
    emit_errors_csv({r}, out);
    const std::string s = out.str();
    CHECK(s.find("example") != std::string::npos);  // header present
    CHECK(s.find("e-05") != std::string::npos);
    CHECK(std::count(s.begin(), s.end(), '\n') == 2);  // header + one row
}

TEST_CASE("field csv has one line per node") {
    const Fixture f;
    const auto fields = f.exact_fields();
    std::ostringstream out;
    emit_field_csv(f.cloud, fields, f.problem, out);
    const std::string s = out.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(f.cloud.size()) + 1);
}

TEST_CASE("vtk export declares the right point count") {
    const Fixture f;
    const auto fields = f.exact_fields();
    std::ostringstream out;
    emit_vtk(f.cloud, fields, f.problem, out);
    const std::string s = out.str();
    CHECK(s.rfind("# vtk DataFile", 0) == 0);
    CHECK(s.find("POINTS " + std::to_string(f.cloud.size())) != std::string::npos);
}

TEST_CASE("length mismatch throws") {
    const Fixture f;
    auto fields = f.exact_fields();
    fields.u.pop_back();
    CHECK_THROWS_AS(error_norms(f.cloud, f.stars, fields, f.problem, FieldId::U),
                    MissingValues);
}
