#include "stgfdm/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "stgfdm/errors.hpp"

namespace stgfdm {

namespace {

using Vec9 = Eigen::Matrix<double, kDerivRows, 1>;

Vec9 taylor_terms(double h, double l, double r) {
    Vec9 s;
    s << h, l, r, 0.5 * h * h, 0.5 * l * l, 0.5 * r * r, h * l, h * r, l * r;
    return s;
}

}  // namespace

double weight(double d_k, double d_m) {
    if (d_k >= d_m) return 0.0;
    const double q = d_k / d_m;
    return 1.0 - 6.0 * q * q + 8.0 * q * q * q - 3.0 * q * q * q * q;
}

long long NeighborSearch::key_of(double x, double y, double t) const {
    const auto ix = static_cast<long long>(std::floor(x / cell_));
    const auto iy = static_cast<long long>(std::floor(y / cell_));
    const auto it = static_cast<long long>(std::floor(t / cell_));
    // 21 bits per axis, offset to keep them non-negative
    constexpr long long off = 1LL << 20;
    return ((ix + off) << 42) | ((iy + off) << 21) | (it + off);
}

NeighborSearch::NeighborSearch(const PointCloud& cloud, double cell_size)
    : cloud_(cloud), cell_(cell_size) {
    pool_count_[0] = pool_count_[1] = 0;
    total_count_[0] = total_count_[1] = 0;
    for (const auto& n : cloud.nodes) {
        const int s = side_of(n.category) - 1;
        cells_[s][key_of(n.pos.x, n.pos.y, n.pos.t)].push_back(n.index);
        ++total_count_[s];
        if (n.pool) ++pool_count_[s];
    }
}

std::vector<int> NeighborSearch::nearest(int center, int m) const {
    const auto& cn = cloud_.nodes[center];
    const int s = side_of(cn.category) - 1;
    // Densified interface samples drown an interior fit, but for a star
    // centered on the interface they pin the tangential behavior; take them
    // only there.
    const bool all = cn.category == NodeCategory::Interface1 ||
                     cn.category == NodeCategory::Interface2;
    const int eligible = (all ? total_count_[s] : pool_count_[s]) -
                         ((all || cn.pool) ? 1 : 0);
    const int cap = m;
    const auto& grid = cells_[s];
    const auto cx = static_cast<long long>(std::floor(cn.pos.x / cell_));
    const auto cy = static_cast<long long>(std::floor(cn.pos.y / cell_));
    const auto ct = static_cast<long long>(std::floor(cn.pos.t / cell_));
    constexpr long long off = 1LL << 20;

    std::vector<std::pair<double, int>> cand;  // (squared distance, index)
    std::vector<int> out;
    // Greedy nearest-first selection under the co-surface cap. Returns the
    // distance of the farthest selected node, or -1 when m cannot be filled
    // from the current candidates.
    const auto try_select = [&]() -> double {
        std::sort(cand.begin(), cand.end());
        out.clear();
        out.reserve(m);
        int n_surf = 0;
        double d2_max = 0.0;
        for (const auto& [d2, idx] : cand) {
            if (static_cast<int>(out.size()) == m) break;
            const NodeCategory cat = cloud_.nodes[idx].category;
            const bool surf = cat == NodeCategory::Interface1 ||
                              cat == NodeCategory::Interface2;
            if (surf && n_surf >= cap) continue;
            out.push_back(idx);
            if (surf) ++n_surf;
            d2_max = d2;
        }
        return (static_cast<int>(out.size()) == m) ? std::sqrt(d2_max) : -1.0;
    };
    const int max_ring = 1 << 12;
    for (int ring = 0; ring <= max_ring; ++ring) {
        // cells whose Chebyshev distance to the center cell equals `ring`
        for (long long ix = cx - ring; ix <= cx + ring; ++ix) {
            for (long long iy = cy - ring; iy <= cy + ring; ++iy) {
                for (long long it = ct - ring; it <= ct + ring; ++it) {
                    const long long cheb = std::max({std::llabs(ix - cx), std::llabs(iy - cy),
                                                     std::llabs(it - ct)});
                    if (cheb != ring) continue;
                    const long long key =
                        ((ix + off) << 42) | ((iy + off) << 21) | (it + off);
                    auto hit = grid.find(key);
                    if (hit == grid.end()) continue;
                    for (int idx : hit->second) {
                        if (idx == center) continue;
                        if (!all && !cloud_.nodes[idx].pool) continue;
                        const auto& p = cloud_.nodes[idx].pos;
                        const double dx = p.x - cn.pos.x, dy = p.y - cn.pos.y,
                                     dt = p.t - cn.pos.t;
                        cand.emplace_back(dx * dx + dy * dy + dt * dt, idx);
                    }
                }
            }
        }
        if (static_cast<int>(cand.size()) >= eligible) break;
        if (static_cast<int>(cand.size()) >= m) {
            const double d_m = try_select();
            // everything within ring*cell_ from the center cell is already gathered
            if (d_m >= 0.0 && (d_m <= ring * cell_ || ring == max_ring)) return out;
        }
    }
    if (try_select() < 0.0) {
        // The cloud may simply not hold m - cap off-surface nodes; fall back
        // to the plain nearest m before giving up.
        if (static_cast<int>(cand.size()) < m)
            throw InsufficientNeighbors("nearest: node " + std::to_string(center) +
                                        " has only " + std::to_string(cand.size()) +
                                        " eligible neighbors");
        out.resize(m);
        for (int i = 0; i < m; ++i) out[i] = cand[i].second;
    }
    return out;
}

Star select_star(const PointCloud& cloud, const NeighborSearch& search, int center, int m) {
    Star star;
    star.center = center;
    star.neighbors = search.nearest(center, m);
    const auto& c = cloud.nodes[center].pos;
    star.offsets.reserve(m);
    double d_max = 0.0;
    for (int idx : star.neighbors) {
        const auto& p = cloud.nodes[idx].pos;
        star.offsets.push_back({p.x - c.x, p.y - c.y, p.t - c.t});
        const auto& o = star.offsets.back();
        d_max = std::max(d_max, std::sqrt(o.x * o.x + o.y * o.y + o.t * o.t));
    }
    star.weights.reserve(m);
    for (const auto& o : star.offsets)
        star.weights.push_back(weight(std::sqrt(o.x * o.x + o.y * o.y + o.t * o.t), d_max));
    return star;
}

void build_stencil(Star& star) {
    const int m = star.m();
    // Work in offsets scaled by the star radius so the moment matrix stays
    // O(1) regardless of the local spacing, then undo the scaling per row.
    double d = 0.0;
    for (const auto& o : star.offsets)
        d = std::max(d, std::sqrt(o.x * o.x + o.y * o.y + o.t * o.t));
    if (!(d > 0.0))
        throw SingularMomentMatrix("build_stencil: zero-radius star at node " +
                                   std::to_string(star.center));
    Eigen::Matrix<double, kDerivRows, kDerivRows> A;
    A.setZero();
    Eigen::Matrix<double, kDerivRows, Eigen::Dynamic> B(kDerivRows, m + 1);
    B.col(0).setZero();
    for (int k = 0; k < m; ++k) {
        const auto& o = star.offsets[k];
        const double w2 = star.weights[k] * star.weights[k];
        const Vec9 s = taylor_terms(o.x / d, o.y / d, o.t / d);
        A.noalias() += w2 * s * s.transpose();
        B.col(k + 1) = w2 * s;
        B.col(0) -= w2 * s;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, kDerivRows, kDerivRows>> svd(
        A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(kDerivRows - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw SingularMomentMatrix("build_stencil: moment matrix condition " +
                                   std::to_string(smin > 0.0 ? smax / smin : 0.0) +
                                   " at node " + std::to_string(star.center));
    star.E = svd.solve(B);
    star.E.topRows(3) /= d;        // first derivatives
    star.E.bottomRows(6) /= d * d; // second derivatives
}

double apply_row(const Star& star, DerivRow row, const std::function<double(int)>& values) {
    double acc = star.E(row, 0) * values(star.center);
    for (int k = 0; k < star.m(); ++k) acc += star.E(row, k + 1) * values(star.neighbors[k]);
    return acc;
}

std::vector<Star> build_all_stars(const PointCloud& cloud, int m) {
    NeighborSearch search(cloud, cloud.base_spacing);
    std::vector<Star> stars;
    stars.reserve(cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
        // Stars on the initial/terminal slabs can be flat in t when the grid
        // is much finer than the time pitch; widen until the moments resolve.
        const NodeCategory cat = cloud.nodes[i].category;
        const int side = side_of(cat);
        const bool on_interface =
            cat == NodeCategory::Interface1 || cat == NodeCategory::Interface2;
        const int avail = on_interface ? search.total_count(side) - 1
                                       : search.pool_count(side) - (cloud.nodes[i].pool ? 1 : 0);
        // Interface-centered stars draw from the densified ring, whose pitch
        // does not shrink with the grid; as the grid refines, a fixed-count
        // star hugs the surface and destabilizes the interface rows. Keep a
        // floor on their size that grows with the grid density so the star
        // always reaches past the ring into the volume.
        const int interface_floor =
            std::max(60, static_cast<int>(std::llround(3.0 / cloud.base_spacing)));
        int take = std::min(on_interface ? std::max(m, interface_floor) : m, avail);
        for (;;) {
            stars.push_back(select_star(cloud, search, i, take));
            try {
                build_stencil(stars.back());
                break;
            } catch (const SingularMomentMatrix&) {
                if (take >= avail) throw;
                take = std::min(avail, take + std::max(1, m / 2));
                stars.pop_back();
            }
        }
    }
    return stars;
}

void dump_stars(const std::vector<Star>& stars, std::ostream& out) {
    out << "center,neighbor,h,l,r,omega\n";
    char buf[160];
    for (const auto& s : stars) {
        for (int k = 0; k < s.m(); ++k) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.9e,%.9e,%.9e,%.9e\n", s.center,
                          s.neighbors[k], s.offsets[k].x, s.offsets[k].y, s.offsets[k].t,
                          s.weights[k]);
            out << buf;
        }
    }
}

}  // namespace stgfdm
