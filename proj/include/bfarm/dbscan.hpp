#pragma once

#include <deque>
#include <limits>
#include <vector>

#include "bfarm/dataset.hpp"
#include "bfarm/error.hpp"
#include "bfarm/spatial_index.hpp"

namespace bfarm {

struct DbscanParams {
    double eps = 0.5;  ///< neighbourhood radius (inclusive)
    Index min_pts = 5;  ///< neighbours needed for a core point, self included
};

/// Density-based clustering.
///
/// Core points are grouped into eps-connected components, numbered by the
/// smallest core index they contain. A non-core point within eps of some core
/// point joins the cluster of its nearest such core (lowest index on ties), so
/// the partition does not depend on input order. Everything else is noise.
template <typename Scalar>
Assignment dbscan(const Dataset<Scalar>& ds, const DbscanParams& params) {
    if (!(params.eps > 0.0)) throw ArgumentError("dbscan: eps must be > 0");
    if (params.min_pts < 1) throw ArgumentError("dbscan: min_pts must be >= 1");

    const Index n = ds.size();
    const SpatialIndex<Scalar> index(ds);
    const auto eps = static_cast<Scalar>(params.eps);

    std::vector<std::vector<Index>> neighbours(static_cast<std::size_t>(n));
    std::vector<char> core(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
        neighbours[i] = index.within_radius(ds.point(i), eps);
        core[i] = static_cast<Index>(neighbours[i].size()) >= params.min_pts;
    }

    Assignment out(n);
    int next_id = 0;
    std::deque<Index> queue;
    for (Index seed = 0; seed < n; ++seed) {
        if (!core[seed] || !out.is_noise(seed)) continue;
        const int id = next_id++;
        out.set(seed, id);
        queue.push_back(seed);
        while (!queue.empty()) {
            const Index u = queue.front();
            queue.pop_front();
            for (Index v : neighbours[u]) {
                if (core[v] && out.is_noise(v)) {
                    out.set(v, id);
                    queue.push_back(v);
                }
            }
        }
    }

    for (Index i = 0; i < n; ++i) {
        if (core[i]) continue;
        Scalar best = std::numeric_limits<Scalar>::infinity();
        Index owner = -1;
        for (Index v : neighbours[i]) {
            if (!core[v]) continue;
            const Scalar d = (ds.point(i) - ds.point(v)).squaredNorm();
            if (d < best) {
                best = d;
                owner = v;
            }
        }
        if (owner >= 0) out.set(i, out[owner]);
    }
    return out;
}

}  // namespace bfarm
