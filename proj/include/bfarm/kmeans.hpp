#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bfarm/dataset.hpp"
#include "bfarm/error.hpp"

namespace bfarm {

struct KMeansParams {
    Index k = 2;
    int max_iter = 300;
    double tol = 1e-8;  ///< stop once no centroid moves further than this
    std::uint64_t seed = 0;
};

template <typename Scalar>
struct KMeansResult {
    Assignment assignment;
    PointMatrix<Scalar> centroids;
    Scalar inertia = 0;  ///< total within-cluster squared distance
    int iterations = 0;
    /// Objective after every assignment step, including the final one.
    std::vector<Scalar> inertia_history;
};

namespace detail {

template <typename Scalar, typename A, typename B>
Scalar squared_distance(const A& a, const B& b) {
    Scalar s = 0;
    for (Index j = 0; j < a.size(); ++j) {
        const Scalar d = a(j) - b(j);
        s += d * d;
    }
    return s;
}

template <typename Scalar>
PointMatrix<Scalar> kmeanspp_init(const PointMatrix<Scalar>& x, Index k, std::mt19937_64& rng) {
    const Index n = x.rows();
    PointMatrix<Scalar> centers(k, x.cols());
    std::uniform_int_distribution<Index> pick(0, n - 1);
    centers.row(0) = x.row(pick(rng));

    std::vector<Scalar> d2(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) d2[i] = squared_distance<Scalar>(x.row(i), centers.row(0));

    for (Index c = 1; c < k; ++c) {
        Scalar total = 0;
        for (Scalar v : d2) total += v;
        Index chosen = 0;
        if (total > 0) {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const Scalar target = static_cast<Scalar>(unit(rng)) * total;
            Scalar acc = 0;
            chosen = n - 1;
            for (Index i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = pick(rng);
        }
        centers.row(c) = x.row(chosen);
        for (Index i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], squared_distance<Scalar>(x.row(i), centers.row(c)));
        }
    }
    return centers;
}

// Nearest-centroid labelling; returns the objective. Ties go to the lower id.
template <typename Scalar>
Scalar assign_nearest(const PointMatrix<Scalar>& x, const PointMatrix<Scalar>& centers,
                      Eigen::VectorXi& labels, std::vector<Scalar>& cost) {
    Scalar total = 0;
    for (Index i = 0; i < x.rows(); ++i) {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        int arg = 0;
        for (Index c = 0; c < centers.rows(); ++c) {
            const Scalar d = squared_distance<Scalar>(x.row(i), centers.row(c));
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[i] = arg;
        cost[static_cast<std::size_t>(i)] = best;
        total += best;
    }
    return total;
}

}  // namespace detail

/// Lloyd's algorithm from a seeded k-means++ start.
///
/// An empty cluster is re-seeded at the point farthest from its current
/// centroid (lowest index on ties), so every run is deterministic for a
/// given seed.
template <typename Scalar>
KMeansResult<Scalar> kmeans(const Dataset<Scalar>& ds, const KMeansParams& params) {
    if (params.k < 1) throw ArgumentError("kmeans: k must be >= 1");
    if (params.max_iter < 1) throw ArgumentError("kmeans: max_iter must be >= 1");
    if (!(params.tol >= 0.0)) throw ArgumentError("kmeans: tol must be >= 0");
    if (ds.size() < params.k) throw ArgumentError("kmeans: fewer points than clusters");

    const auto& x = ds.points();
    const Index n = ds.size();
    const Index k = params.k;
    std::mt19937_64 rng(params.seed);

    KMeansResult<Scalar> out;
    PointMatrix<Scalar> centers = detail::kmeanspp_init(x, k, rng);
    Eigen::VectorXi labels(n);
    std::vector<Scalar> cost(static_cast<std::size_t>(n));

    for (int iter = 1; iter <= params.max_iter; ++iter) {
        out.inertia_history.push_back(detail::assign_nearest(x, centers, labels, cost));
        out.iterations = iter;

        Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
        for (Index i = 0; i < n; ++i) ++counts[labels[i]];
        for (Index c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            Index far = 0;
            for (Index i = 1; i < n; ++i) {
                if (cost[static_cast<std::size_t>(i)] > cost[static_cast<std::size_t>(far)]) far = i;
            }
            --counts[labels[far]];
            labels[far] = static_cast<int>(c);
            counts[c] = 1;
            cost[static_cast<std::size_t>(far)] = 0;
        }

        PointMatrix<Scalar> next = PointMatrix<Scalar>::Zero(k, ds.dim());
        for (Index i = 0; i < n; ++i) next.row(labels[i]) += x.row(i);
        Scalar shift = 0;
        for (Index c = 0; c < k; ++c) {
            if (counts[c] > 0) next.row(c) /= static_cast<Scalar>(counts[c]);
            else next.row(c) = centers.row(c);
            shift = std::max(shift, (next.row(c) - centers.row(c)).norm());
        }
        centers = std::move(next);
        if (shift <= static_cast<Scalar>(params.tol)) break;
    }

    out.inertia = detail::assign_nearest(x, centers, labels, cost);
    out.inertia_history.push_back(out.inertia);
    out.assignment = Assignment(std::move(labels));
    out.centroids = std::move(centers);
    return out;
}

}  // namespace bfarm
