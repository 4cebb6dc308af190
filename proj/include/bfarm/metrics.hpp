#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <vector>

#include "bfarm/dataset.hpp"
#include "bfarm/error.hpp"

namespace bfarm {

struct MetricsReport {
    std::optional<double> silhouette_mean;     ///< empty when undefined
    std::optional<double> calinski_harabasz;  ///< empty when undefined
    Index n_clustered = 0;
    Index n_noise = 0;
    double wall_time_ms = 0.0;
};

namespace detail {

// Labelled points with labels compacted to 0..k-1 in ascending label order.
struct CompactLabels {
    std::vector<Index> rows;
    std::vector<int> cluster;
    std::vector<Index> sizes;
};

inline CompactLabels compact(const Assignment& a) {
    std::map<int, int> ids;
    for (Index i = 0; i < a.size(); ++i) {
        if (!a.is_noise(i)) ids.emplace(a[i], 0);
    }
    int next = 0;
    for (auto& [label, id] : ids) id = next++;
    CompactLabels out;
    out.sizes.assign(ids.size(), 0);
    for (Index i = 0; i < a.size(); ++i) {
        if (a.is_noise(i)) continue;
        const int c = ids.at(a[i]);
        out.rows.push_back(i);
        out.cluster.push_back(c);
        ++out.sizes[static_cast<std::size_t>(c)];
    }
    return out;
}

}  // namespace detail

/// Mean silhouette over labelled points; noise is ignored.
///
/// s(i) = (b - a) / max(a, b) with a the mean distance to the rest of its own
/// cluster and b the smallest mean distance to another cluster. Points in
/// singleton clusters score 0.
template <typename Scalar>
double silhouette_mean(const Dataset<Scalar>& ds, const Assignment& a) {
    if (a.size() != ds.size()) throw ShapeError("assignment length does not match dataset");
    const auto lab = detail::compact(a);
    const auto k = static_cast<Index>(lab.sizes.size());
    if (k < 2) throw UndefinedMetricError("silhouette needs at least 2 non-empty clusters");

    const auto n = static_cast<Index>(lab.rows.size());
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(n, k);
    for (Index i = 0; i < n; ++i) {
        const auto pi = ds.point(lab.rows[i]);
        for (Index j = i + 1; j < n; ++j) {
            const double d = static_cast<double>((pi - ds.point(lab.rows[j])).norm());
            sums(i, lab.cluster[j]) += d;
            sums(j, lab.cluster[i]) += d;
        }
    }

    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        const int own = lab.cluster[i];
        const Index own_size = lab.sizes[static_cast<std::size_t>(own)];
        if (own_size < 2) continue;
        const double intra = sums(i, own) / static_cast<double>(own_size - 1);
        double inter = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < k; ++c) {
            if (c == own) continue;
            inter = std::min(inter, sums(i, c) / static_cast<double>(lab.sizes[c]));
        }
        const double scale = std::max(intra, inter);
        if (scale > 0.0) total += (inter - intra) / scale;
    }
    return total / static_cast<double>(n);
}

/// (SS_B / SS_W) * (N - k) / (k - 1) over labelled points.
template <typename Scalar>
double calinski_harabasz(const Dataset<Scalar>& ds, const Assignment& a) {
    if (a.size() != ds.size()) throw ShapeError("assignment length does not match dataset");
    const auto lab = detail::compact(a);
    const auto k = static_cast<Index>(lab.sizes.size());
    if (k < 2) throw UndefinedMetricError("Calinski-Harabasz needs at least 2 non-empty clusters");
    const auto n = static_cast<Index>(lab.rows.size());

    Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, ds.dim());
    Eigen::RowVectorXd overall = Eigen::RowVectorXd::Zero(ds.dim());
    for (Index i = 0; i < n; ++i) {
        const Eigen::RowVectorXd p = ds.point(lab.rows[i]).template cast<double>();
        means.row(lab.cluster[i]) += p;
        overall += p;
    }
    overall /= static_cast<double>(n);
    for (Index c = 0; c < k; ++c) means.row(c) /= static_cast<double>(lab.sizes[c]);

    double between = 0.0;
    for (Index c = 0; c < k; ++c) {
        between += static_cast<double>(lab.sizes[c]) * (means.row(c) - overall).squaredNorm();
    }
    double within = 0.0;
    for (Index i = 0; i < n; ++i) {
        within += (ds.point(lab.rows[i]).template cast<double>() - means.row(lab.cluster[i])).squaredNorm();
    }
    if (within == 0.0) {
        throw UndefinedMetricError("Calinski-Harabasz undefined: within-cluster dispersion is zero");
    }
    return (between / within) * (static_cast<double>(n - k) / static_cast<double>(k - 1));
}

/// Both metrics plus counts; undefined metrics are left empty.
template <typename Scalar>
MetricsReport evaluate(const Dataset<Scalar>& ds, const Assignment& a, double wall_time_ms = 0.0) {
    MetricsReport r;
    r.n_clustered = a.n_clustered();
    r.n_noise = a.n_noise();
    r.wall_time_ms = wall_time_ms;
    try {
        r.silhouette_mean = silhouette_mean(ds, a);
    } catch (const UndefinedMetricError&) {
    }
    try {
        r.calinski_harabasz = calinski_harabasz(ds, a);
    } catch (const UndefinedMetricError&) {
    }
    return r;
}

/// Fraction of points on which two labellings agree under the best one-to-one
/// matching of cluster ids. Noise only matches noise.
double label_agreement(const Assignment& a, const Assignment& b);

/// Same, against integer ground truth (no noise in truth).
double label_agreement(const Assignment& a, const Eigen::VectorXi& truth);

}  // namespace bfarm
