#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>

#include "bfarm/error.hpp"

namespace bfarm {

using Index = Eigen::Index;

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using PointVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// N points in d-dimensional space, stored one point per row.
///
/// Construction validates the shape (n >= 1, dim >= 1) and that every
/// coordinate is finite. Instances are immutable afterwards.
template <typename Scalar>
class Dataset {
public:
    using Matrix = PointMatrix<Scalar>;

    explicit Dataset(Matrix points) : points_(std::move(points)) {
        if (points_.rows() < 1 || points_.cols() < 1) {
            throw EmptyInputError("dataset must contain at least one point of dimension >= 1");
        }
        if (!points_.allFinite()) {
            throw ArgumentError("dataset coordinates must be finite");
        }
    }

    Index size() const noexcept { return points_.rows(); }
    Index dim() const noexcept { return points_.cols(); }

    auto point(Index i) const { return points_.row(i); }
    const Matrix& points() const noexcept { return points_; }

    template <typename Other>
    Dataset<Other> cast() const {
        return Dataset<Other>(points_.template cast<Other>());
    }

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
               a.points_ == b.points_;
    }

private:
    Matrix points_;
};

/// Cluster label per point; kNoise marks unlabeled points.
class Assignment {
public:
    static constexpr int kNoise = -1;

    Assignment() = default;
    explicit Assignment(Index n) : labels_(Eigen::VectorXi::Constant(n, kNoise)) {}
    explicit Assignment(Eigen::VectorXi labels) : labels_(std::move(labels)) {}

    Index size() const noexcept { return labels_.size(); }
    int operator[](Index i) const { return labels_[i]; }
    bool is_noise(Index i) const { return labels_[i] == kNoise; }
    void set(Index i, int label) { labels_[i] = label; }

    const Eigen::VectorXi& labels() const noexcept { return labels_; }

    Index n_clustered() const { return (labels_.array() != kNoise).count(); }
    Index n_noise() const { return size() - n_clustered(); }

    /// Number of distinct non-noise labels.
    Index n_clusters() const;

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.labels_.size() == b.labels_.size() && a.labels_ == b.labels_;
    }

private:
    Eigen::VectorXi labels_;
};

/// Dataset plus generator ground truth.
struct LabeledDataset {
    Dataset<double> data;
    Eigen::VectorXi truth;
};

Dataset<double> load_csv(const std::filesystem::path& path, bool has_header);
Dataset<double> parse_csv(std::istream& in, bool has_header);

/// Shortest round-trip decimal form, one point per row, no header.
void write_csv(const std::filesystem::path& path, const Dataset<double>& ds);
void write_csv(std::ostream& out, const Dataset<double>& ds);

/// Per-column z-scoring. Constant columns are only centred.
Dataset<double> standardize(const Dataset<double>& ds);

/// k isotropic Gaussian blobs with centres on a lattice spaced 10*spread apart.
/// Cluster sizes differ by at most one; points are grouped by cluster.
LabeledDataset gen_blobs(Index n, Index k, double spread, std::uint64_t seed, Index dim = 2);

/// Two interleaved half circles with Gaussian jitter. Truth is the arc id.
LabeledDataset gen_moons(Index n, double jitter, std::uint64_t seed);

/// n points uniform in the unit hypercube.
Dataset<double> gen_uniform(Index n, Index dim, std::uint64_t seed);

}  // namespace bfarm
