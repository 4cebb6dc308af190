#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bfarm/dataset.hpp"
#include "bfarm/error.hpp"

namespace bfarm {

/// Static kd-tree over a point set with logical deletion.
///
/// The tree shape is fixed at construction (median splits on the widest
/// bounding-box axis, bucketed leaves). Points are "killed" with
/// mark_assigned(); every node keeps a count of alive points below it so
/// fully dead subtrees are skipped. All nearest queries use Euclidean
/// distance and break ties by the smallest point index.
template <typename Scalar>
class SpatialIndex {
public:
    struct Hit {
        Index index;
        Scalar distance;
    };

    struct SetHit {
        Index index;
        Scalar distance;
        Index query;  ///< row of the query set nearest to `index`
    };

    struct QueryStats {
        std::size_t visited_nodes = 0;
    };

    explicit SpatialIndex(const Dataset<Scalar>& ds, Index leaf_size = 8)
        : points_(ds.points().rows(), ds.points().cols()),
          order_(static_cast<std::size_t>(ds.size())),
          leaf_of_(static_cast<std::size_t>(ds.size())),
          alive_(static_cast<std::size_t>(ds.size()), 1),
          alive_count_(ds.size()),
          leaf_size_(std::max<Index>(1, leaf_size)) {
        std::iota(order_.begin(), order_.end(), Index{0});
        nodes_.reserve(static_cast<std::size_t>(2 * (ds.size() / leaf_size_ + 1)));
        build(ds.points(), 0, ds.size(), -1);
        for (Index p = 0; p < ds.size(); ++p) points_.row(p) = ds.points().row(order_[p]);
        lo_.resize(static_cast<Index>(nodes_.size()), ds.dim());
        hi_.resize(static_cast<Index>(nodes_.size()), ds.dim());
        for (std::size_t n = nodes_.size(); n-- > 0;) {
            const Node& node = nodes_[n];
            const auto id = static_cast<Index>(n);
            if (node.left < 0) {
                lo_.row(id) = points_.middleRows(node.begin, node.end - node.begin).colwise().minCoeff();
                hi_.row(id) = points_.middleRows(node.begin, node.end - node.begin).colwise().maxCoeff();
                for (Index p = node.begin; p < node.end; ++p) leaf_of_[order_[p]] = id;
            } else {
                lo_.row(id) = lo_.row(node.left).cwiseMin(lo_.row(node.right));
                hi_.row(id) = hi_.row(node.left).cwiseMax(hi_.row(node.right));
            }
        }
    }

    Index size() const noexcept { return points_.rows(); }
    Index dim() const noexcept { return points_.cols(); }
    Index alive_count() const noexcept { return alive_count_; }
    bool is_alive(Index i) const { return alive_[static_cast<std::size_t>(i)] != 0; }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    /// Alive point closest to q.
    template <typename Derived>
    Hit nearest_alive(const Eigen::MatrixBase<Derived>& q, QueryStats* stats = nullptr) const {
        check_query(q.size());
        Best best;
        search(q.derived(), 0, 0, best, stats);
        return {best.index, std::sqrt(best.dist2)};
    }

    /// Closest (alive point, query row) pair over the Cartesian product.
    /// Ties go to the smallest point index, then the smallest query row.
    template <typename Derived>
    SetHit nearest_alive_to_set(const Eigen::MatrixBase<Derived>& queries,
                                QueryStats* stats = nullptr) const {
        if (queries.rows() < 1) throw ArgumentError("nearest_alive_to_set: empty query set");
        check_query(queries.cols());
        Best best;
        for (Index r = 0; r < queries.rows(); ++r) {
            search(queries.row(r), r, 0, best, stats);
        }
        return {best.index, std::sqrt(best.dist2), best.query};
    }

    /// Marks point i as assigned; it is never returned by nearest queries again.
    void mark_assigned(Index i) {
        if (i < 0 || i >= size()) throw std::out_of_range("mark_assigned: index out of range");
        auto& flag = alive_[static_cast<std::size_t>(i)];
        if (!flag) throw std::logic_error("mark_assigned: point " + std::to_string(i) + " already assigned");
        flag = 0;
        --alive_count_;
        for (Index n = leaf_of_[static_cast<std::size_t>(i)]; n >= 0; n = nodes_[static_cast<std::size_t>(n)].parent) {
            --nodes_[static_cast<std::size_t>(n)].alive;
        }
    }

    /// Indices of all points (alive or not) within `radius` of q, ascending.
    template <typename Derived>
    std::vector<Index> within_radius(const Eigen::MatrixBase<Derived>& q, Scalar radius) const {
        if (q.size() != dim()) throw ShapeError("within_radius: query dimension mismatch");
        std::vector<Index> out;
        const Scalar r2 = radius * radius;
        std::vector<Index> stack{0};
        while (!stack.empty()) {
            const Index id = stack.back();
            stack.pop_back();
            if (box_dist2(q.derived(), id) > r2) continue;
            const Node& node = nodes_[static_cast<std::size_t>(id)];
            if (node.left < 0) {
                for (Index p = node.begin; p < node.end; ++p) {
                    if (dist2(q.derived(), p) <= r2) out.push_back(order_[static_cast<std::size_t>(p)]);
                }
            } else {
                stack.push_back(node.right);
                stack.push_back(node.left);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Node {
        Index begin;
        Index end;
        Index left = -1;
        Index right = -1;
        Index parent = -1;
        Index alive = 0;
    };

    struct Best {
        Scalar dist2 = std::numeric_limits<Scalar>::infinity();
        Index index = -1;
        Index query = -1;
    };

    void check_query(Index cols) const {
        if (cols != dim()) throw ShapeError("query dimension does not match index dimension");
        if (alive_count_ == 0) throw ExhaustedError("no alive points left in the spatial index");
    }

    Index build(const PointMatrix<Scalar>& src, Index begin, Index end, Index parent) {
        const auto id = static_cast<Index>(nodes_.size());
        nodes_.push_back(Node{begin, end, -1, -1, parent, end - begin});
        if (end - begin <= leaf_size_) return id;

        const auto first = order_.begin() + begin;
        const auto last = order_.begin() + end;
        Index axis = 0;
        Scalar widest = -1;
        for (Index j = 0; j < src.cols(); ++j) {
            Scalar lo = std::numeric_limits<Scalar>::infinity();
            Scalar hi = -lo;
            for (auto it = first; it != last; ++it) {
                lo = std::min(lo, src(*it, j));
                hi = std::max(hi, src(*it, j));
            }
            if (hi - lo > widest) {
                widest = hi - lo;
                axis = j;
            }
        }
        const Index mid = begin + (end - begin) / 2;
        std::nth_element(first, order_.begin() + mid, last, [&](Index a, Index b) {
            const Scalar ca = src(a, axis);
            const Scalar cb = src(b, axis);
            return ca < cb || (ca == cb && a < b);
        });
        const Index left = build(src, begin, mid, id);
        const Index right = build(src, mid, end, id);
        nodes_[static_cast<std::size_t>(id)].left = left;
        nodes_[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    // Coordinates are accumulated in axis order in both distance helpers so the
    // box bound never exceeds the distance to any point inside the box.
    template <typename Q>
    Scalar dist2(const Q& q, Index pos) const {
        Scalar s = 0;
        for (Index j = 0; j < points_.cols(); ++j) {
            const Scalar d = q(j) - points_(pos, j);
            s += d * d;
        }
        return s;
    }

    template <typename Q>
    Scalar box_dist2(const Q& q, Index id) const {
        Scalar s = 0;
        for (Index j = 0; j < points_.cols(); ++j) {
            Scalar gap = 0;
            if (q(j) < lo_(id, j)) {
                gap = lo_(id, j) - q(j);
            } else if (q(j) > hi_(id, j)) {
                gap = q(j) - hi_(id, j);
            }
            s += gap * gap;
        }
        return s;
    }

    template <typename Q>
    void search(const Q& q, Index query, Index id, Best& best, QueryStats* stats) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        if (node.alive == 0) return;
        if (stats) ++stats->visited_nodes;
        if (node.left < 0) {
            for (Index p = node.begin; p < node.end; ++p) {
                const Index original = order_[static_cast<std::size_t>(p)];
                if (!alive_[static_cast<std::size_t>(original)]) continue;
                const Scalar d2 = dist2(q, p);
                if (d2 < best.dist2 || (d2 == best.dist2 && original < best.index)) {
                    best = Best{d2, original, query};
                }
            }
            return;
        }
        Scalar near_bound = box_dist2(q, node.left);
        Scalar far_bound = box_dist2(q, node.right);
        Index near = node.left;
        Index far = node.right;
        if (far_bound < near_bound) {
            std::swap(near, far);
            std::swap(near_bound, far_bound);
        }
        // Equal bounds are still explored: a tie may carry a smaller index.
        if (near_bound <= best.dist2) search(q, query, near, best, stats);
        if (far_bound <= best.dist2) search(q, query, far, best, stats);
    }

    PointMatrix<Scalar> points_;  // rows permuted into tree order
    std::vector<Index> order_;    // tree position -> original index
    std::vector<Index> leaf_of_;  // original index -> leaf node
    std::vector<std::uint8_t> alive_;
    std::vector<Node> nodes_;
    PointMatrix<Scalar> lo_;
    PointMatrix<Scalar> hi_;
    Index alive_count_;
    Index leaf_size_;
};

}  // namespace bfarm
