#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bfarm/dataset.hpp"
#include "bfarm/dbscan.hpp"
#include "bfarm/error.hpp"
#include "bfarm/kmeans.hpp"
#include "bfarm/spatial_index.hpp"

namespace bfarm {

enum class GrowthMode {
    sequential,   ///< each cluster reaches its budget before the next starts
    round_robin,  ///< one accretion per unfinished cluster per round
};

std::string_view to_string(GrowthMode mode);
GrowthMode parse_growth_mode(std::string_view text);

/// Clusterer used on the sample to find seeds.
using Phase1 = std::variant<KMeansParams, DbscanParams>;

struct BfConfig {
    double sample_fraction = 0.2;
    double noise_fraction = 0.0;
    Index n_fr = 5;
    Phase1 phase1 = KMeansParams{};
    std::uint64_t seed = 0;
    GrowthMode growth_mode = GrowthMode::sequential;
};

/// Phase-1 output: where each cluster starts and how many points it may take.
template <typename Scalar>
struct SeedModel {
    PointMatrix<Scalar> centroids;
    std::vector<double> proportions;
    std::vector<Index> thresholds;

    Index n_clusters() const noexcept { return static_cast<Index>(thresholds.size()); }
    Index total_budget() const {
        return std::accumulate(thresholds.begin(), thresholds.end(), Index{0});
    }
    friend bool operator==(const SeedModel&, const SeedModel&) = default;
};

/// Any callable that labels a sample can act as the phase-1 clusterer.
template <typename F, typename Scalar>
concept SampleClusterer = std::invocable<F&, const Dataset<Scalar>&> &&
    std::convertible_to<std::invoke_result_t<F&, const Dataset<Scalar>&>, Assignment>;

/// Point budget for one cluster: round-half-up of proportion * (1 - noise) * n.
inline Index point_budget(double proportion, double noise_fraction, Index n_total) {
    return static_cast<Index>(
        std::floor(proportion * (1.0 - noise_fraction) * static_cast<double>(n_total) + 0.5));
}

/// The bounded active frontier of one growing cluster.
///
/// Starts with the seed centroid as a virtual entry. New members are appended
/// until the capacity is reached; afterwards each new member overwrites the
/// slot of the front-runner nearest to it, which sends that one dormant.
template <typename Scalar>
class FrontRunnerSet {
public:
    static constexpr Index kVirtual = -1;

    template <typename Derived>
    FrontRunnerSet(int cluster_id, const Eigen::MatrixBase<Derived>& centroid, Index capacity)
        : coords_(capacity, centroid.size()), entries_{kVirtual}, cluster_id_(cluster_id) {
        if (capacity < 1) throw ArgumentError("front-runner capacity must be >= 1");
        coords_.row(0) = centroid;
    }

    int cluster_id() const noexcept { return cluster_id_; }
    Index capacity() const noexcept { return coords_.rows(); }
    Index size() const noexcept { return static_cast<Index>(entries_.size()); }
    bool full() const noexcept { return size() == capacity(); }
    bool has_virtual() const {
        return std::find(entries_.begin(), entries_.end(), kVirtual) != entries_.end();
    }

    /// Slot contents: a member point index, or kVirtual for the seed centroid.
    const std::vector<Index>& entries() const noexcept { return entries_; }
    auto coordinates() const { return coords_.topRows(size()); }

    /// Adds a new member. `nearest_slot` is the front-runner closest to it.
    /// Returns the slot that was overwritten, or -1 if the member was appended.
    template <typename Derived>
    Index accept(Index point, const Eigen::MatrixBase<Derived>& coords, Index nearest_slot) {
        if (!full()) {
            coords_.row(size()) = coords;
            entries_.push_back(point);
            return -1;
        }
        coords_.row(nearest_slot) = coords;
        entries_[static_cast<std::size_t>(nearest_slot)] = point;
        return nearest_slot;
    }

private:
    PointMatrix<Scalar> coords_;
    std::vector<Index> entries_;
    int cluster_id_;
};

/// One accretion, reported to an optional observer during growth.
template <typename Scalar>
struct GrowthStep {
    int cluster;
    Index point;
    Scalar distance;
    Index replaced_slot;                 ///< -1 when the point was appended
    PointMatrix<Scalar> frontier_before;  ///< front-runner coordinates used for the query
    const FrontRunnerSet<Scalar>* frontier_after;
};

template <typename Scalar>
using GrowthObserver = std::function<void(const GrowthStep<Scalar>&)>;

struct GrowthResult {
    Assignment assignment;
    std::vector<Index> cluster_sizes;
    /// Alive points ran out before every budget was met.
    bool exhausted = false;
};

template <typename Scalar>
struct FitResult {
    Assignment assignment;
    SeedModel<Scalar> model;
    std::vector<Index> cluster_sizes;
    bool exhausted = false;
};

inline void validate(const BfConfig& cfg) {
    if (!(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0)) {
        throw ArgumentError("sample_fraction must be in (0, 1]");
    }
    if (!(cfg.noise_fraction >= 0.0 && cfg.noise_fraction < 1.0)) {
        throw ArgumentError("noise_fraction must be in [0, 1)");
    }
    if (cfg.n_fr < 1) throw ArgumentError("n_fr must be >= 1");
}

/// Runs the phase-1 clusterer selected by `phase1` on a dataset.
template <typename Scalar>
Assignment run_phase1(const Phase1& phase1, const Dataset<Scalar>& ds) {
    return std::visit(
        [&](const auto& params) -> Assignment {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, KMeansParams>) {
                return kmeans(ds, params).assignment;
            } else {
                return dbscan(ds, params);
            }
        },
        phase1);
}

/// Centroids, proportions and budgets from an already labelled sample.
/// Clusters are ordered by ascending label; noise is left out of the
/// proportion denominator.
template <typename Scalar>
SeedModel<Scalar> seed_model_from_labels(const Dataset<Scalar>& sample, const Assignment& labels,
                                         double noise_fraction, Index n_total) {
    if (labels.size() != sample.size()) {
        throw ShapeError("phase-1 labelling does not match the sample size");
    }
    std::map<int, std::vector<Index>> members;
    for (Index i = 0; i < sample.size(); ++i) {
        if (!labels.is_noise(i)) members[labels[i]].push_back(i);
    }
    Index clustered = 0;
    for (const auto& [id, idx] : members) clustered += static_cast<Index>(idx.size());
    if (members.empty() || clustered == 0) {
        throw SeedingError(
            "phase-1 clustering labelled every sample point as noise; adjust the phase-1 parameters");
    }

    SeedModel<Scalar> model;
    model.centroids.resize(static_cast<Index>(members.size()), sample.dim());
    Index c = 0;
    for (const auto& [id, idx] : members) {
        PointVector<Scalar> sum = PointVector<Scalar>::Zero(sample.dim());
        for (Index i : idx) sum += sample.point(i);
        model.centroids.row(c++) = sum / static_cast<Scalar>(idx.size());
        const double p = static_cast<double>(idx.size()) / static_cast<double>(clustered);
        model.proportions.push_back(p);
        model.thresholds.push_back(point_budget(p, noise_fraction, n_total));
    }
    return model;
}

template <typename Scalar, typename Clusterer>
    requires SampleClusterer<Clusterer, Scalar>
SeedModel<Scalar> retrieve_parameters(const Dataset<Scalar>& sample, double noise_fraction,
                                      Clusterer&& clusterer, Index n_total) {
    if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) {
        throw ArgumentError("noise_fraction must be in [0, 1)");
    }
    const Assignment labels = std::invoke(clusterer, sample);
    return seed_model_from_labels(sample, labels, noise_fraction, n_total);
}

template <typename Scalar>
SeedModel<Scalar> retrieve_parameters(const Dataset<Scalar>& sample, double noise_fraction,
                                      const Phase1& phase1, Index n_total) {
    return retrieve_parameters(
        sample, noise_fraction, [&](const Dataset<Scalar>& s) { return run_phase1(phase1, s); },
        n_total);
}

/// Indices of the seeded uniform sample without replacement, ascending.
inline std::vector<Index> sample_indices(Index n, double fraction, std::uint64_t seed) {
    const Index m = std::clamp<Index>(
        static_cast<Index>(std::floor(fraction * static_cast<double>(n) + 0.5)), 1, n);
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::mt19937_64 rng(seed);
    for (Index i = 0; i < m; ++i) {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(m));
    std::sort(idx.begin(), idx.end());
    return idx;
}

/// Phase 1: sample, cluster the sample, derive the seed model.
template <typename Scalar>
SeedModel<Scalar> sample_phase(const Dataset<Scalar>& ds, const BfConfig& cfg) {
    validate(cfg);
    const std::vector<Index> picked = sample_indices(ds.size(), cfg.sample_fraction, cfg.seed);
    const auto m = static_cast<Index>(picked.size());
    if (const auto* km = std::get_if<KMeansParams>(&cfg.phase1); km && m < km->k) {
        throw ArgumentError("sample of " + std::to_string(m) + " points is smaller than phase-1 k = " +
                            std::to_string(km->k) + "; raise sample_fraction");
    }
    PointMatrix<Scalar> rows(m, ds.dim());
    for (Index r = 0; r < m; ++r) rows.row(r) = ds.point(picked[static_cast<std::size_t>(r)]);
    return retrieve_parameters(Dataset<Scalar>(std::move(rows)), cfg.noise_fraction, cfg.phase1,
                               ds.size());
}

namespace detail {

template <typename Scalar>
class Grower {
public:
    Grower(const Dataset<Scalar>& ds, const SeedModel<Scalar>& model, Index n_fr,
           const GrowthObserver<Scalar>& observer)
        : ds_(ds), model_(model), index_(ds), observer_(observer) {
        result_.assignment = Assignment(ds.size());
        result_.cluster_sizes.assign(static_cast<std::size_t>(model.n_clusters()), 0);
        for (Index c = 0; c < model.n_clusters(); ++c) {
            frontiers_.emplace_back(static_cast<int>(c), model.centroids.row(c), n_fr);
        }
    }

    bool done(Index c) const {
        return result_.cluster_sizes[static_cast<std::size_t>(c)] >=
               model_.thresholds[static_cast<std::size_t>(c)];
    }

    // One accretion for cluster c. Returns false once no alive point is left.
    bool step(Index c) {
        if (index_.alive_count() == 0) {
            result_.exhausted = true;
            return false;
        }
        auto& frontier = frontiers_[static_cast<std::size_t>(c)];
        const auto hit = index_.nearest_alive_to_set(frontier.coordinates());
        result_.assignment.set(hit.index, static_cast<int>(c));
        index_.mark_assigned(hit.index);
        ++result_.cluster_sizes[static_cast<std::size_t>(c)];

        PointMatrix<Scalar> before;
        if (observer_) before = frontier.coordinates();
        const Index replaced = frontier.accept(hit.index, ds_.point(hit.index), hit.query);
        if (observer_) {
            observer_(GrowthStep<Scalar>{static_cast<int>(c), hit.index, hit.distance, replaced,
                                         std::move(before), &frontier});
        }
        return true;
    }

    GrowthResult take() { return std::move(result_); }

private:
    const Dataset<Scalar>& ds_;
    const SeedModel<Scalar>& model_;
    SpatialIndex<Scalar> index_;
    std::vector<FrontRunnerSet<Scalar>> frontiers_;
    const GrowthObserver<Scalar>& observer_;
    GrowthResult result_;
};

}  // namespace detail

/// Phase 2: grow every seeded cluster until it holds its budget of points.
///
/// Each step assigns the alive point nearest to the cluster's front-runners.
/// Points are never reassigned; whatever is left alive at the end is noise.
/// If budgets add up to more than the dataset (rounding), growth stops when
/// points run out and the result is flagged `exhausted`.
template <typename Scalar>
GrowthResult grow_clusters(const Dataset<Scalar>& ds, const SeedModel<Scalar>& model, Index n_fr,
                           GrowthMode mode, const GrowthObserver<Scalar>& observer = {}) {
    if (n_fr < 1) throw ArgumentError("n_fr must be >= 1");
    if (model.centroids.cols() != ds.dim()) {
        throw ShapeError("seed centroids do not match the dataset dimension");
    }
    if (model.centroids.rows() != model.n_clusters() ||
        static_cast<Index>(model.proportions.size()) != model.n_clusters()) {
        throw ShapeError("seed model sequences differ in length");
    }

    detail::Grower<Scalar> grower(ds, model, n_fr, observer);
    const Index k = model.n_clusters();
    if (mode == GrowthMode::sequential) {
        for (Index c = 0; c < k; ++c) {
            while (!grower.done(c)) {
                if (!grower.step(c)) return grower.take();
            }
        }
    } else {
        bool progressed = true;
        while (progressed) {
            progressed = false;
            for (Index c = 0; c < k; ++c) {
                if (grower.done(c)) continue;
                if (!grower.step(c)) return grower.take();
                progressed = true;
            }
        }
    }
    return grower.take();
}

template <typename Scalar>
GrowthResult grow_clusters(const Dataset<Scalar>& ds, const SeedModel<Scalar>& model,
                           const BfConfig& cfg, const GrowthObserver<Scalar>& observer = {}) {
    validate(cfg);
    return grow_clusters(ds, model, cfg.n_fr, cfg.growth_mode, observer);
}

/// Both phases end to end.
template <typename Scalar>
FitResult<Scalar> fit(const Dataset<Scalar>& ds, const BfConfig& cfg) {
    SeedModel<Scalar> model = sample_phase(ds, cfg);
    GrowthResult grown = grow_clusters(ds, model, cfg);
    return {std::move(grown.assignment), std::move(model), std::move(grown.cluster_sizes),
            grown.exhausted};
}

}  // namespace bfarm
