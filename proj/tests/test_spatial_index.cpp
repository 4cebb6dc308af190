#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bfarm/spatial_index.hpp"
#include "oracles.hpp"

using namespace bfarm;

namespace {

Dataset<double> two_points() {
    PointMatrix<double> x(2, 2);
    x << 0, 0, 10, 10;
    return Dataset<double>(x);
}

}  // namespace

TEST(SpatialIndex, Singleton) {
    PointMatrix<double> x(1, 3);
    x << 1, 2, 3;
    SpatialIndex<double> index(Dataset<double>{x});
    EXPECT_EQ(index.alive_count(), 1);
    const auto hit = index.nearest_alive(Eigen::RowVector3d(0, 0, 0));
    EXPECT_EQ(hit.index, 0);
    EXPECT_DOUBLE_EQ(hit.distance, std::sqrt(14.0));
}

TEST(SpatialIndex, AllAliveAfterBuild) {
    const auto ds = oracle::random_points(1000, 2, 1);
    SpatialIndex<double> index(ds);
    EXPECT_EQ(index.alive_count(), ds.size());
}

TEST(SpatialIndex, QueryOnAlivePointHasZeroDistance) {
    const auto ds = oracle::random_points(200, 3, 2);
    SpatialIndex<double> index(ds);
    const auto hit = index.nearest_alive(ds.point(17));
    EXPECT_EQ(hit.index, 17);
    EXPECT_EQ(hit.distance, 0.0);
}

TEST(SpatialIndex, ForcedGeometry) {
    SpatialIndex<double> index(two_points());
    const auto hit = index.nearest_alive(Eigen::RowVector2d(1, 1));
    EXPECT_EQ(hit.index, 0);
    EXPECT_DOUBLE_EQ(hit.distance, std::sqrt(2.0));
}

TEST(SpatialIndex, MatchesLinearScan) {
    const auto ds = oracle::random_points(1000, 2, 3);
    SpatialIndex<double> index(ds);
    std::vector<bool> alive(1000, true);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 11.0);
    for (int t = 0; t < 100; ++t) {
        const Eigen::RowVector2d q(u(rng), u(rng));
        const auto hit = index.nearest_alive(q);
        const auto ref = oracle::nearest(ds, alive, q);
        EXPECT_EQ(hit.index, ref.index);
        EXPECT_DOUBLE_EQ(hit.distance, std::sqrt(ref.dist2));
    }
}

TEST(SpatialIndex, MatchesLinearScanWithDeletions) {
    const auto ds = oracle::random_points(500, 3, 4);
    SpatialIndex<double> index(ds);
    std::vector<bool> alive(500, true);
    std::mt19937_64 rng(10);
    std::vector<Index> order(500);
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 0; i < 100; ++i) {
        index.mark_assigned(order[i]);
        alive[order[i]] = false;
    }
    EXPECT_EQ(index.alive_count(), 400);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int t = 0; t < 50; ++t) {
        const Eigen::RowVector3d q(u(rng), u(rng), u(rng));
        EXPECT_EQ(index.nearest_alive(q).index, oracle::nearest(ds, alive, q).index);
    }
}

// Property: any interleaving of deletions and queries agrees with the scan.
TEST(SpatialIndex, RandomOperationSequences) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 1 + static_cast<Index>(rng() % 300);
        const Index dim = 1 + static_cast<Index>(rng() % 5);
        auto ds = oracle::random_points(n, dim, rng(), 5.0);
        // Snap to a coarse grid so exact ties and duplicates are common.
        PointMatrix<double> x = ((ds.points().array() * 2.0).round() / 2.0).matrix();
        ds = Dataset<double>(x);
        SpatialIndex<double> index(ds, 1 + static_cast<Index>(rng() % 12));
        std::vector<bool> alive(n, true);
        Index live = n;
        while (live > 0) {
            const Eigen::RowVectorXd q = oracle::random_points(1, dim, rng(), 5.0).point(0);
            const auto hit = index.nearest_alive(q);
            const auto ref = oracle::nearest(ds, alive, q);
            ASSERT_EQ(hit.index, ref.index);
            const Index victim = (rng() % 2 == 0) ? hit.index : [&] {
                Index v;
                do v = static_cast<Index>(rng() % n); while (!alive[v]);
                return v;
            }();
            index.mark_assigned(victim);
            alive[victim] = false;
            --live;
            ASSERT_EQ(index.alive_count(), live);
        }
        EXPECT_THROW(index.nearest_alive(Eigen::RowVectorXd::Zero(dim)), ExhaustedError);
    }
}

TEST(SpatialIndex, DoubleKillIsLogicError) {
    SpatialIndex<double> index(two_points());
    index.mark_assigned(1);
    EXPECT_THROW(index.mark_assigned(1), std::logic_error);
    EXPECT_EQ(index.alive_count(), 1);
}

TEST(SpatialIndex, ExhaustedAfterAllAssigned) {
    SpatialIndex<double> index(two_points());
    index.mark_assigned(0);
    index.mark_assigned(1);
    EXPECT_THROW(index.nearest_alive(Eigen::RowVector2d(0, 0)), ExhaustedError);
    EXPECT_THROW(index.nearest_alive_to_set(Eigen::RowVector2d(0, 0)), ExhaustedError);
}

TEST(SpatialIndex, DimensionMismatch) {
    SpatialIndex<double> index(two_points());
    EXPECT_THROW(index.nearest_alive(Eigen::RowVector3d(0, 0, 0)), ShapeError);
}

TEST(NearestToSet, SingletonReducesToNearest) {
    const auto ds = oracle::random_points(300, 2, 5);
    SpatialIndex<double> index(ds);
    const Eigen::RowVector2d q(3.3, 4.4);
    const auto a = index.nearest_alive(q);
    const auto b = index.nearest_alive_to_set(q);
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(a.distance, b.distance);
    EXPECT_EQ(b.query, 0);
}

TEST(NearestToSet, TieGoesToSmallerPointIndex) {
    PointMatrix<double> x(2, 2);
    x << 1, 0, 99, 100;
    SpatialIndex<double> index(Dataset<double>{x});
    Eigen::MatrixXd qs(2, 2);
    qs << 0, 0, 100, 100;
    const auto hit = index.nearest_alive_to_set(qs);
    EXPECT_EQ(hit.index, 0);
    EXPECT_EQ(hit.query, 0);
    EXPECT_EQ(hit.distance, 1.0);

    // Reversed storage order: the tie still resolves to point 0.
    x << 99, 100, 1, 0;
    SpatialIndex<double> flipped(Dataset<double>{x});
    const auto h2 = flipped.nearest_alive_to_set(qs);
    EXPECT_EQ(h2.index, 0);
    EXPECT_EQ(h2.query, 1);
}

TEST(NearestToSet, TieGoesToSmallerQueryIndex) {
    PointMatrix<double> x(1, 1);
    x << 0;
    SpatialIndex<double> index(Dataset<double>{x});
    Eigen::MatrixXd qs(3, 1);
    qs << 5, -2, 2;
    EXPECT_EQ(index.nearest_alive_to_set(qs).query, 1);
}

TEST(NearestToSet, MatchesExhaustiveDoubleLoop) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        const Index n = 20 + static_cast<Index>(rng() % 200);
        const Index dim = 1 + static_cast<Index>(rng() % 4);
        auto ds = oracle::random_points(n, dim, rng(), 4.0);
        if (trial % 2 == 0) ds = Dataset<double>(ds.points().array().round().matrix());
        SpatialIndex<double> index(ds);
        std::vector<bool> alive(n, true);
        for (Index i = 0; i < n; ++i) {
            if (rng() % 3 == 0) {
                index.mark_assigned(i);
                alive[i] = false;
            }
        }
        if (index.alive_count() == 0) continue;
        const Index m = 1 + static_cast<Index>(rng() % 8);
        Eigen::MatrixXd qs = oracle::random_points(m, dim, rng(), 4.0).points();
        if (trial % 2 == 0) qs = qs.array().round().matrix();
        const auto hit = index.nearest_alive_to_set(qs);
        const auto ref = oracle::nearest_to_set(ds, alive, qs);
        ASSERT_EQ(hit.index, ref.index);
        ASSERT_EQ(hit.query, ref.query);
        EXPECT_NEAR(hit.distance, std::sqrt(ref.dist2), 1e-12);

        // Equals the minimum over individual nearest queries.
        Index best_q = -1;
        typename SpatialIndex<double>::Hit best{-1, std::numeric_limits<double>::infinity()};
        for (Index r = 0; r < m; ++r) {
            const auto h = index.nearest_alive(qs.row(r));
            if (h.distance < best.distance || (h.distance == best.distance && h.index < best.index)) {
                best = h;
                best_q = r;
            }
        }
        EXPECT_EQ(best.index, hit.index);
        EXPECT_EQ(best_q, hit.query);
    }
}

TEST(SpatialIndex, WithinRadiusMatchesScan) {
    const auto ds = oracle::random_points(400, 2, 8);
    SpatialIndex<double> index(ds);
    index.mark_assigned(3);  // radius queries ignore alive marks
    for (Index i = 0; i < 400; i += 37) {
        std::vector<Index> ref;
        for (Index j = 0; j < 400; ++j) {
            if ((ds.point(i) - ds.point(j)).squaredNorm() <= 1.0) ref.push_back(j);
        }
        EXPECT_EQ(index.within_radius(ds.point(i), 1.0), ref);
    }
}

TEST(SpatialIndex, QueryCostIsLogarithmic) {
    const Index n = Index{1} << 16;
    const auto ds = gen_uniform(n, 2, 21);
    SpatialIndex<double> index(ds);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    typename SpatialIndex<double>::QueryStats stats;
    for (int t = 0; t < 1000; ++t) index.nearest_alive(Eigen::RowVector2d(u(rng), u(rng)), &stats);
    const double mean_visits = static_cast<double>(stats.visited_nodes) / 1000.0;
    EXPECT_LE(mean_visits, 4.0 * 16.0);
}
