#include <gtest/gtest.h>

#include <sstream>

#include "bfarm/dataset.hpp"
#include "bfarm/kmeans.hpp"
#include "oracles.hpp"

using namespace bfarm;

TEST(LoadCsv, TranscribesRowsInOrder) {
    std::istringstream in("1,2\n3,4");
    const auto ds = parse_csv(in, false);
    ASSERT_EQ(ds.size(), 2);
    ASSERT_EQ(ds.dim(), 2);
    EXPECT_EQ(ds.points()(0, 0), 1.0);
    EXPECT_EQ(ds.points()(0, 1), 2.0);
    EXPECT_EQ(ds.points()(1, 0), 3.0);
    EXPECT_EQ(ds.points()(1, 1), 4.0);
}

TEST(LoadCsv, SkipsHeader) {
    std::istringstream in("x,y\n0,0\n");
    const auto ds = parse_csv(in, true);
    EXPECT_EQ(ds.size(), 1);
    EXPECT_EQ(ds.dim(), 2);
}

TEST(LoadCsv, HandlesCrlfAndWhitespace) {
    std::istringstream in(" 1.5 , -2e3\r\n+3,4\r\n");
    const auto ds = parse_csv(in, false);
    EXPECT_EQ(ds.points()(0, 1), -2000.0);
    EXPECT_EQ(ds.points()(1, 0), 3.0);
}

TEST(LoadCsv, NonNumericCellNamesRowAndColumn) {
    std::istringstream in("1,a");
    try {
        parse_csv(in, false);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 1u);
        EXPECT_EQ(e.column(), 2u);
    }
}

TEST(LoadCsv, RejectsRaggedRows) {
    std::istringstream in("1,2\n3\n");
    EXPECT_THROW(parse_csv(in, false), ShapeError);
}

TEST(LoadCsv, RejectsEmptyInput) {
    std::istringstream empty("");
    EXPECT_THROW(parse_csv(empty, false), EmptyInputError);
    std::istringstream header_only("x,y\n");
    EXPECT_THROW(parse_csv(header_only, true), EmptyInputError);
}

TEST(LoadCsv, RejectsNonFinite) {
    std::istringstream in("1,nan\n");
    EXPECT_THROW(parse_csv(in, false), ParseError);
}

TEST(LoadCsv, MissingFileIsAnError) {
    EXPECT_THROW(load_csv("/nonexistent/file.csv", false), ArgumentError);
}

TEST(WriteCsv, RoundTripsExactly) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ds = oracle::random_points(50, 3, seed, 1e-3 + static_cast<double>(seed) * 1e5);
        std::stringstream buf;
        write_csv(buf, ds);
        EXPECT_EQ(parse_csv(buf, false), ds);
    }
}

TEST(DatasetType, RejectsNonFiniteCoordinates) {
    PointMatrix<double> x(1, 2);
    x << 1.0, std::numeric_limits<double>::infinity();
    EXPECT_THROW(Dataset<double>{x}, ArgumentError);
    EXPECT_THROW(Dataset<double>{PointMatrix<double>(0, 2)}, EmptyInputError);
}

TEST(DatasetType, FloatInstantiation) {
    const auto d = gen_uniform(10, 3, 1).cast<float>();
    EXPECT_EQ(d.size(), 10);
    EXPECT_EQ(d.dim(), 3);
}

TEST(Standardize, ZeroMeanUnitVariance) {
    const auto ds = standardize(gen_blobs(200, 3, 0.5, 4).data);
    const Eigen::RowVectorXd mean = ds.points().colwise().mean();
    EXPECT_LT(mean.cwiseAbs().maxCoeff(), 1e-12);
    for (Index j = 0; j < ds.dim(); ++j) {
        EXPECT_NEAR(ds.points().col(j).squaredNorm() / 199.0, 1.0, 1e-12);
    }
}

TEST(GenBlobs, OnePointPerClusterWhenNEqualsK) {
    const auto g = gen_blobs(3, 3, 0.1, 7);
    EXPECT_EQ(g.data.size(), 3);
    EXPECT_EQ(g.truth, (Eigen::VectorXi(3) << 0, 1, 2).finished());
}

TEST(GenBlobs, Deterministic) {
    const auto a = gen_blobs(300, 3, 0.5, 1);
    const auto b = gen_blobs(300, 3, 0.5, 1);
    std::stringstream sa, sb;
    write_csv(sa, a.data);
    write_csv(sb, b.data);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(a.truth, b.truth);
    EXPECT_NE(gen_blobs(300, 3, 0.5, 2).data, a.data);
}

TEST(GenBlobs, BalancedSizesAndSeparatedCentres) {
    const auto g = gen_blobs(302, 4, 0.5, 3, 3);
    std::vector<int> counts(4, 0);
    for (Index i = 0; i < g.truth.size(); ++i) ++counts[g.truth[i]];
    EXPECT_LE(*std::max_element(counts.begin(), counts.end()) -
                  *std::min_element(counts.begin(), counts.end()),
              1);
    // Empirical centres sit on the lattice, at least 10 * spread apart.
    Eigen::MatrixXd centres = Eigen::MatrixXd::Zero(4, 3);
    for (Index i = 0; i < g.truth.size(); ++i) centres.row(g.truth[i]) += g.data.point(i);
    for (int c = 0; c < 4; ++c) centres.row(c) /= counts[c];
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) EXPECT_GT((centres.row(a) - centres.row(b)).norm(), 4.5);
    }
}

TEST(GenBlobs, ArgumentErrors) {
    EXPECT_THROW(gen_blobs(2, 3, 0.5, 0), ArgumentError);
    EXPECT_THROW(gen_blobs(10, 3, 0.0, 0), ArgumentError);
}

TEST(GenBlobs, KMeansRecoversTruth) {
    const auto g = gen_blobs(300, 3, 0.5, 1);
    const auto km = kmeans(g.data, KMeansParams{3, 300, 1e-8, 0});
    EXPECT_GE(oracle::permutation_accuracy(km.assignment.labels(), g.truth), 0.99);
}

TEST(GenMoons, ZeroJitterPointsLieOnArcs) {
    const auto g = gen_moons(2, 0.0, 0);
    ASSERT_EQ(g.data.size(), 2);
    // Outer arc: unit circle at the origin; inner arc: unit circle at (1, 0.5).
    EXPECT_NEAR(g.data.point(0).norm(), 1.0, 1e-15);
    EXPECT_NEAR((g.data.point(1) - Eigen::RowVector2d(1.0, 0.5)).norm(), 1.0, 1e-15);
    EXPECT_THROW(gen_moons(1, 0.0, 0), ArgumentError);
}

TEST(GenMoons, Deterministic) {
    EXPECT_EQ(gen_moons(400, 0.05, 3).data, gen_moons(400, 0.05, 3).data);
    EXPECT_NE(gen_moons(400, 0.05, 3).data, gen_moons(400, 0.05, 4).data);
}
