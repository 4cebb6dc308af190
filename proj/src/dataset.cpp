#include "bfarm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

namespace bfarm {

Index Assignment::n_clusters() const {
    std::set<int> seen;
    for (Index i = 0; i < labels_.size(); ++i) {
        if (labels_[i] != kNoise) seen.insert(labels_[i]);
    }
    return static_cast<Index>(seen.size());
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t column) {
    cell = trim(cell);
    if (cell.empty()) throw ParseError(row, column, "empty cell");
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(row, column, "not a number: '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) throw ParseError(row, column, "non-finite value");
    return value;
}

}  // namespace

Dataset<double> parse_csv(std::istream& in, bool has_header) {
    std::vector<double> values;
    std::size_t columns = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    std::string line;
    bool header_pending = has_header;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::size_t column = 0;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            ++column;
            values.push_back(parse_cell(rest.substr(0, comma), line_no, column));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            columns = column;
        } else if (column != columns) {
            throw ShapeError("ragged rows: row " + std::to_string(line_no) + " has " +
                             std::to_string(column) + " columns, expected " +
                             std::to_string(columns));
        }
        ++rows;
    }
    if (rows == 0) throw EmptyInputError("CSV input contains no data rows");

    PointMatrix<double> points(static_cast<Index>(rows), static_cast<Index>(columns));
    std::copy(values.begin(), values.end(), points.data());
    return Dataset<double>(std::move(points));
}

Dataset<double> load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path.string());
    return parse_csv(in, has_header);
}

void write_csv(std::ostream& out, const Dataset<double>& ds) {
    char buf[64];
    for (Index i = 0; i < ds.size(); ++i) {
        for (Index j = 0; j < ds.dim(); ++j) {
            if (j > 0) out << ',';
            const auto res = std::to_chars(buf, buf + sizeof buf, ds.points()(i, j));
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Dataset<double>& ds) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write " + path.string());
    write_csv(out, ds);
}

Dataset<double> standardize(const Dataset<double>& ds) {
    PointMatrix<double> x = ds.points();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
    const double denom = ds.size() > 1 ? static_cast<double>(ds.size() - 1) : 1.0;
    for (Index j = 0; j < x.cols(); ++j) {
        const double sd = std::sqrt(x.col(j).squaredNorm() / denom);
        if (sd > 0.0) x.col(j) /= sd;
    }
    return Dataset<double>(std::move(x));
}

LabeledDataset gen_blobs(Index n, Index k, double spread, std::uint64_t seed, Index dim) {
    if (k < 1) throw ArgumentError("gen_blobs: k must be >= 1");
    if (n < k) throw ArgumentError("gen_blobs: n must be >= k");
    if (!(spread > 0.0)) throw ArgumentError("gen_blobs: spread must be > 0");
    if (dim < 1) throw ArgumentError("gen_blobs: dim must be >= 1");

    // Smallest lattice side with side^dim >= k.
    Index side = 1;
    while (std::pow(static_cast<double>(side), static_cast<double>(dim)) < static_cast<double>(k)) {
        ++side;
    }
    const double spacing = 10.0 * spread;

    PointMatrix<double> centers(k, dim);
    for (Index c = 0; c < k; ++c) {
        Index rem = c;
        for (Index j = 0; j < dim; ++j) {
            centers(c, j) = spacing * static_cast<double>(rem % side);
            rem /= side;
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    PointMatrix<double> points(n, dim);
    Eigen::VectorXi truth(n);
    const Index base = n / k;
    const Index extra = n % k;
    Index row = 0;
    for (Index c = 0; c < k; ++c) {
        const Index count = base + (c < extra ? 1 : 0);
        for (Index m = 0; m < count; ++m, ++row) {
            for (Index j = 0; j < dim; ++j) points(row, j) = centers(c, j) + noise(rng);
            truth[row] = static_cast<int>(c);
        }
    }
    return {Dataset<double>(std::move(points)), std::move(truth)};
}

LabeledDataset gen_moons(Index n, double jitter, std::uint64_t seed) {
    if (n < 2) throw ArgumentError("gen_moons: n must be >= 2");
    if (!(jitter >= 0.0)) throw ArgumentError("gen_moons: jitter must be >= 0");

    const double pi = std::acos(-1.0);
    const Index n_outer = n / 2;
    const Index n_inner = n - n_outer;
    auto angle = [pi](Index i, Index count) {
        return count > 1 ? pi * static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    };

    PointMatrix<double> points(n, 2);
    Eigen::VectorXi truth(n);
    for (Index i = 0; i < n_outer; ++i) {
        const double t = angle(i, n_outer);
        points(i, 0) = std::cos(t);
        points(i, 1) = std::sin(t);
        truth[i] = 0;
    }
    for (Index i = 0; i < n_inner; ++i) {
        const double t = angle(i, n_inner);
        points(n_outer + i, 0) = 1.0 - std::cos(t);
        points(n_outer + i, 1) = 0.5 - std::sin(t);
        truth[n_outer + i] = 1;
    }
    if (jitter > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, jitter);
        for (Index i = 0; i < n; ++i) {
            points(i, 0) += noise(rng);
            points(i, 1) += noise(rng);
        }
    }
    return {Dataset<double>(std::move(points)), std::move(truth)};
}

Dataset<double> gen_uniform(Index n, Index dim, std::uint64_t seed) {
    if (n < 1 || dim < 1) throw ArgumentError("gen_uniform: n and dim must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PointMatrix<double> points(n, dim);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < dim; ++j) points(i, j) = unit(rng);
    }
    return Dataset<double>(std::move(points));
}

}  // namespace bfarm
