#include "bfarm/metrics.hpp"

#include <limits>

namespace bfarm {

namespace {

// Minimum-cost perfect matching on a square cost matrix (Hungarian method,
// potentials form). Returns the column matched to each row.
std::vector<Index> min_cost_matching(const Eigen::MatrixXd& cost) {
    const Index n = cost.rows();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), way_cost(n + 1);
    std::vector<Index> match(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (Index row = 1; row <= n; ++row) {
        match[0] = row;
        Index col0 = 0;
        std::fill(way_cost.begin(), way_cost.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col0] = 1;
            const Index r0 = match[col0];
            double delta = inf;
            Index col1 = 0;
            for (Index col = 1; col <= n; ++col) {
                if (used[col]) continue;
                const double reduced = cost(r0 - 1, col - 1) - u[r0] - v[col];
                if (reduced < way_cost[col]) {
                    way_cost[col] = reduced;
                    way[col] = col0;
                }
                if (way_cost[col] < delta) {
                    delta = way_cost[col];
                    col1 = col;
                }
            }
            for (Index col = 0; col <= n; ++col) {
                if (used[col]) {
                    u[match[col]] += delta;
                    v[col] -= delta;
                } else {
                    way_cost[col] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const Index col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<Index> row_to_col(n);
    for (Index col = 1; col <= n; ++col) row_to_col[match[col] - 1] = col - 1;
    return row_to_col;
}

}  // namespace

double label_agreement(const Assignment& a, const Assignment& b) {
    if (a.size() != b.size()) throw ShapeError("label_agreement: length mismatch");
    if (a.size() == 0) return 1.0;
    std::map<int, Index> ids_a, ids_b;
    for (Index i = 0; i < a.size(); ++i) {
        if (!a.is_noise(i)) ids_a.emplace(a[i], 0);
        if (!b.is_noise(i)) ids_b.emplace(b[i], 0);
    }
    Index next = 0;
    for (auto& [label, id] : ids_a) id = next++;
    next = 0;
    for (auto& [label, id] : ids_b) id = next++;

    const Index size = std::max<Index>(1, std::max(ids_a.size(), ids_b.size()));
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(size, size);
    Index both_noise = 0;
    for (Index i = 0; i < a.size(); ++i) {
        if (a.is_noise(i) && b.is_noise(i)) {
            ++both_noise;
        } else if (!a.is_noise(i) && !b.is_noise(i)) {
            counts(ids_a.at(a[i]), ids_b.at(b[i])) += 1.0;
        }
    }
    const auto matching = min_cost_matching(-counts);
    double matched = static_cast<double>(both_noise);
    for (Index r = 0; r < size; ++r) matched += counts(r, matching[r]);
    return matched / static_cast<double>(a.size());
}

double label_agreement(const Assignment& a, const Eigen::VectorXi& truth) {
    return label_agreement(a, Assignment(truth));
}

}  // namespace bfarm
