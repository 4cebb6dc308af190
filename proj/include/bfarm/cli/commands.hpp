#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bfarm/bacteria_farm.hpp"
#include "bfarm/dataset.hpp"
#include "bfarm/metrics.hpp"

namespace bfarm::cli {

/// Invalid command-line or suite configuration (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitAlgorithm = 1;
inline constexpr int kExitConfig = 2;

/// Parsed form of `blobs:n=300,k=3,spread=0.5`, `moons:n=400,jitter=0.05`
/// or `uniform:n=1000,dim=2`. Every kind also accepts `seed=`.
struct GeneratorSpec {
    std::string kind;
    Index n = 300;
    Index k = 3;
    double spread = 0.5;
    double jitter = 0.05;
    Index dim = 2;
    std::optional<std::uint64_t> seed;
};

GeneratorSpec parse_generator(const std::string& text);
std::string to_string(const GeneratorSpec& spec, std::uint64_t default_seed);

/// `kmeans:k=3[,max_iter=..,tol=..]` or `dbscan:eps=0.3[,min_pts=5]`.
Phase1 parse_phase1(const std::string& text, std::uint64_t seed, std::optional<Index> default_k);

struct DatasetSource {
    std::optional<std::filesystem::path> csv;
    bool has_header = false;
    std::optional<GeneratorSpec> gen;
    bool standardize = false;
};

struct LoadedDataset {
    Dataset<double> data;
    std::optional<Eigen::VectorXi> truth;
    std::optional<Index> natural_k;  ///< cluster count implied by the generator
};

LoadedDataset load_dataset(const DatasetSource& src, std::uint64_t seed);

enum class Algorithm { bacteria_farm, kmeans, dbscan };

std::string_view to_string(Algorithm algo);
Algorithm parse_algorithm(std::string_view text);

struct AlgorithmParams {
    BfConfig bf;
    KMeansParams kmeans;
    DbscanParams dbscan;
};

struct ClusterOutcome {
    Assignment assignment;
    MetricsReport metrics;
    std::optional<GrowthMode> growth_mode;
    bool exhausted = false;
};

/// Runs one algorithm, timing only the clustering call.
ClusterOutcome run_algorithm(const Dataset<double>& ds, Algorithm algo, const AlgorithmParams& params,
                             bool compute_metrics, bool timing);

struct RunConfig {
    DatasetSource input;
    Algorithm algorithm = Algorithm::bacteria_farm;
    AlgorithmParams params;
    bool metrics = true;
    bool timing = true;
    std::optional<std::filesystem::path> out_labels;
    std::optional<std::filesystem::path> out_metrics;
    std::optional<std::filesystem::path> out_plot;
    std::uint64_t seed = 0;
};

int cmd_run(const RunConfig& cfg);

/// One bench cell; `error` is set instead of metrics when the cell failed.
struct BenchRow {
    std::string dataset;
    std::string algorithm;
    Index n = 0;
    Index dim = 0;
    std::string params;
    std::optional<MetricsReport> metrics;
    std::string growth_mode;
    std::string error;
};

struct BenchAverage {
    std::string algorithm;
    Index cells = 0;  ///< successful cells contributing to the averages
    std::optional<double> silhouette_mean;
    std::optional<double> calinski_harabasz;
    double n_clustered = 0;
    double n_noise = 0;
    double wall_time_ms = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchAverage> averages;
};

struct BenchDataset {
    std::string name;
    DatasetSource source;
    std::optional<Index> k;
    std::optional<double> eps;
};

struct BenchRequest {
    std::uint64_t seed = 0;
    std::vector<BenchDataset> datasets;
    std::vector<Algorithm> algorithms;
    KMeansParams kmeans;
    Index dbscan_min_pts = 5;
    std::optional<double> dbscan_eps;  ///< empty: tune per dataset by grid scan
    BfConfig bf;
    std::string bf_phase1 = "kmeans";  ///< "kmeans" uses the dataset k
    bool timing = true;
};

/// Parses a suite JSON document. Relative CSV paths resolve against `base`.
BenchRequest parse_suite(const std::string& json_text, const std::filesystem::path& base);

BenchReport run_bench(const BenchRequest& req);

/// Writes CSV, or JSON when the path ends in `.json`.
void write_bench_report(const std::filesystem::path& path, const BenchReport& report);

int cmd_bench(const std::filesystem::path& suite, const std::filesystem::path& out, bool timing);

/// DBSCAN radius chosen by scanning a grid of multiples of the median
/// min_pts-nearest-neighbour distance and keeping the best silhouette among
/// settings with >= 2 clusters and <= 10% noise.
struct DbscanTuning {
    double eps = 0.0;
    double silhouette = 0.0;
};
std::optional<DbscanTuning> tune_dbscan_eps(const Dataset<double>& ds, Index min_pts);

struct SweepConfig {
    DatasetSource input;
    std::vector<Index> values;
    BfConfig bf;
    std::string phase1;  ///< empty: kmeans with the generator's k
    bool timing = true;
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
};

struct SweepResult {
    Eigen::MatrixXd agreement;
    std::vector<std::optional<double>> silhouettes;
    std::vector<Assignment> assignments;
};

SweepResult run_sweep(const Dataset<double>& ds, const std::vector<Index>& values, const BfConfig& bf);

int cmd_sweep_nfr(const SweepConfig& cfg);

}  // namespace bfarm::cli
