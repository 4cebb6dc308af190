// cluster: run Bacteria-Farm, k-means or DBSCAN on a dataset, benchmark them
// side by side, or sweep the front-runner count.
//
// Exit codes: 0 success, 1 algorithm failure, 2 configuration error.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bfarm/cli/commands.hpp"

namespace {

using namespace bfarm;
using namespace bfarm::cli;

struct InputFlags {
    std::string input;
    bool header = false;
    std::string gen;
    bool standardize = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--input", input, "CSV file, one point per row");
        cmd.add_flag("--header", header, "CSV has a header row");
        cmd.add_option("--gen", gen, "generator spec, e.g. blobs:n=300,k=3,spread=0.5");
        cmd.add_flag("--standardize", standardize, "z-score every column before clustering");
    }

    DatasetSource source() const {
        DatasetSource src;
        if (!input.empty()) src.csv = input;
        if (!gen.empty()) src.gen = parse_generator(gen);
        src.has_header = header;
        src.standardize = standardize;
        return src;
    }
};

struct BfFlags {
    double noise = 0.0;
    Index nfr = 5;
    double sample = 0.2;
    std::string phase1;
    std::string mode = "sequential";

    void attach(CLI::App& cmd) {
        cmd.add_option("--noise", noise, "fraction of points left as noise")->capture_default_str();
        cmd.add_option("--nfr", nfr, "front-runners per cluster")->capture_default_str();
        cmd.add_option("--sample", sample, "phase-1 sample fraction")->capture_default_str();
        cmd.add_option("--phase1", phase1, "kmeans:k=3 or dbscan:eps=0.3,min_pts=5");
        cmd.add_option("--mode", mode, "sequential or round_robin")->capture_default_str();
    }

    BfConfig config(std::uint64_t seed, std::optional<Index> natural_k) const {
        BfConfig bf;
        bf.noise_fraction = noise;
        bf.n_fr = nfr;
        bf.sample_fraction = sample;
        bf.seed = seed;
        bf.growth_mode = parse_growth_mode(mode);
        bf.phase1 = parse_phase1(phase1.empty() ? "kmeans" : phase1, seed, natural_k);
        return bf;
    }
};

std::optional<Index> generator_k(const DatasetSource& src) {
    if (!src.gen) return std::nullopt;
    if (src.gen->kind == "blobs") return src.gen->k;
    if (src.gen->kind == "moons") return Index{2};
    return std::nullopt;
}

std::vector<Index> parse_values(const std::string& text) {
    std::vector<Index> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stol(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--values: '" + item + "' is not an integer");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bacteria-Farm clustering and baselines"};
    app.set_config("--config", "", "optional config file (flags override it)");
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "cluster one dataset with one algorithm");
    InputFlags run_input;
    BfFlags run_bf;
    std::string algo = "bacteria-farm";
    std::optional<Index> k;
    int max_iter = 300;
    double tol = 1e-8;
    double eps = 0.5;
    Index min_pts = 5;
    std::uint64_t seed = 0;
    std::string out_labels, out_metrics, out_plot;
    bool no_metrics = false;
    bool no_timing = false;
    run_input.attach(*run);
    run_bf.attach(*run);
    run->add_option("--algo", algo, "bacteria-farm, kmeans or dbscan")->capture_default_str();
    run->add_option("--k", k, "k-means cluster count (defaults to the generator's k)");
    run->add_option("--max-iter", max_iter, "k-means iteration cap")->capture_default_str();
    run->add_option("--tol", tol, "k-means centroid-shift tolerance")->capture_default_str();
    run->add_option("--eps", eps, "DBSCAN radius")->capture_default_str();
    run->add_option("--min-pts", min_pts, "DBSCAN core threshold")->capture_default_str();
    run->add_option("--seed", seed, "random seed")->capture_default_str();
    run->add_option("--out-labels", out_labels, "labels CSV path");
    run->add_option("--out-metrics", out_metrics, "metrics JSON path");
    run->add_option("--out-plot", out_plot, "SVG scatter path (2-D data only)");
    run->add_flag("--no-metrics", no_metrics, "skip silhouette / Calinski-Harabasz");
    run->add_flag("--no-timing", no_timing, "report wall_time_ms as 0 for reproducible output");

    // bench
    auto* bench = app.add_subcommand("bench", "run every algorithm on every suite dataset");
    std::string suite, bench_out;
    bool bench_no_timing = false;
    bench->add_option("--suite", suite, "suite JSON")->required();
    bench->add_option("--out", bench_out, "report path (.csv or .json)")->required();
    bench->add_flag("--no-timing", bench_no_timing, "report wall_time_ms as 0");

    // sweep-nfr
    auto* sweep = app.add_subcommand("sweep-nfr", "compare fits across front-runner counts");
    InputFlags sweep_input;
    BfFlags sweep_bf;
    std::string values;
    std::string sweep_out;
    std::uint64_t sweep_seed = 0;
    bool sweep_no_timing = false;
    sweep_input.attach(*sweep);
    sweep_bf.attach(*sweep);
    sweep->add_option("--values", values, "comma-separated front-runner counts, e.g. 3,5,7")->required();
    sweep->add_option("--out", sweep_out, "output directory")->required();
    sweep->add_option("--seed", sweep_seed, "random seed")->capture_default_str();
    sweep->add_flag("--no-timing", sweep_no_timing, "report wall_time_ms as 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) {
            RunConfig cfg;
            cfg.input = run_input.source();
            cfg.algorithm = parse_algorithm(algo);
            cfg.seed = seed;
            const auto natural_k = generator_k(cfg.input);
            if (cfg.algorithm == Algorithm::bacteria_farm) {
                cfg.params.bf = run_bf.config(seed, natural_k);
            }
            if (cfg.algorithm == Algorithm::kmeans) {
                const auto chosen = k ? k : natural_k;
                if (!chosen) throw ConfigError("kmeans needs --k");
                cfg.params.kmeans = KMeansParams{*chosen, max_iter, tol, seed};
            }
            cfg.params.dbscan = DbscanParams{eps, min_pts};
            cfg.metrics = !no_metrics;
            cfg.timing = !no_timing;
            if (!out_labels.empty()) cfg.out_labels = out_labels;
            if (!out_metrics.empty()) cfg.out_metrics = out_metrics;
            if (!out_plot.empty()) cfg.out_plot = out_plot;
            return cmd_run(cfg);
        }
        if (*bench) {
            return cmd_bench(suite, bench_out, !bench_no_timing);
        }
        if (*sweep) {
            SweepConfig cfg;
            cfg.input = sweep_input.source();
            cfg.values = parse_values(values);
            cfg.seed = sweep_seed;
            cfg.bf = BfConfig{};
            cfg.bf.noise_fraction = sweep_bf.noise;
            cfg.bf.sample_fraction = sweep_bf.sample;
            cfg.bf.growth_mode = parse_growth_mode(sweep_bf.mode);
            cfg.phase1 = sweep_bf.phase1;
            cfg.timing = !sweep_no_timing;
            cfg.out_dir = sweep_out;
            return cmd_sweep_nfr(cfg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
