#include "bfarm/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "bfarm/cli/report.hpp"
#include "json.hpp"

namespace bfarm::cli {

namespace {

using KeyValues = std::map<std::string, std::string>;

// "kind:a=1,b=2" -> ("kind", {a: 1, b: 2})
std::pair<std::string, KeyValues> split_spec(const std::string& text) {
    const auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    KeyValues kv;
    if (colon == std::string::npos) return {kind, kv};
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("malformed parameter '" + item + "' in '" + text + "'");
        }
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return {kind, kv};
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("parameter " + key + "='" + value + "' is not a valid number");
    }
    return out;
}

void reject_unknown(const KeyValues& kv, std::initializer_list<const char*> allowed,
                    const std::string& what) {
    for (const auto& [key, value] : kv) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ConfigError("unknown parameter '" + key + "' for " + what);
        }
    }
}

std::string number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string describe(const Phase1& p) {
    return std::visit(
        [](const auto& params) -> std::string {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, KMeansParams>) {
                return "kmeans:k=" + std::to_string(params.k);
            } else {
                return "dbscan:eps=" + number(params.eps) + ",min_pts=" + std::to_string(params.min_pts);
            }
        },
        p);
}

std::string describe_bf(const BfConfig& bf) {
    return "noise=" + number(bf.noise_fraction) + ",nfr=" + std::to_string(bf.n_fr) +
           ",sample=" + number(bf.sample_fraction) + ",phase1=" + describe(bf.phase1);
}

}  // namespace

GeneratorSpec parse_generator(const std::string& text) {
    auto [kind, kv] = split_spec(text);
    GeneratorSpec spec;
    spec.kind = kind;
    if (kind == "blobs") {
        reject_unknown(kv, {"n", "k", "spread", "dim", "seed"}, "blobs");
    } else if (kind == "moons") {
        reject_unknown(kv, {"n", "jitter", "seed"}, "moons");
        spec.n = 400;
        spec.k = 2;
    } else if (kind == "uniform") {
        reject_unknown(kv, {"n", "dim", "seed"}, "uniform");
        spec.n = 1000;
    } else {
        throw ConfigError("unknown generator '" + kind + "' (expected blobs, moons or uniform)");
    }
    if (kv.count("n")) spec.n = parse_number<Index>("n", kv["n"]);
    if (kv.count("k")) spec.k = parse_number<Index>("k", kv["k"]);
    if (kv.count("spread")) spec.spread = parse_number<double>("spread", kv["spread"]);
    if (kv.count("jitter")) spec.jitter = parse_number<double>("jitter", kv["jitter"]);
    if (kv.count("dim")) spec.dim = parse_number<Index>("dim", kv["dim"]);
    if (kv.count("seed")) spec.seed = parse_number<std::uint64_t>("seed", kv["seed"]);
    return spec;
}

std::string to_string(const GeneratorSpec& spec, std::uint64_t default_seed) {
    const std::uint64_t seed = spec.seed.value_or(default_seed);
    std::string out = spec.kind + ":n=" + std::to_string(spec.n);
    if (spec.kind == "blobs") {
        out += ",k=" + std::to_string(spec.k) + ",spread=" + number(spec.spread) +
               ",dim=" + std::to_string(spec.dim);
    } else if (spec.kind == "moons") {
        out += ",jitter=" + number(spec.jitter);
    } else {
        out += ",dim=" + std::to_string(spec.dim);
    }
    return out + ",seed=" + std::to_string(seed);
}

Phase1 parse_phase1(const std::string& text, std::uint64_t seed, std::optional<Index> default_k) {
    auto [kind, kv] = split_spec(text);
    if (kind == "kmeans") {
        reject_unknown(kv, {"k", "max_iter", "tol", "seed"}, "kmeans phase-1");
        KMeansParams p;
        p.seed = seed;
        if (kv.count("k")) {
            p.k = parse_number<Index>("k", kv["k"]);
        } else if (default_k) {
            p.k = *default_k;
        } else {
            throw ConfigError("phase-1 kmeans needs k (e.g. kmeans:k=3)");
        }
        if (kv.count("max_iter")) p.max_iter = parse_number<int>("max_iter", kv["max_iter"]);
        if (kv.count("tol")) p.tol = parse_number<double>("tol", kv["tol"]);
        if (kv.count("seed")) p.seed = parse_number<std::uint64_t>("seed", kv["seed"]);
        if (p.k < 1) throw ConfigError("phase-1 kmeans k must be >= 1");
        return p;
    }
    if (kind == "dbscan") {
        reject_unknown(kv, {"eps", "min_pts"}, "dbscan phase-1");
        if (!kv.count("eps")) throw ConfigError("phase-1 dbscan needs eps (e.g. dbscan:eps=0.3)");
        DbscanParams p;
        p.eps = parse_number<double>("eps", kv["eps"]);
        if (kv.count("min_pts")) p.min_pts = parse_number<Index>("min_pts", kv["min_pts"]);
        if (!(p.eps > 0.0) || p.min_pts < 1) throw ConfigError("phase-1 dbscan needs eps > 0, min_pts >= 1");
        return p;
    }
    throw ConfigError("unknown phase-1 algorithm '" + kind + "' (expected kmeans or dbscan)");
}

LoadedDataset load_dataset(const DatasetSource& src, std::uint64_t seed) {
    if (src.csv.has_value() == src.gen.has_value()) {
        throw ConfigError("exactly one input source is required (--input or --gen)");
    }
    std::optional<LoadedDataset> out;
    if (src.csv) {
        out.emplace(LoadedDataset{load_csv(*src.csv, src.has_header), std::nullopt, std::nullopt});
    } else {
        const GeneratorSpec& g = *src.gen;
        const std::uint64_t s = g.seed.value_or(seed);
        if (g.kind == "blobs") {
            auto gen = gen_blobs(g.n, g.k, g.spread, s, g.dim);
            out.emplace(LoadedDataset{std::move(gen.data), std::move(gen.truth), g.k});
        } else if (g.kind == "moons") {
            auto gen = gen_moons(g.n, g.jitter, s);
            out.emplace(LoadedDataset{std::move(gen.data), std::move(gen.truth), Index{2}});
        } else {
            out.emplace(LoadedDataset{gen_uniform(g.n, g.dim, s), std::nullopt, std::nullopt});
        }
    }
    if (src.standardize) out->data = standardize(out->data);
    return std::move(*out);
}

std::string_view to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::bacteria_farm: return "bacteria-farm";
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::dbscan: return "dbscan";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view text) {
    if (text == "bacteria-farm" || text == "bacteria_farm" || text == "bf") return Algorithm::bacteria_farm;
    if (text == "kmeans") return Algorithm::kmeans;
    if (text == "dbscan") return Algorithm::dbscan;
    throw ConfigError("unknown algorithm '" + std::string(text) +
                      "' (expected bacteria-farm, kmeans or dbscan)");
}

ClusterOutcome run_algorithm(const Dataset<double>& ds, Algorithm algo, const AlgorithmParams& params,
                             bool compute_metrics, bool timing) {
    ClusterOutcome out;
    const auto start = std::chrono::steady_clock::now();
    switch (algo) {
        case Algorithm::bacteria_farm: {
            auto fitted = fit(ds, params.bf);
            out.assignment = std::move(fitted.assignment);
            out.exhausted = fitted.exhausted;
            out.growth_mode = params.bf.growth_mode;
            break;
        }
        case Algorithm::kmeans:
            out.assignment = kmeans(ds, params.kmeans).assignment;
            break;
        case Algorithm::dbscan:
            out.assignment = dbscan(ds, params.dbscan);
            break;
    }
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    if (compute_metrics) {
        out.metrics = evaluate(ds, out.assignment, ms);
    } else {
        out.metrics.n_clustered = out.assignment.n_clustered();
        out.metrics.n_noise = out.assignment.n_noise();
        out.metrics.wall_time_ms = ms;
    }
    return out;
}

namespace {

void validate_params(Algorithm algo, const AlgorithmParams& p) {
    switch (algo) {
        case Algorithm::bacteria_farm:
            validate(p.bf);
            break;
        case Algorithm::kmeans:
            if (p.kmeans.k < 1 || p.kmeans.max_iter < 1 || !(p.kmeans.tol >= 0.0)) {
                throw ConfigError("kmeans needs k >= 1, max_iter >= 1, tol >= 0");
            }
            break;
        case Algorithm::dbscan:
            if (!(p.dbscan.eps > 0.0) || p.dbscan.min_pts < 1) {
                throw ConfigError("dbscan needs eps > 0 and min_pts >= 1");
            }
            break;
    }
}

}  // namespace

int cmd_run(const RunConfig& cfg) {
    std::optional<LoadedDataset> loaded;
    try {
        validate_params(cfg.algorithm, cfg.params);
        loaded.emplace(load_dataset(cfg.input, cfg.seed));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    const Dataset<double>& ds = loaded->data;
    try {
        const ClusterOutcome outcome =
            run_algorithm(ds, cfg.algorithm, cfg.params, cfg.metrics, cfg.timing);
        if (outcome.exhausted) {
            std::cerr << "warning: points ran out before every cluster budget was met\n";
        }
        if (cfg.out_labels) write_labels_csv(*cfg.out_labels, outcome.assignment);
        if (cfg.out_metrics) {
            write_text(*cfg.out_metrics,
                       metrics_json(outcome.metrics, outcome.growth_mode, outcome.exhausted));
        }
        if (cfg.out_plot) {
            if (ds.dim() == 2) {
                write_svg(*cfg.out_plot, ds, outcome.assignment, std::string(to_string(cfg.algorithm)));
            } else {
                std::cerr << "warning: plot skipped, data has " << ds.dim() << " dimensions\n";
            }
        }
        if (!cfg.out_labels && !cfg.out_metrics) {
            std::cout << metrics_json(outcome.metrics, outcome.growth_mode, outcome.exhausted);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAlgorithm;
    }
    return kExitOk;
}

std::optional<DbscanTuning> tune_dbscan_eps(const Dataset<double>& ds, Index min_pts) {
    const Index n = ds.size();
    if (n < 2) return std::nullopt;
    // Distance at which each probe point would see min_pts points (itself included).
    const Index rank = std::clamp<Index>(min_pts - 1, 1, n - 1);
    const Index stride = std::max<Index>(1, n / 2000);
    std::vector<double> kdist;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; i += stride) {
        for (Index j = 0; j < n; ++j) d[j] = (ds.point(i) - ds.point(j)).norm();
        std::nth_element(d.begin(), d.begin() + rank, d.end());
        kdist.push_back(d[rank]);
    }
    std::nth_element(kdist.begin(), kdist.begin() + kdist.size() / 2, kdist.end());
    const double base = kdist[kdist.size() / 2];
    if (!(base > 0.0)) return std::nullopt;

    std::optional<DbscanTuning> best;
    for (double mult : {0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0}) {
        const double eps = base * mult;
        const Assignment a = dbscan(ds, DbscanParams{eps, min_pts});
        if (a.n_clusters() < 2) continue;
        if (static_cast<double>(a.n_noise()) > 0.1 * static_cast<double>(n)) continue;
        const double s = silhouette_mean(ds, a);
        if (!best || s > best->silhouette) best = DbscanTuning{eps, s};
    }
    return best;
}

BenchRequest parse_suite(const std::string& json_text, const std::filesystem::path& base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("suite is not valid JSON: ") + e.what());
    }
    try {
        BenchRequest req;
        req.seed = j.value("seed", std::uint64_t{0});
        if (!j.contains("datasets") || !j["datasets"].is_array() || j["datasets"].empty()) {
            throw ConfigError("suite needs a non-empty 'datasets' array");
        }
        for (const auto& d : j["datasets"]) {
            BenchDataset bd;
            if (d.contains("gen")) {
                bd.source.gen = parse_generator(d["gen"].get<std::string>());
            }
            if (d.contains("csv")) {
                std::filesystem::path p = d["csv"].get<std::string>();
                bd.source.csv = p.is_relative() ? base / p : p;
                bd.source.has_header = d.value("header", false);
            }
            if (bd.source.csv.has_value() == bd.source.gen.has_value()) {
                throw ConfigError("each suite dataset needs exactly one of 'gen' or 'csv'");
            }
            bd.source.standardize = d.value("standardize", false);
            bd.name = d.value("name", d.contains("gen") ? d["gen"].get<std::string>()
                                                        : d["csv"].get<std::string>());
            if (d.contains("k")) bd.k = d["k"].get<Index>();
            if (d.contains("eps")) bd.eps = d["eps"].get<double>();
            req.datasets.push_back(std::move(bd));
        }
        const std::vector<std::string> algos =
            j.value("algorithms", std::vector<std::string>{"kmeans", "dbscan", "bacteria-farm"});
        if (algos.empty()) throw ConfigError("suite needs at least one algorithm");
        for (const auto& a : algos) req.algorithms.push_back(parse_algorithm(a));

        if (j.contains("kmeans")) {
            const auto& k = j["kmeans"];
            req.kmeans.max_iter = k.value("max_iter", req.kmeans.max_iter);
            req.kmeans.tol = k.value("tol", req.kmeans.tol);
        }
        if (j.contains("dbscan")) {
            const auto& d = j["dbscan"];
            req.dbscan_min_pts = d.value("min_pts", req.dbscan_min_pts);
            if (d.contains("eps") && !d["eps"].is_null()) req.dbscan_eps = d["eps"].get<double>();
        }
        if (j.contains("bacteria_farm")) {
            const auto& b = j["bacteria_farm"];
            req.bf.noise_fraction = b.value("noise", req.bf.noise_fraction);
            req.bf.n_fr = b.value("nfr", req.bf.n_fr);
            req.bf.sample_fraction = b.value("sample", req.bf.sample_fraction);
            req.bf.growth_mode = parse_growth_mode(b.value("mode", std::string("sequential")));
            req.bf_phase1 = b.value("phase1", req.bf_phase1);
        }
        validate(req.bf);
        return req;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed suite: ") + e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

BenchReport run_bench(const BenchRequest& req) {
    BenchReport report;
    for (const auto& bd : req.datasets) {
        std::optional<LoadedDataset> loaded;
        std::string load_error;
        try {
            loaded.emplace(load_dataset(bd.source, req.seed));
        } catch (const std::exception& e) {
            load_error = e.what();
        }
        for (Algorithm algo : req.algorithms) {
            BenchRow row;
            row.dataset = bd.name;
            row.algorithm = std::string(to_string(algo));
            if (!loaded) {
                row.error = load_error;
                report.rows.push_back(std::move(row));
                continue;
            }
            const Dataset<double>& ds = loaded->data;
            row.n = ds.size();
            row.dim = ds.dim();
            const std::optional<Index> k = bd.k ? bd.k : loaded->natural_k;
            try {
                AlgorithmParams params;
                switch (algo) {
                    case Algorithm::kmeans:
                        if (!k) throw ConfigError("dataset has no k for kmeans");
                        params.kmeans = req.kmeans;
                        params.kmeans.k = *k;
                        params.kmeans.seed = req.seed;
                        row.params = "k=" + std::to_string(*k);
                        break;
                    case Algorithm::dbscan: {
                        params.dbscan.min_pts = req.dbscan_min_pts;
                        if (bd.eps || req.dbscan_eps) {
                            params.dbscan.eps = bd.eps ? *bd.eps : *req.dbscan_eps;
                        } else {
                            const auto tuned = tune_dbscan_eps(ds, req.dbscan_min_pts);
                            if (!tuned) throw Error("no eps in the scan grid gives >= 2 clusters");
                            params.dbscan.eps = tuned->eps;
                        }
                        row.params = "eps=" + number(params.dbscan.eps) +
                                     ",min_pts=" + std::to_string(params.dbscan.min_pts);
                        break;
                    }
                    case Algorithm::bacteria_farm:
                        params.bf = req.bf;
                        params.bf.seed = req.seed;
                        params.bf.phase1 = parse_phase1(req.bf_phase1, req.seed, k);
                        row.params = describe_bf(params.bf);
                        row.growth_mode = std::string(to_string(params.bf.growth_mode));
                        break;
                }
                row.metrics = run_algorithm(ds, algo, params, true, req.timing).metrics;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            report.rows.push_back(std::move(row));
        }
    }

    for (Algorithm algo : req.algorithms) {
        BenchAverage avg;
        avg.algorithm = std::string(to_string(algo));
        double sil = 0, ch = 0;
        Index n_sil = 0, n_ch = 0;
        for (const auto& row : report.rows) {
            if (row.algorithm != avg.algorithm || !row.metrics) continue;
            ++avg.cells;
            const auto& m = *row.metrics;
            if (m.silhouette_mean) {
                sil += *m.silhouette_mean;
                ++n_sil;
            }
            if (m.calinski_harabasz) {
                ch += *m.calinski_harabasz;
                ++n_ch;
            }
            avg.n_clustered += static_cast<double>(m.n_clustered);
            avg.n_noise += static_cast<double>(m.n_noise);
            avg.wall_time_ms += m.wall_time_ms;
        }
        if (n_sil > 0) avg.silhouette_mean = sil / static_cast<double>(n_sil);
        if (n_ch > 0) avg.calinski_harabasz = ch / static_cast<double>(n_ch);
        if (avg.cells > 0) {
            avg.n_clustered /= static_cast<double>(avg.cells);
            avg.n_noise /= static_cast<double>(avg.cells);
            avg.wall_time_ms /= static_cast<double>(avg.cells);
        }
        report.averages.push_back(std::move(avg));
    }
    return report;
}

void write_bench_report(const std::filesystem::path& path, const BenchReport& report) {
    auto opt = [](const std::optional<double>& v) { return v ? number(*v) : std::string(); };
    std::ostringstream out;
    if (path.extension() == ".json") {
        auto jopt = [](const std::optional<double>& v) {
            return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        nlohmann::ordered_json j;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : report.rows) {
            nlohmann::ordered_json row;
            row["dataset"] = r.dataset;
            row["algorithm"] = r.algorithm;
            row["n"] = r.n;
            row["dim"] = r.dim;
            row["params"] = r.params;
            row["silhouette_mean"] = r.metrics ? jopt(r.metrics->silhouette_mean) : nullptr;
            row["calinski_harabasz"] = r.metrics ? jopt(r.metrics->calinski_harabasz) : nullptr;
            row["n_clustered"] = r.metrics ? nlohmann::ordered_json(r.metrics->n_clustered) : nullptr;
            row["n_noise"] = r.metrics ? nlohmann::ordered_json(r.metrics->n_noise) : nullptr;
            row["wall_time_ms"] = r.metrics ? nlohmann::ordered_json(r.metrics->wall_time_ms) : nullptr;
            row["growth_mode"] = r.growth_mode.empty() ? nlohmann::ordered_json(nullptr)
                                                       : nlohmann::ordered_json(r.growth_mode);
            row["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.error);
            j["rows"].push_back(std::move(row));
        }
        j["averages"] = nlohmann::ordered_json::array();
        for (const auto& a : report.averages) {
            nlohmann::ordered_json row;
            row["algorithm"] = a.algorithm;
            row["cells"] = a.cells;
            row["silhouette_mean"] = jopt(a.silhouette_mean);
            row["calinski_harabasz"] = jopt(a.calinski_harabasz);
            row["n_clustered"] = a.n_clustered;
            row["n_noise"] = a.n_noise;
            row["wall_time_ms"] = a.wall_time_ms;
            j["averages"].push_back(std::move(row));
        }
        out << j.dump(2) << '\n';
    } else {
        out << "dataset,algorithm,n,dim,params,silhouette_mean,calinski_harabasz,n_clustered,"
               "n_noise,wall_time_ms,growth_mode,error\n";
        for (const auto& r : report.rows) {
            out << csv_quote(r.dataset) << ',' << r.algorithm << ',' << r.n << ',' << r.dim << ','
                << csv_quote(r.params) << ',';
            if (r.metrics) {
                out << opt(r.metrics->silhouette_mean) << ',' << opt(r.metrics->calinski_harabasz)
                    << ',' << r.metrics->n_clustered << ',' << r.metrics->n_noise << ','
                    << number(r.metrics->wall_time_ms);
            } else {
                out << ",,,,";
            }
            out << ',' << r.growth_mode << ',' << csv_quote(r.error) << '\n';
        }
        for (const auto& a : report.averages) {
            out << "AVERAGE," << a.algorithm << ",,,cells=" << a.cells << ','
                << opt(a.silhouette_mean) << ',' << opt(a.calinski_harabasz) << ','
                << number(a.n_clustered) << ',' << number(a.n_noise) << ','
                << number(a.wall_time_ms) << ",,\n";
        }
    }
    write_text(path, out.str());
}

int cmd_bench(const std::filesystem::path& suite, const std::filesystem::path& out, bool timing) {
    BenchRequest req;
    try {
        std::ifstream in(suite);
        if (!in) throw ConfigError("cannot read suite " + suite.string());
        std::stringstream buf;
        buf << in.rdbuf();
        req = parse_suite(buf.str(), suite.parent_path());
        req.timing = timing;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const BenchReport report = run_bench(req);
        write_bench_report(out, report);
        for (const auto& r : report.rows) {
            if (!r.error.empty()) {
                std::cerr << "cell " << r.dataset << " / " << r.algorithm << " failed: " << r.error << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAlgorithm;
    }
    return kExitOk;
}

SweepResult run_sweep(const Dataset<double>& ds, const std::vector<Index>& values, const BfConfig& bf) {
    SweepResult out;
    for (Index v : values) {
        BfConfig cfg = bf;
        cfg.n_fr = v;
        auto fitted = fit(ds, cfg);
        try {
            out.silhouettes.emplace_back(silhouette_mean(ds, fitted.assignment));
        } catch (const UndefinedMetricError&) {
            out.silhouettes.emplace_back(std::nullopt);
        }
        out.assignments.push_back(std::move(fitted.assignment));
    }
    const auto m = static_cast<Index>(values.size());
    out.agreement.resize(m, m);
    for (Index a = 0; a < m; ++a) {
        for (Index b = 0; b < m; ++b) {
            out.agreement(a, b) = a == b ? 1.0 : label_agreement(out.assignments[a], out.assignments[b]);
        }
    }
    return out;
}

int cmd_sweep_nfr(const SweepConfig& cfg) {
    std::optional<LoadedDataset> loaded;
    BfConfig bf = cfg.bf;
    try {
        if (cfg.values.empty()) throw ConfigError("--values needs at least one front-runner count");
        for (Index v : cfg.values) {
            if (v < 1) throw ConfigError("front-runner counts must be >= 1");
        }
        loaded.emplace(load_dataset(cfg.input, cfg.seed));
        bf.seed = cfg.seed;
        bf.phase1 = parse_phase1(cfg.phase1.empty() ? "kmeans" : cfg.phase1, cfg.seed, loaded->natural_k);
        validate(bf);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const Dataset<double>& ds = loaded->data;
        const auto start = std::chrono::steady_clock::now();
        const SweepResult sweep = run_sweep(ds, cfg.values, bf);
        const double ms = cfg.timing
            ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()
            : 0.0;

        std::ostringstream matrix;
        matrix << "n_fr";
        for (Index v : cfg.values) matrix << ',' << v;
        matrix << '\n';
        double min_agreement = 1.0;
        for (std::size_t a = 0; a < cfg.values.size(); ++a) {
            matrix << cfg.values[a];
            for (std::size_t b = 0; b < cfg.values.size(); ++b) {
                const double v = sweep.agreement(static_cast<Index>(a), static_cast<Index>(b));
                min_agreement = std::min(min_agreement, v);
                matrix << ',' << number(v);
            }
            matrix << '\n';
        }
        write_text(cfg.out_dir / "agreement.csv", matrix.str());

        nlohmann::ordered_json summary;
        summary["values"] = cfg.values;
        summary["silhouette_mean"] = nlohmann::ordered_json::array();
        for (const auto& s : sweep.silhouettes) {
            summary["silhouette_mean"].push_back(s ? nlohmann::ordered_json(*s) : nlohmann::ordered_json(nullptr));
        }
        summary["min_agreement"] = min_agreement;
        summary["growth_mode"] = std::string(to_string(bf.growth_mode));
        summary["params"] = describe_bf(bf);
        summary["wall_time_ms"] = ms;
        write_text(cfg.out_dir / "summary.json", summary.dump(2) + "\n");

        for (std::size_t i = 0; i < cfg.values.size(); ++i) {
            const std::string tag = "nfr" + std::to_string(cfg.values[i]);
            write_labels_csv(cfg.out_dir / ("labels_" + tag + ".csv"), sweep.assignments[i]);
            if (ds.dim() == 2) {
                write_svg(cfg.out_dir / ("plot_" + tag + ".svg"), ds, sweep.assignments[i],
                          "bacteria-farm n_fr=" + std::to_string(cfg.values[i]));
            }
        }
        std::cout << "min pairwise agreement: " << number(min_agreement) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAlgorithm;
    }
    return kExitOk;
}

}  // namespace bfarm::cli
