#include "bfarm/cli/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace bfarm::cli {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

constexpr std::array<const char*, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#393b79",
};
constexpr const char* kNoiseColour = "#b0b0b0";

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void write_labels_csv(std::ostream& out, const Assignment& a) {
    out << "index,label\n";
    for (Index i = 0; i < a.size(); ++i) {
        out << i << ',';
        if (a.is_noise(i)) out << "noise";
        else out << a[i];
        out << '\n';
    }
}

void write_labels_csv(const std::filesystem::path& path, const Assignment& a) {
    auto out = open_for_write(path);
    write_labels_csv(out, a);
}

std::string metrics_json(const MetricsReport& m, std::optional<GrowthMode> mode, bool exhausted) {
    nlohmann::ordered_json j;
    j["silhouette_mean"] = m.silhouette_mean ? nlohmann::ordered_json(*m.silhouette_mean) : nullptr;
    j["calinski_harabasz"] =
        m.calinski_harabasz ? nlohmann::ordered_json(*m.calinski_harabasz) : nullptr;
    j["n_clustered"] = m.n_clustered;
    j["n_noise"] = m.n_noise;
    j["wall_time_ms"] = m.wall_time_ms;
    j["growth_mode"] = mode ? nlohmann::ordered_json(std::string(to_string(*mode))) : nullptr;
    j["exhausted"] = exhausted;
    return j.dump(2) + "\n";
}

void write_svg(std::ostream& out, const Dataset<double>& ds, const Assignment& a,
               const std::string& title) {
    if (ds.dim() != 2) throw ArgumentError("scatter plots need 2-D data");
    constexpr double size = 600.0;
    constexpr double margin = 20.0;
    const Eigen::RowVector2d lo = ds.points().colwise().minCoeff();
    const Eigen::RowVector2d hi = ds.points().colwise().maxCoeff();
    const double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
    const double scale = (size - 2.0 * margin) / extent;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    out << "<title>" << xml_escape(title) << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Noise first so clustered points draw on top.
    for (int pass = 0; pass < 2; ++pass) {
        for (Index i = 0; i < ds.size(); ++i) {
            const bool noise = a.is_noise(i);
            if ((pass == 0) != noise) continue;
            const double x = margin + (ds.points()(i, 0) - lo[0]) * scale;
            const double y = size - margin - (ds.points()(i, 1) - lo[1]) * scale;
            const char* colour =
                noise ? kNoiseColour : kPalette[static_cast<std::size_t>(a[i]) % kPalette.size()];
            out << "<circle cx=\"" << fixed2(x) << "\" cy=\"" << fixed2(y) << "\" r=\"3\" fill=\""
                << colour << "\"/>\n";
        }
    }
    out << "</svg>\n";
}

void write_svg(const std::filesystem::path& path, const Dataset<double>& ds, const Assignment& a,
               const std::string& title) {
    auto out = open_for_write(path);
    write_svg(out, ds, a, title);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_for_write(path);
    out << text;
}

}  // namespace bfarm::cli
