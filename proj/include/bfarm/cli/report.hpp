#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "bfarm/bacteria_farm.hpp"
#include "bfarm/dataset.hpp"
#include "bfarm/metrics.hpp"

namespace bfarm::cli {

/// `index,label` rows, noise written as the literal `noise`.
void write_labels_csv(std::ostream& out, const Assignment& a);
void write_labels_csv(const std::filesystem::path& path, const Assignment& a);

/// Metrics JSON object; undefined metrics and absent growth mode become null.
std::string metrics_json(const MetricsReport& m, std::optional<GrowthMode> mode, bool exhausted);

/// Scatter plot of a 2-D labelling: one <circle> per point, noise in grey.
void write_svg(std::ostream& out, const Dataset<double>& ds, const Assignment& a,
               const std::string& title);
void write_svg(const std::filesystem::path& path, const Dataset<double>& ds, const Assignment& a,
               const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bfarm::cli
