#pragma once

#include "pmme/conditions.hpp"
#include "pmme/estimator.hpp"
#include "pmme/montecarlo.hpp"

#include <string>
#include <vector>

namespace pmme {

inline constexpr int kReportSchemaVersion = 1;

/// JSON documents. Doubles are written in shortest round-trip form, which
/// reproduces the stored binary value exactly; non-finite values become null.
[[nodiscard]] std::string coefficients_json(const ExpansionCoefficients& c);
[[nodiscard]] std::string report_json(const MonteCarloReport& report);
[[nodiscard]] std::string conditions_json(const ConditionReport& report);
[[nodiscard]] std::string estimate_json(const MmeResult& result);

/// x, empirical, gaussian, edgeworth1, edgeworth2 at 17 significant digits.
/// The Edgeworth columns are the raw (unclipped) approximations.
[[nodiscard]] std::string cdf_csv(const std::vector<CdfRow>& rows);

struct PathRecord {
    std::uint32_t replication{0};
    std::uint32_t path_index{0};
    std::vector<double> times;
};

/// replication, path_index, event_time; one line per event.
[[nodiscard]] std::string paths_csv(const std::vector<PathRecord>& paths);

/// Writes `content` to `dir/name` through a temporary file and a rename, so
/// a reader never sees a partial artifact. Creates `dir` when missing.
void write_artifact(const std::string& dir, const std::string& name, const std::string& content);

} // namespace pmme
