#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ruinlab/estimate.hpp"
#include "ruinlab/mc.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// One run of one subcommand. Serialized as a single JSON line.
struct RunRecord {
    std::string command;
    nlohmann::json params;  ///< ModelParams plus every setting that affects the result
    nlohmann::json result;  ///< Estimate, table or formula values
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    double wall_time = 0.0;  ///< seconds

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

nlohmann::json to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);
std::string serialize(const RunRecord& r);
RunRecord parse_record(std::string_view line);

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const Estimate& e);

/// CSV tables: comma separated, header row, LF endings, %.17g numbers,
/// empty field for an absent value.
void write_study_csv(std::ostream& os, std::span<const StudyRow> rows);
void write_tail_csv(std::ostream& os, const RuinTimeTail& tail);

/// Runs the tool with argv-style arguments (program name excluded). Records go
/// to `out`, diagnostics and usage to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruinlab::cli
