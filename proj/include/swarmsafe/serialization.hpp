#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarmsafe/core.hpp"
#include "swarmsafe/metrics.hpp"
#include "swarmsafe/missions.hpp"
#include "swarmsafe/simulator.hpp"

namespace swarmsafe {

using Json = nlohmann::ordered_json;

/// Flat object with exactly the SimConfig field names. Parsing accepts a
/// subset (missing keys keep `base` values) and rejects unknown keys.
Json config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const Json& j, const SimConfig& base = {});

Json mission_to_json(const MissionSpec& m);
MissionSpec mission_from_json(const Json& j);
Json missions_to_json(const std::vector<MissionSpec>& ms);
std::vector<MissionSpec> missions_from_json(const Json& j);

Json batch_spec_to_json(const BatchSpec& b);
BatchSpec batch_spec_from_json(const Json& j);

/// Reads/writes a whole JSON document. IoError on filesystem failure,
/// ConfigError on a parse error.
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Header of the per-mission trajectory CSV.
inline constexpr const char* kLogCsvHeader = "step,time,agent,x,y,ux,uy,deg,flags";

std::string mission_log_csv(const MissionLog& log);
Json mission_log_json(const MissionLog& log);
/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
void write_mission_log(const MissionLog& log, const std::filesystem::path& dir, const std::string& stem);
/// Reconstructs positions, controls, times, config, mission and termination.
/// Graph and energy fields of the steps are left empty.
MissionLog read_mission_log(const std::filesystem::path& dir, const std::string& stem);

/// Header of batch_report.csv.
inline constexpr const char* kBatchCsvHeader =
    "policy,missions,coll,disconn,mu_ipm,sd_ipm,mu_lambda2_min,sd_lambda2_min,mu_d_min,sd_d_min";

std::string batch_report_csv(const BatchReport& r);
Json batch_report_json(const std::string& batch_id, const BatchResult& result);

} // namespace swarmsafe
