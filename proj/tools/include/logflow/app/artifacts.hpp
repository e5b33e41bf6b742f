#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "logflow/analysis.hpp"
#include "logflow/expander.hpp"
#include "logflow/flow.hpp"
#include "logflow/mcf.hpp"

namespace logflow::app {

std::string sha256_hex(const std::filesystem::path& file);

void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

std::string monitors_csv(const std::vector<MonitorRecord>& log);
std::string profile_csv(const ExpanderProfile& profile);
/// t, seed index, r components, F components, |dF/dt - H| (blank at the
/// end points where no centred derivative exists).
std::string paths_csv(const std::vector<ParticlePath>& paths, const std::vector<Snapshot>& trajectory);

/// One seed per line, coordinates separated by commas or blanks; '#' starts
/// a comment.
std::vector<Point> read_seeds(const std::filesystem::path& file, int n);

/// Writes `dir`/plotdata.csv in long format (quantity,t,value) from
/// monitors.csv and report.json. Throws MissingArtifact when either is absent.
std::filesystem::path emit_plotdata(const std::filesystem::path& dir);

/// Re-encodes a snapshot file.
void convert_snapshot(const std::filesystem::path& in, const std::filesystem::path& out, SnapshotFormat format);

nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const CertificationReport& rep);

}  // namespace logflow::app
