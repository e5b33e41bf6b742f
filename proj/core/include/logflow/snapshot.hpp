#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "logflow/grid.hpp"

namespace logflow {

/// A grid function at a known time of a known member of the tau family.
struct Snapshot {
  GridFunction u;
  double t = 0.0;
  double tau = 1.0;
};

enum class SnapshotFormat { Binary, Csv };

/// Snapshot file layout: the first line is a JSON header
/// {"format":"logflow-snapshot","version":1,"encoding":..., "n","L","m",
/// "margin","t","tau","label","count"} terminated by '\n'.
///   binary: followed by `count` little-endian float64 values, row-major.
///   csv:    followed by a column header line and one line per node
///           "x0[,x1[,x2]],value", every number printed with 17 significant
///           digits so that parsing restores the exact binary value.
void write_snapshot(const std::filesystem::path& path, const Snapshot& snap, SnapshotFormat format);
Snapshot read_snapshot(const std::filesystem::path& path);
SnapshotFormat detect_format(const std::filesystem::path& path);

/// Reads every snapshot file (*.bin, *.csv with a snapshot header) in `dir`,
/// sorted by time.
std::vector<Snapshot> read_trajectory(const std::filesystem::path& dir);

/// Writes snapshots as snap_00000.<ext>, snap_00001.<ext>, ... and returns the
/// written paths.
std::vector<std::filesystem::path> write_trajectory(const std::filesystem::path& dir,
                                                    const std::vector<Snapshot>& snaps,
                                                    SnapshotFormat format);

}  // namespace logflow
