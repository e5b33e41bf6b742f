#include "logflow/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logflow/errors.hpp"

namespace logflow {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kMagic = "logflow-snapshot";

static_assert(std::endian::native == std::endian::little, "snapshot encoding assumes a little-endian host");

json header_for(const Snapshot& s, SnapshotFormat format) {
  const BoxDomain& d = s.u.domain();
  return json{{"format", kMagic},
              {"version", 1},
              {"encoding", format == SnapshotFormat::Binary ? "binary-f64le" : "csv"},
              {"n", d.n},
              {"L", d.half_width},
              {"m", d.points_per_axis},
              {"margin", d.interior_margin},
              {"t", s.t},
              {"tau", s.tau},
              {"label", s.u.label()},
              {"count", s.u.size()}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json read_header(std::istream& in, const fs::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty snapshot file");
  if (line.rfind("# ", 0) == 0) line = line.substr(2);
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": malformed snapshot header: " + e.what());
  }
  if (h.value("format", "") != kMagic) throw FormatError(path.string() + ": not a logflow snapshot");
  return h;
}

}  // namespace

void write_snapshot(const fs::path& path, const Snapshot& snap, SnapshotFormat format) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  const json header = header_for(snap, format);
  const auto values = snap.u.values();
  if (format == SnapshotFormat::Binary) {
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  } else {
    const BoxDomain& d = snap.u.domain();
    out << "# " << header.dump() << '\n';
    for (int k = 0; k < d.n; ++k) out << 'x' << k << ',';
    out << "value\n";
    for (std::size_t f = 0; f < values.size(); ++f) {
      const Point x = d.coordinate(f);
      for (int k = 0; k < d.n; ++k) out << format_double(x[k]) << ',';
      out << format_double(values[f]) << '\n';
    }
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

SnapshotFormat detect_format(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const json h = read_header(in, path);
  const std::string enc = h.value("encoding", "");
  if (enc == "binary-f64le") return SnapshotFormat::Binary;
  if (enc == "csv") return SnapshotFormat::Csv;
  throw FormatError(path.string() + ": unknown encoding '" + enc + "'");
}

Snapshot read_snapshot(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const json h = read_header(in, path);
  BoxDomain d;
  try {
    d.n = h.at("n").get<int>();
    d.half_width = h.at("L").get<double>();
    d.points_per_axis = h.at("m").get<int>();
    d.interior_margin = h.value("margin", 0);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": incomplete header: " + e.what());
  }
  d.validate();
  const std::size_t count = d.node_count();
  std::vector<double> values(count);
  const std::string enc = h.value("encoding", "");
  if (enc == "binary-f64le") {
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
      throw FormatError(path.string() + ": truncated binary payload");
  } else if (enc == "csv") {
    std::string line;
    std::getline(in, line);  // column header
    for (std::size_t f = 0; f < count; ++f) {
      if (!std::getline(in, line)) throw FormatError(path.string() + ": truncated CSV payload");
      const auto comma = line.rfind(',');
      const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
      const char* first = field.data();
      const auto res = std::from_chars(first, first + field.size(), values[f]);
      if (res.ec != std::errc{}) throw FormatError(path.string() + ": bad value on data line " + std::to_string(f + 1));
    }
  } else {
    throw FormatError(path.string() + ": unknown encoding '" + enc + "'");
  }
  Snapshot s{GridFunction(d, std::move(values), h.value("label", "")), h.value("t", 0.0), h.value("tau", 1.0)};
  return s;
}

std::vector<Snapshot> read_trajectory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw MissingArtifact(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.rfind("snap_", 0) == 0) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Snapshot> snaps;
  snaps.reserve(files.size());
  for (const auto& f : files) snaps.push_back(read_snapshot(f));
  std::stable_sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.t < b.t; });
  if (snaps.empty()) throw MissingArtifact("no snapshots (snap_*) in " + dir.string());
  return snaps;
}

std::vector<fs::path> write_trajectory(const fs::path& dir, const std::vector<Snapshot>& snaps,
                                       SnapshotFormat format) {
  fs::create_directories(dir);
  std::vector<fs::path> paths;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.%s", i, format == SnapshotFormat::Binary ? "bin" : "csv");
    paths.push_back(dir / name);
    write_snapshot(paths.back(), snaps[i], format);
  }
  return paths;
}

}  // namespace logflow
