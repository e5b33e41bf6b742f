#include "logflow/app/artifacts.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace logflow::app {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

void append_series(std::string& out, const std::string& quantity, const nlohmann::json& t, const nlohmann::json& v) {
  if (!t.is_array() || !v.is_array()) return;
  for (std::size_t k = 0; k < t.size() && k < v.size(); ++k)
    out += quantity + "," + num(t[k].get<double>()) + "," + num(v[k].get<double>()) + "\n";
}

}  // namespace

std::string sha256_hex(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw MissingArtifact("cannot read " + file.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char two[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(two, sizeof two, "%02x", digest[i]);
    hex += two;
  }
  return hex;
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw FormatError("cannot write " + file.string());
  out << text;
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw MissingArtifact("missing artifact " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j) { write_text(file, j.dump(2) + "\n"); }

std::string monitors_csv(const std::vector<MonitorRecord>& log) {
  std::string out = "t,lambda_min,lambda_max,grad_sq_window,d3_norm,dt,residual\n";
  for (const MonitorRecord& r : log)
    out += num(r.t) + "," + num(r.lambda_min) + "," + num(r.lambda_max) + "," + num(r.grad_sq_window) + "," +
           num(r.d3_norm) + "," + num(r.dt) + "," + num(r.residual) + "\n";
  return out;
}

std::string profile_csv(const ExpanderProfile& profile) {
  std::string out = "r,u,du,d2u\n";
  for (const RadialSample& s : profile.samples())
    out += num(s.r) + "," + num(s.u) + "," + num(s.du) + "," + num(s.d2u) + "\n";
  return out;
}

std::string paths_csv(const std::vector<ParticlePath>& paths, const std::vector<Snapshot>& trajectory) {
  if (trajectory.empty()) return "";
  const int n = trajectory.front().u.domain().n;
  std::string out = "t,seed";
  for (int k = 0; k < n; ++k) out += ",r" + std::to_string(k);
  for (int k = 0; k < n; ++k) out += ",Fx" + std::to_string(k);
  for (int k = 0; k < n; ++k) out += ",Fy" + std::to_string(k);
  out += ",deviation\n";
  std::vector<CurvatureField> fields;
  for (const Snapshot& s : trajectory) fields.push_back(curvature_field(s.u));
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const ParticlePath& path = paths[p];
    for (std::size_t k = 0; k < path.t.size(); ++k) {
      out += num(path.t[k]) + "," + std::to_string(p);
      for (int i = 0; i < n; ++i) out += "," + num(path.r[k][i]);
      for (int i = 0; i < n; ++i) out += "," + num(path.F[k].x[i]);
      for (int i = 0; i < n; ++i) out += "," + num(path.F[k].y[i]);
      out += ",";
      if (k > 0 && k + 1 < path.t.size()) {
        const double h1 = path.t[k] - path.t[k - 1], h2 = path.t[k + 1] - path.t[k];
        const double w0 = -h2 / (h1 * (h1 + h2)), w1 = (h2 - h1) / (h1 * h2), w2 = h1 / (h2 * (h1 + h2));
        const NullVector H = fields[k].at(path.r[k]);
        NullVector diff;
        for (int i = 0; i < n; ++i) {
          diff.x[i] = w0 * path.F[k - 1].x[i] + w1 * path.F[k].x[i] + w2 * path.F[k + 1].x[i] - H.x[i];
          diff.y[i] = w0 * path.F[k - 1].y[i] + w1 * path.F[k].y[i] + w2 * path.F[k + 1].y[i] - H.y[i];
        }
        out += num(max_component(diff, n));
      }
      out += "\n";
    }
  }
  return out;
}

std::vector<Point> read_seeds(const std::filesystem::path& file, int n) {
  std::stringstream in(read_text(file));
  std::vector<Point> seeds;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::stringstream ls(line);
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (!ls.eof()) throw FormatError(file.string() + ":" + std::to_string(lineno) + ": not a number");
    if (v.empty()) continue;
    if (static_cast<int>(v.size()) != n)
      throw FormatError(file.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(n) +
                        " coordinates");
    Point p{};
    for (int k = 0; k < n; ++k) p[k] = v[k];
    seeds.push_back(p);
  }
  return seeds;
}

std::filesystem::path emit_plotdata(const std::filesystem::path& dir) {
  const std::string monitors = read_text(dir / "monitors.csv");
  const nlohmann::json report = nlohmann::json::parse(read_text(dir / "report.json"));

  std::string out = "quantity,t,value\n";
  std::stringstream ms(monitors);
  std::string line;
  std::vector<std::string> header;
  if (std::getline(ms, line)) header = split_csv_line(line);
  while (std::getline(ms, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size() || cells.empty()) continue;
    for (std::size_t c = 1; c < cells.size(); ++c) out += header[c] + "," + cells[0] + "," + cells[c] + "\n";
  }

  if (report.contains("ratefits"))
    for (const auto& fit : report["ratefits"]) append_series(out, fit["quantity"].get<std::string>(), fit["t"], fit["q"]);
  if (report.contains("blowdown")) append_series(out, "blowdown_error", report["blowdown"]["t"], report["blowdown"]["error"]);
  if (report.contains("plane")) {
    append_series(out, "plane_affine_deviation", report["plane"]["t"], report["plane"]["affine_deviation"]);
    append_series(out, "plane_max_gradient", report["plane"]["t"], report["plane"]["max_gradient"]);
  }
  if (report.contains("dual_flow"))
    append_series(out, "dual_flow_residual", report["dual_flow"]["times"], report["dual_flow"]["residual_per_time"]);

  const auto path = dir / "plotdata.csv";
  write_text(path, out);
  return path;
}

void convert_snapshot(const std::filesystem::path& in, const std::filesystem::path& out, SnapshotFormat format) {
  write_snapshot(out, read_snapshot(in), format);
}

nlohmann::json to_json(const RateFit& fit) {
  nlohmann::json j{{"quantity", fit.quantity}, {"t", fit.t}, {"q", fit.q}, {"identically_zero", fit.identically_zero}};
  if (!fit.identically_zero) {
    j["exponent"] = fit.exponent;
    j["constant"] = fit.constant;
    j["residual"] = fit.residual;
  }
  return j;
}

nlohmann::json to_json(const CertificationReport& r) {
  return {{"certified", r.certified},
          {"reason", r.reason},
          {"residual_norm", r.residual_norm},
          {"condition_B", {r.condition_B.lambda_min, r.condition_B.lambda_max}},
          {"condition_A_defect", r.condition_A_defect},
          {"bernstein_residual", r.bernstein_residual},
          {"w_oscillation", r.w_oscillation},
          {"quadratic_case", r.quadratic_case},
          {"w_interior_extremum", r.w_interior_extremum}};
}

}  // namespace logflow::app
