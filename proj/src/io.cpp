#include "rcslab/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "rcslab/text.hpp"

namespace rcs {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string config_hash(const RunConfig& config) { return fnv1a_hex(serialize_config(config)); }

namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, const std::string& hash) {
  std::string out;
  if (!hash.empty()) out += "# config_hash=" + hash + "\n";
  out += kTrajectoryHeader;
  out += "\n";
  for (const auto& s : traj.samples) {
    const std::string t = format_double(s.t);
    for (std::size_t a = 0; a < s.size(); ++a) {
      out += t;
      out += ',';
      out += std::to_string(a);
      for (int k = 0; k < 3; ++k) {
        out += ',';
        out += format_double(s.x[a][k]);
      }
      for (int k = 0; k < 3; ++k) {
        out += ',';
        out += format_double(s.w[a][k]);
      }
      out += '\n';
    }
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path,
                          const std::string& hash) {
  write_text(trajectory_csv(traj, hash), path);
}

std::vector<EnsembleState> parse_trajectory_csv(const std::string& text) {
  std::vector<EnsembleState> samples;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (!header_seen) {
      if (body != kTrajectoryHeader)
        throw IoError("trajectory csv: line " + std::to_string(lineno) + ": unexpected header");
      header_seen = true;
      continue;
    }
    const auto fields = split(body, ',');
    if (fields.size() != 8)
      throw IoError("trajectory csv: line " + std::to_string(lineno) + ": expected 8 fields");
    double vals[8];
    for (std::size_t i = 0; i < 8; ++i) {
      if (i == 1) continue;
      const auto v = parse_double(fields[i]);
      if (!v) throw IoError("trajectory csv: line " + std::to_string(lineno) + ": bad number");
      vals[i] = *v;
    }
    const auto agent = parse_integer(fields[1]);
    if (!agent || *agent < 0)
      throw IoError("trajectory csv: line " + std::to_string(lineno) + ": bad agent index");
    if (*agent == 0) {
      samples.emplace_back();
      samples.back().t = vals[0];
    }
    if (samples.empty() || static_cast<std::size_t>(*agent) != samples.back().size() ||
        vals[0] != samples.back().t)
      throw IoError("trajectory csv: line " + std::to_string(lineno) + ": rows out of order");
    samples.back().x.emplace_back(vals[2], vals[3], vals[4]);
    samples.back().w.emplace_back(vals[5], vals[6], vals[7]);
  }
  if (!header_seen) throw IoError("trajectory csv: missing header");
  return samples;
}

std::vector<EnsembleState> read_trajectory_csv(const std::filesystem::path& path) {
  return parse_trajectory_csv(read_text(path));
}

PointCloud6D read_cloud_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  PointCloud6D cloud;
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    const bool header = first && (fields.empty() || !parse_double(fields.front()));
    first = false;
    if (header) continue;
    if (fields.size() != 6)
      throw IoError(path.string() + ": line " + std::to_string(lineno) + ": expected 6 columns");
    Point6 p;
    for (std::size_t k = 0; k < 6; ++k) {
      const auto v = parse_double(fields[k]);
      if (!v || !std::isfinite(*v))
        throw IoError(path.string() + ": line " + std::to_string(lineno) + ": bad number");
      p[k] = *v;
    }
    cloud.points.push_back(p);
  }
  if (cloud.points.empty()) throw IoError(path.string() + ": no points");
  return cloud;
}

void write_cloud_csv(const PointCloud6D& cloud, const std::filesystem::path& path) {
  std::string out = "x1,x2,x3,w1,w2,w3\n";
  for (const auto& p : cloud.points) {
    for (std::size_t k = 0; k < 6; ++k) {
      if (k) out += ',';
      out += format_double(p[k]);
    }
    out += '\n';
  }
  write_text(out, path);
}

namespace {

void walk_finite(const Json& node, const std::string& where) {
  if (node.is_number_float()) {
    if (!std::isfinite(node.get<double>()))
      throw IoError("non-finite value at " + (where.empty() ? std::string("/") : where));
  } else if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) walk_finite(it.value(), where + "/" + it.key());
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) walk_finite(node[i], where + "/" + std::to_string(i));
  }
}

// Infinity has a defined meaning in a few fields (an unsatisfiable
// inequality); those are written as null.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

void check_finite(const Json& doc) { walk_finite(doc, ""); }

void write_json(const Json& doc, const std::filesystem::path& path) {
  check_finite(doc);
  write_text(doc.dump(2) + "\n", path);
}

Json report_envelope(const std::string& kind, const std::string& hash) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["report"] = kind;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = hash;
  return j;
}

Json to_json(const FlockingCertificate& cert) {
  Json j;
  j["regime"] = cert.regime == Regime::particle ? "particle" : "kinetic";
  j["Dx0"] = cert.Dx0;
  j["Dw0"] = cert.Dw0;
  j["Lambda2"] = cert.Lambda2;
  j["Dx_inf"] = cert.Dx_inf;
  j["lambda"] = cert.lambda;
  j["condition_lhs"] = finite_or_null(cert.condition_lhs);
  j["condition_rhs"] = cert.condition_rhs;
  j["satisfied"] = cert.satisfied;
  j["printed_condition_lhs"] = finite_or_null(cert.printed_condition_lhs);
  j["printed_satisfied"] = cert.printed_satisfied;
  return j;
}

Json to_json(const DiagnosticsSeries& series) {
  Json j;
  std::vector<double> t, Dx, Dw, L, mom, E, speed;
  for (const auto& r : series) {
    t.push_back(r.t);
    Dx.push_back(r.Dx);
    Dw.push_back(r.Dw);
    L.push_back(r.L);
    mom.push_back(r.momentum_norm);
    E.push_back(r.E_total);
    speed.push_back(r.max_speed);
  }
  j["t"] = t;
  j["Dx"] = Dx;
  j["Dw"] = Dw;
  j["L"] = L;
  j["momentum_norm"] = mom;
  j["E_total"] = E;
  j["max_speed"] = speed;
  return j;
}

Json to_json(const LineFit& fit) {
  return Json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

Json to_json(const RunHealth& h) {
  return Json{{"momentum_ratio", h.momentum_ratio},
              {"max_momentum_norm", h.max_momentum_norm},
              {"max_energy_increase", h.max_energy_increase}};
}

Json to_json(const SddiReport& r) {
  return Json{{"samples_checked", r.samples_checked},
              {"violations_x", r.violations_x},
              {"violations_w", r.violations_w},
              {"max_violation_x", r.max_violation_x},
              {"max_violation_w", r.max_violation_w},
              {"passed", r.passed()}};
}

Json to_json(const LimitScanResult& result) {
  Json j;
  j["c_values"] = result.c_values;
  j["sup_delta"] = result.sup_delta;
  j["K"] = result.K;
  j["t_end"] = result.t_end;
  j["inversions"] = result.inversions;
  j["fit"] = result.fit ? to_json(*result.fit) : Json(nullptr);
  Json runs = Json::array();
  for (const auto& r : result.runs) {
    Json jr{{"c", r.c},
            {"sup_delta", r.sup_delta},
            {"delta0", r.delta0},
            {"lambda_cert", r.lambda_cert},
            {"Dx_inf", r.Dx_inf},
            {"health_relativistic", to_json(r.health_relativistic)},
            {"health_classical", to_json(r.health_classical)}};
    if (!r.t.empty()) {
      jr["t"] = r.t;
      jr["delta"] = r.delta;
    }
    runs.push_back(std::move(jr));
  }
  j["runs"] = std::move(runs);
  return j;
}

Json to_json(const KineticScanResult& result) {
  Json j;
  j["c_values"] = result.c_values;
  j["sup_w1"] = result.sup_w1;
  j["Dx0"] = result.Dx0;
  j["Dw0"] = result.Dw0;
  j["t_end"] = result.t_end;
  j["fit"] = result.fit ? to_json(*result.fit) : Json(nullptr);
  Json runs = Json::array();
  for (const auto& r : result.runs) {
    runs.push_back(Json{{"c", r.c},
                        {"sup_w1", r.sup_w1},
                        {"sup_coupling", r.sup_coupling},
                        {"max_gap", r.max_gap},
                        {"coupling_bound_holds", r.coupling_bound_holds},
                        {"lambda_cert", r.lambda_cert},
                        {"Dx_inf", r.Dx_inf},
                        {"flocking_ok", r.flocking_ok},
                        {"health_relativistic", to_json(r.health_relativistic)},
                        {"health_classical", to_json(r.health_classical)}});
  }
  j["runs"] = std::move(runs);
  return j;
}

Json to_json(const MeanfieldScanResult& result) {
  Json j;
  j["n_values"] = result.n_values;
  j["sup_w1"] = result.sup_w1;
  j["decreasing_trend"] = result.decreasing_trend;
  j["monotone"] = result.monotone;
  return j;
}

Json to_json(const RelConstants& c) {
  return Json{{"Lambda0", c.Lambda0},
              {"Lambda1", c.Lambda1},
              {"Lambda2", c.Lambda2},
              {"lambda", c.lambda},
              {"Dx_inf", c.Dx_inf}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const RunManifest& m) {
  Json j = report_envelope("manifest", m.config_hash);
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["parameters"] = m.parameters;
  j["started"] = m.started;
  j["finished"] = m.finished;
  Json files = Json::array();
  for (const auto& f : m.files) files.push_back(Json{{"path", f.path}, {"kind", f.kind}});
  j["files"] = std::move(files);
  return j;
}

}  // namespace rcs
