#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcslab/classical_limit.hpp"
#include "rcslab/config.hpp"
#include "rcslab/diagnostics.hpp"
#include "rcslab/integrator.hpp"
#include "rcslab/meanfield.hpp"
#include "rcslab/relativistic.hpp"

namespace rcs {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

/// Hash of the canonical serialized config.
std::string config_hash(const RunConfig& config);

// ---- CSV ----------------------------------------------------------------
// Header `t,agent,x1,x2,x3,w1,w2,w3`, one row per agent per sample. When a
// config hash is given, a `# config_hash=<hex>` line precedes the header.

inline constexpr const char* kTrajectoryHeader = "t,agent,x1,x2,x3,w1,w2,w3";

std::string trajectory_csv(const Trajectory& traj, const std::string& hash = "");
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path,
                          const std::string& hash = "");

/// Samples in file order. Rows with the same t form one sample; agent
/// indices must run 0..N-1 within each sample.
std::vector<EnsembleState> parse_trajectory_csv(const std::string& text);
std::vector<EnsembleState> read_trajectory_csv(const std::filesystem::path& path);

/// Six numeric columns x1,x2,x3,w1,w2,w3 per row; an optional header line and
/// '#' comments are skipped.
PointCloud6D read_cloud_csv(const std::filesystem::path& path);
void write_cloud_csv(const PointCloud6D& cloud, const std::filesystem::path& path);

// ---- JSON ---------------------------------------------------------------

/// Throws IoError naming the JSON path of the first NaN or infinity.
void check_finite(const Json& doc);

/// check_finite, then writes doc with two-space indentation.
void write_json(const Json& doc, const std::filesystem::path& path);

/// Common envelope: schema version, report kind, tool version, config hash.
Json report_envelope(const std::string& kind, const std::string& hash);

Json to_json(const FlockingCertificate& cert);
Json to_json(const DiagnosticsSeries& series);
Json to_json(const LineFit& fit);
Json to_json(const LimitScanResult& result);
Json to_json(const KineticScanResult& result);
Json to_json(const MeanfieldScanResult& result);
Json to_json(const RelConstants& constants);
Json to_json(const RunHealth& health);
Json to_json(const SddiReport& report);

// ---- manifest -----------------------------------------------------------

struct ManifestFile {
  std::string path;
  std::string kind;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string parameters;  // canonical config text
  std::uint64_t seed = 0;
  std::string started;     // ISO-8601 UTC
  std::string finished;
  std::vector<ManifestFile> files;
};

std::string utc_timestamp();
Json to_json(const RunManifest& manifest);

}  // namespace rcs
