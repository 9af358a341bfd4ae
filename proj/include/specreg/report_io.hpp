#pragma once

#include "specreg/mc_harness.hpp"

#include <filesystem>
#include <string>

namespace specreg {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr const char* kReportSchema = "specreg-report/1";

enum class ReportFormat { Csv, Json };

ReportFormat parse_format(const std::string& name);

/// 17 significant digits, the representation used in every output file.
std::string format_double(double x);

/// Current UTC time as ISO 8601, e.g. 2024-06-01T12:00:00Z.
std::string utc_timestamp();

/// CSV header: delta,rmse,rmse_stderr,oracle_inf,ratio,mean_steps,emergency_fraction,
/// z_violations,replicates,seed. One row per ladder entry.
std::string report_to_csv(const MCReport& report);

/// JSON with "schema", "version", per-delta "rows", optional rate slopes, the config
/// echo, and "metadata.timestamp" (the only non-deterministic field).
std::string report_to_json(const MCReport& report, bool with_timestamp = true);

MCReport report_from_json(const std::string& text);

/// Writes to a temporary sibling and renames over path. Throws std::runtime_error on I/O failure.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

void export_report(const MCReport& report, const std::filesystem::path& path, ReportFormat format);

}  // namespace specreg
