#include "specreg/report_io.hpp"

#include "specreg/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

namespace specreg {

using nlohmann::json;

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string report_to_csv(const MCReport& report) {
    std::ostringstream os;
    os << "delta,rmse,rmse_stderr,oracle_inf,ratio,mean_steps,emergency_fraction,z_violations,replicates,seed\n";
    for (const auto& r : report.rows) {
        os << format_double(r.delta) << ',' << format_double(r.rmse) << ',' << format_double(r.rmse_stderr) << ','
           << format_double(r.oracle_inf) << ',' << format_double(r.ratio) << ',' << format_double(r.mean_steps)
           << ',' << format_double(r.emergency_fraction) << ',' << r.z_violations << ',' << r.replicates << ','
           << r.seed << '\n';
    }
    return os.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string report_to_json(const MCReport& report, bool with_timestamp) {
    json j;
    j["schema"] = kReportSchema;
    j["version"] = kArtifactVersion;
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"delta", r.delta},
                        {"rmse", r.rmse},
                        {"rmse_stderr", r.rmse_stderr},
                        {"oracle_inf", r.oracle_inf},
                        {"ratio", r.ratio},
                        {"mean_steps", r.mean_steps},
                        {"emergency_fraction", r.emergency_fraction},
                        {"z_violations", r.z_violations},
                        {"replicates", r.replicates},
                        {"seed", r.seed}});
    }
    j["rows"] = std::move(rows);
    j["rate_slope"] = report.rate_slope ? json(*report.rate_slope) : json(nullptr);
    j["rate_slope_theory"] = report.rate_slope_theory ? json(*report.rate_slope_theory) : json(nullptr);
    j["config"] = report.config_echo.empty() ? json(nullptr) : json::parse(report.config_echo);
    if (with_timestamp) j["metadata"] = {{"timestamp", utc_timestamp()}};
    return j.dump(2) + "\n";
}

MCReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != kReportSchema) throw ConfigError("report: unexpected schema");
    MCReport rep;
    for (const auto& r : j.at("rows")) {
        ReportRow row;
        row.delta = r.at("delta").get<double>();
        row.rmse = r.at("rmse").get<double>();
        row.rmse_stderr = r.at("rmse_stderr").get<double>();
        row.oracle_inf = r.at("oracle_inf").get<double>();
        row.ratio = r.at("ratio").get<double>();
        row.mean_steps = r.at("mean_steps").get<double>();
        row.emergency_fraction = r.at("emergency_fraction").get<double>();
        row.z_violations = r.at("z_violations").get<int>();
        row.replicates = r.at("replicates").get<int>();
        row.seed = r.at("seed").get<std::uint64_t>();
        rep.rows.push_back(row);
    }
    if (!j.at("rate_slope").is_null()) rep.rate_slope = j.at("rate_slope").get<double>();
    if (!j.at("rate_slope_theory").is_null()) rep.rate_slope_theory = j.at("rate_slope_theory").get<double>();
    if (j.contains("config") && !j.at("config").is_null()) rep.config_echo = j.at("config").dump();
    return rep;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        f << contents;
        f.flush();
        if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at '" + path.string() + "'");
    }
}

void export_report(const MCReport& report, const std::filesystem::path& path, ReportFormat format) {
    write_atomic(path, format == ReportFormat::Csv ? report_to_csv(report) : report_to_json(report));
}

}  // namespace specreg
