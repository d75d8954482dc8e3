#pragma once

// Table and JSON rendering for every report type. JSON keys keep insertion
// order, so output is byte-stable for identical inputs.

#include <string>
#include <string_view>

#include <json.hpp>

#include "exo/emg.hpp"
#include "exo/experiment_io.hpp"
#include "exo/volume_transfer.hpp"

namespace exo {

enum class ReportFormat { Table, Json };

/// Throws UsageError for names other than table, json.
ReportFormat parse_report_format(std::string_view name);

using Json = nlohmann::ordered_json;

Json to_json(const TransferReport& report);
/// Inverse of to_json(TransferReport). Throws ParseError on missing keys.
TransferReport transfer_report_from_json(const Json& j);

Json to_json(const OptimizationResult& result, const DesignIndicators& indicators);
Json to_json(const ValidationReport& report);
Json to_json(const emg::AssistanceReport& report);

std::string render_report(const TransferReport& report, ReportFormat format);
std::string render_report(const OptimizationResult& result, const DesignIndicators& indicators,
                          ReportFormat format);
std::string render_report(const ValidationReport& report, ReportFormat format);
std::string render_report(const emg::AssistanceReport& report, ReportFormat format);

/// "+12.34%" style, two decimals.
std::string format_percent(double fraction);

}  // namespace exo
