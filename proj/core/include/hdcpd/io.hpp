#pragma once

#include <filesystem>
#include <string>

#include "hdcpd/detect.hpp"
#include "hdcpd/eval.hpp"
#include "hdcpd/limitdist.hpp"
#include "hdcpd/simgen.hpp"
#include "hdcpd/types.hpp"

// File formats. Input CSV: comma-separated, optional single header row,
// UTF-8, '.' decimal, rows = time points, columns = coordinates. All
// numeric output uses 17 significant digits (CSV) or shortest round-trip
// decimals (JSON), so values survive a write/read cycle exactly.

namespace hdcpd {

/// Context echoed into every report.
struct ReportContext {
  std::string command;
  std::string input;
  std::string scheme;
};

DataMatrix ingest_csv(const std::filesystem::path& path, bool has_header);

/// Log-returns of a strictly positive price matrix: out(t, i) =
/// log(prices(t+1, i) / prices(t, i)), one row shorter than the input.
DataMatrix log_returns(const DataMatrix& prices);

// Report JSON. Stable keys: "config" (object), "locations" (array of
// ints), "details" (array of {"tau", "new_regime_start", "segment",
// "statistic", "threshold", ...}), "runtime_seconds" (number). The single
// test adds "p_value" and "rejected" to its detail record.
std::string report_to_json(const SingleResult& result, const ReportContext& context,
                           double runtime_seconds);
std::string report_to_json(const ChangePointSet& result, const ReportContext& context,
                           double runtime_seconds);

std::string quantile_table_to_json(const QuantileTable& table);
std::string quantile_table_to_csv(const QuantileTable& table);  // header "prob,quantile"

/// Statistic-curve CSV with header "b,weight,t,weighted_t".
std::string profile_to_csv(const ScanProfile& profile);

std::string dataset_to_csv(const LabeledDataset& dataset);
std::string dataset_sidecar_json(const LabeledDataset& dataset);

std::string experiment_to_csv(const ExperimentSummary& summary);    // one row per rep
std::string experiment_summary_json(const ExperimentSummary& summary);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hdcpd
