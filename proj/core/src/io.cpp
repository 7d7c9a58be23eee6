#include "hdcpd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hdcpd {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_full(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  std::size_t lo = cell.find_first_not_of(" \t\r");
  if (lo == std::string::npos) {
    throw ValidationError("empty cell at data row " + std::to_string(row) + ", column " +
                          std::to_string(col));
  }
  const std::size_t hi = cell.find_last_not_of(" \t\r");
  const std::string_view body(cell.data() + lo, hi - lo + 1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc{} || ptr != body.data() + body.size()) {
    throw ValidationError("cannot parse '" + std::string(body) + "' at data row " +
                          std::to_string(row) + ", column " + std::to_string(col));
  }
  if (!std::isfinite(value)) {
    throw ValidationError("non-finite value at data row " + std::to_string(row) + ", column " +
                          std::to_string(col));
  }
  return value;
}

ordered_json config_json(const ReportContext& context, double alpha, std::uint32_t permutations) {
  ordered_json j;
  j["command"] = context.command;
  j["input"] = context.input;
  j["scheme"] = context.scheme;
  j["alpha"] = alpha;
  j["permutations"] = permutations;
  return j;
}

}  // namespace

DataMatrix ingest_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0, data_row = 0, width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && has_header) continue;
    if (line.empty()) continue;
    ++data_row;
    const auto cells = split_csv_line(line);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw ValidationError("ragged row: data row " + std::to_string(data_row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(width));
    }
    std::vector<double> values;
    values.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      values.push_back(parse_cell(cells[c], data_row, c + 1));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ValidationError("'" + path.string() + "' holds no data rows");

  DataMatrix data(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), data.row(i).begin());
  }
  return data;
}

DataMatrix log_returns(const DataMatrix& prices) {
  if (prices.n() < 2) throw ValidationError("log_returns: need at least 2 price rows");
  for (std::size_t t = 0; t < prices.n(); ++t) {
    for (std::size_t i = 0; i < prices.p(); ++i) {
      if (!(prices.at(t, i) > 0.0)) {
        throw ValidationError("log_returns: nonpositive price at row " + std::to_string(t + 1) +
                              ", column " + std::to_string(i + 1));
      }
    }
  }
  DataMatrix out(prices.n() - 1, prices.p());
  for (std::size_t t = 0; t + 1 < prices.n(); ++t) {
    for (std::size_t i = 0; i < prices.p(); ++i) {
      out.at(t, i) = std::log(prices.at(t + 1, i) / prices.at(t, i));
    }
  }
  return out;
}

std::string report_to_json(const SingleResult& result, const ReportContext& context,
                           double runtime_seconds) {
  ordered_json j;
  ordered_json cfg = config_json(context, result.alpha, result.permutations);
  cfg["seed"] = result.seed;
  j["config"] = cfg;
  j["locations"] = ordered_json::array();
  j["details"] = ordered_json::array();
  ordered_json detail;
  detail["tau"] = result.tau_hat;
  detail["new_regime_start"] = result.tau_hat + 1;
  detail["segment"] = {result.profile.s, result.profile.e};
  detail["statistic"] = result.m_n;
  detail["threshold"] = result.threshold;
  detail["p_value"] = result.p_value;
  detail["rejected"] = result.rejected;
  j["details"].push_back(detail);
  if (result.rejected) j["locations"].push_back(result.tau_hat);
  j["runtime_seconds"] = runtime_seconds;
  return j.dump(2) + "\n";
}

std::string report_to_json(const ChangePointSet& result, const ReportContext& context,
                           double runtime_seconds) {
  ordered_json j;
  ordered_json cfg = config_json(context, result.config.alpha, result.config.permutations);
  cfg["intervals"] = result.config.intervals;
  cfg["seed"] = result.config.seed;
  j["config"] = cfg;
  j["locations"] = result.locations;
  j["details"] = ordered_json::array();
  for (const auto& rec : result.details) {
    ordered_json detail;
    detail["tau"] = rec.tau;
    detail["new_regime_start"] = rec.tau + 1;
    detail["segment"] = {rec.segment_s, rec.segment_e};
    detail["statistic"] = rec.statistic;
    detail["threshold"] = rec.threshold;
    detail["interval"] = {rec.interval_s, rec.interval_e};
    detail["order_found"] = rec.order_found;
    j["details"].push_back(detail);
  }
  j["runtime_seconds"] = runtime_seconds;
  return j.dump(2) + "\n";
}

std::string quantile_table_to_json(const QuantileTable& table) {
  ordered_json j;
  j["method"] = table.method == LimitMethod::pair_array ? "pair-array" : "data-based";
  j["reps"] = table.reps;
  j["grid"] = table.grid;
  if (table.method == LimitMethod::data_based) j["p"] = table.data_p;
  j["probs"] = table.probs;
  j["quantiles"] = table.quants;
  return j.dump(2) + "\n";
}

std::string quantile_table_to_csv(const QuantileTable& table) {
  std::string out = "prob,quantile\n";
  for (std::size_t i = 0; i < table.probs.size(); ++i) {
    out += format_full(table.probs[i]);
    out += ',';
    out += format_full(table.quants[i]);
    out += '\n';
  }
  return out;
}

std::string profile_to_csv(const ScanProfile& profile) {
  std::string out = "b,weight,t,weighted_t\n";
  for (const auto& sv : profile.splits) {
    out += std::to_string(sv.b);
    out += ',';
    out += format_full(sv.weight);
    out += ',';
    out += format_full(sv.t);
    out += ',';
    out += format_full(sv.value);
    out += '\n';
  }
  return out;
}

std::string dataset_to_csv(const LabeledDataset& dataset) {
  std::string out;
  out.reserve(dataset.data.data.size() * 12);
  for (std::size_t t = 0; t < dataset.data.n(); ++t) {
    const auto row = dataset.data.row(t);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += format_full(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string dataset_sidecar_json(const LabeledDataset& dataset) {
  ordered_json j;
  j["scenario"] = dataset.scenario;
  j["n"] = dataset.data.n();
  j["p"] = dataset.data.p();
  j["true_change_points"] = dataset.true_cps;
  ordered_json params;
  for (const auto& [name, value] : dataset.params) params[name] = value;
  j["params"] = params;
  return j.dump(2) + "\n";
}

std::string experiment_to_csv(const ExperimentSummary& summary) {
  std::string out = "rep,ari,n_locations,locations,runtime_seconds\n";
  for (const auto& rec : summary.reps) {
    out += std::to_string(rec.rep);
    out += ',';
    out += format_full(rec.ari);
    out += ',';
    out += std::to_string(rec.locations.size());
    out += ',';
    for (std::size_t i = 0; i < rec.locations.size(); ++i) {
      if (i > 0) out += ';';
      out += std::to_string(rec.locations[i]);
    }
    out += ',';
    out += format_full(rec.runtime_seconds);
    out += '\n';
  }
  return out;
}

std::string experiment_summary_json(const ExperimentSummary& summary) {
  ordered_json j;
  j["scenario"] = std::string(scenario_name(summary.config.scenario));
  j["n"] = summary.config.n;
  j["p"] = summary.config.p;
  j["method"] = summary.config.method == DetectMethod::single ? "single" : "wbs";
  j["scheme"] = std::string(scheme_kind_name(summary.config.scheme));
  j["alpha"] = summary.config.alpha;
  j["permutations"] = summary.config.permutations;
  if (summary.config.method == DetectMethod::wbs) j["intervals"] = summary.config.intervals;
  j["reps"] = summary.config.reps;
  j["seed"] = summary.config.seed;
  j["mean_ari"] = summary.mean_ari;
  j["sd_ari"] = summary.sd_ari;
  j["detection_fraction"] = summary.detection_fraction;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace hdcpd
