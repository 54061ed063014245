#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fpp/criterion.hpp"
#include "fpp/graph.hpp"
#include "fpp/simulation.hpp"

namespace fpp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

GraphSpec parse_graph_spec(const Json& doc);
GraphSpec read_graph_spec(const std::string& path);
Json graph_spec_to_json(const GraphSpec& spec);

// Shortest decimal text that round-trips, so reruns give identical bytes.
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);

Table f_grid_table(const std::vector<FGridRow>& rows);
Table replica_table(const SimulationSummary& summary);

Json to_json(const CertifiedValue& v);
Json to_json(const CriterionReport& report);
Json to_json(const SimulationSummary& summary);
Json to_json(const Estimate& e);

// Writes to `path`, or stdout for "-" or an empty path.
void write_text(const std::string& path, const std::string& content);

enum class ReportFormat { Json, Csv };
ReportFormat parse_format(const std::string& text);

// JSON documents are written whole; CSV writes `table` (header only when empty).
void emit_report(const Json& doc, const Table& table, ReportFormat format, const std::string& path);

}  // namespace fpp
