#include "fpp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "fpp/errors.hpp"

namespace fpp {

namespace {

VertexId vertex_id(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(ErrorKind::InvalidSpec, "vertex ids must be strings or integers");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

GraphSpec parse_graph_spec(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidSpec, "graph document must be an object");
  GraphSpec spec;
  try {
    if (doc.contains("builtin")) {
      spec.builtin = doc.at("builtin").get<std::string>();
      const Json params = doc.value("params", Json::object());
      if (!params.is_object()) throw Error(ErrorKind::InvalidSpec, "params must be an object");
      for (const auto& [key, value] : params.items()) {
        if (key == "q") {
          spec.q = value.get<int>();
        } else if (key == "k") {
          spec.k = value.get<int>();
        } else if (key == "l") {
          spec.l = value.get<int>();
        } else if (key == "lambda") {
          spec.lambda = value.get<double>();
        } else {
          throw Error(ErrorKind::InvalidSpec, "unknown builtin parameter '" + key + "'");
        }
      }
      return spec;
    }
    if (!doc.contains("vertices") || !doc.contains("edges")) {
      throw Error(ErrorKind::InvalidSpec, "expected 'vertices' and 'edges' or 'builtin'");
    }
    for (const auto& v : doc.at("vertices")) spec.vertices.push_back(vertex_id(v));
    for (const auto& e : doc.at("edges")) {
      EdgeSpec edge;
      edge.from = vertex_id(e.at("from"));
      edge.to = vertex_id(e.at("to"));
      edge.directed = e.value("directed", false);
      edge.intensity = e.value("intensity", 1.0);
      edge.multiplicity = e.value("multiplicity", 1);
      spec.edges.push_back(edge);
    }
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::InvalidSpec, ex.what());
  }
  return spec;
}

GraphSpec read_graph_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::exception& ex) {
    throw Error(ErrorKind::InvalidSpec, path + ": " + ex.what());
  }
  return parse_graph_spec(doc);
}

Json graph_spec_to_json(const GraphSpec& spec) {
  Json doc;
  if (spec.builtin) {
    doc["builtin"] = *spec.builtin;
    Json params = Json::object();
    const std::string& b = *spec.builtin;
    if (b == "Kq") params["q"] = spec.q;
    if (b == "path") params["k"] = spec.k;
    if (b == "calibrated_chain") {
      params["l"] = spec.l;
      params["lambda"] = spec.lambda;
    }
    doc["params"] = params;
    return doc;
  }
  doc["vertices"] = spec.vertices;
  doc["edges"] = Json::array();
  for (const auto& e : spec.edges) {
    doc["edges"].push_back({{"from", e.from},
                            {"to", e.to},
                            {"directed", e.directed},
                            {"intensity", e.intensity},
                            {"multiplicity", e.multiplicity}});
  }
  return doc;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

Table f_grid_table(const std::vector<FGridRow>& rows) {
  Table t{{"s", "t", "f_value", "f_err"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.s), format_number(r.t), format_number(r.value),
                      format_number(r.err)});
  }
  return t;
}

Table replica_table(const SimulationSummary& summary) {
  Table t{{"replica", "time", "geodesic_length"}, {}};
  for (std::size_t i = 0; i < summary.replica_times.size(); ++i) {
    t.rows.push_back({std::to_string(i), format_number(summary.replica_times[i]),
                      std::to_string(summary.replica_lengths[i])});
  }
  return t;
}

Json to_json(const CertifiedValue& v) { return {{"value", v.value}, {"abs_err", v.abs_err}}; }

Json to_json(const Estimate& e) {
  return {{"estimate", e.estimate}, {"stderr", e.stderr_}, {"samples", e.samples}};
}

Json to_json(const CriterionReport& r) {
  Json doc{{"classification", to_string(r.classification)},
           {"t_star", r.t_star},
           {"t_star_err", r.t_star_err},
           {"sup_value", r.sup_value},
           {"sup_err", r.sup_err},
           {"argmax", {{"s", r.argmax_s}, {"t", r.argmax_t}}},
           {"max_upper", r.max_upper},
           {"grid_stats",
            {{"coarse_points", r.grid_stats.coarse_points},
             {"refined_points", r.grid_stats.refined_points},
             {"depth_reached", r.grid_stats.depth_reached}}}};
  if (r.margin) {
    doc["margin"] = {{"s", r.margin->s},
                     {"t", r.margin->t},
                     {"alpha", r.margin->alpha},
                     {"c", r.margin->c},
                     {"max_tilted_sum", r.margin->max_tilted_sum},
                     {"max_tilted_err", r.margin->max_tilted_err}};
  } else {
    doc["margin"] = nullptr;
  }
  return doc;
}

namespace {

Json summary_json(const SampleSummary& s) {
  return {{"mean", s.mean},
          {"stderr", s.stderr_},
          {"quantiles",
           {{"p05", s.quantiles[0]},
            {"p25", s.quantiles[1]},
            {"p50", s.quantiles[2]},
            {"p75", s.quantiles[3]},
            {"p95", s.quantiles[4]}}}};
}

}  // namespace

Json to_json(const SimulationSummary& s) {
  Json cdf = Json::array();
  for (const auto& [t, p] : s.cdf_points) cdf.push_back({{"t", t}, {"p", p}});
  Json config{{"graph", s.graph_label}, {"n", s.n}, {"from", s.v}, {"to", s.w},
              {"seed", s.seed},         {"weights", s.model}, {"rho", s.rho}};
  config["hamming_k"] = s.hamming_k ? Json(*s.hamming_k) : Json(nullptr);
  return {{"config", config},
          {"replicas", s.replicas},
          {"times", summary_json(s.times)},
          {"geodesic_lengths", summary_json(s.geodesic_lengths)},
          {"cdf", cdf}};
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorKind::IoFailure, "cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing '" + path + "'");
}

ReportFormat parse_format(const std::string& text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorKind::InvalidSpec, "format must be json or csv");
}

void emit_report(const Json& doc, const Table& table, ReportFormat format, const std::string& path) {
  if (format == ReportFormat::Csv) {
    write_text(path, to_csv(table));
  } else {
    write_text(path, doc.dump(2) + "\n");
  }
}

}  // namespace fpp
