#include "qres/report.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "qres/errors.hpp"

namespace qres {

namespace {

const std::vector<std::pair<const char*, const char*>> kCostUnits = {
    {"epsilon", "hartree"},       {"M_eps", "count"},       {"kappa_q", "hartree"},
    {"lambda", "hartree"},        {"n_unitaries", "count"}, {"n_fragments", "count"},
    {"half_spectral_range", "hartree"}, {"C", "hartree"},   {"S_L", "dimensionless"},
    {"beta", "hartree^2"},        {"gate_counts", "gates per fragment (depth in layers)"}};

}  // namespace

json to_json(const CostReport& r) {
  json j;
  j["kind"] = "cost_report";
  j["method"] = r.method;
  j["molecule"] = r.molecule;
  j["geometry"] = r.geometry;
  j["epsilon"] = r.epsilon;
  j["M_eps"] = r.M_eps;
  j["kappa_q"] = r.kappa_q;
  j["lambda"] = r.lambda;
  j["n_unitaries"] = r.n_unitaries;
  j["n_fragments"] = r.n_fragments;
  j["half_spectral_range"] = r.half_spectral_range;
  j["C"] = r.C;
  j["S_L"] = r.S_L;
  j["beta"] = r.beta;
  j["gate_counts"] = {{"one_qubit", r.gate_counts.one_qubit},
                      {"two_qubit", r.gate_counts.two_qubit},
                      {"depth", r.gate_counts.depth}};
  json u;
  for (const auto& [k, v] : kCostUnits) u[k] = v;
  j["units"] = u;
  return j;
}

json to_json(const std::vector<QccRow>& rows, const std::string& molecule, const std::string& geometry) {
  json j;
  j["kind"] = "qcc";
  j["molecule"] = molecule;
  j["geometry"] = geometry;
  json arr = json::array();
  for (const auto& r : rows) {
    json g = json::array();
    for (const auto& p : r.generators) g.push_back(pauli_label(p));
    arr.push_back({{"n_ent", r.n_ent},
                   {"energy", r.energy},
                   {"error", r.error},
                   {"error_mha", r.error * 1e3},
                   {"overlap", r.overlap},
                   {"converged", r.converged},
                   {"generators", g},
                   {"amplitudes", r.amplitudes}});
  }
  j["rows"] = arr;
  j["units"] = {{"energy", "hartree"}, {"error", "hartree"}, {"error_mha", "millihartree"},
                {"overlap", "dimensionless"}, {"amplitudes", "radian"}, {"n_ent", "count"}};
  return j;
}

std::vector<std::string> check_cost_report(const json& j) {
  std::vector<std::string> bad;
  if (!j.is_object()) return {"record is not an object"};
  for (const char* k : {"method", "molecule", "geometry"})
    if (!j.contains(k) || !j[k].is_string()) bad.push_back(std::string("missing string field ") + k);
  if (!j.contains("units") || !j["units"].is_object()) {
    bad.push_back("missing units");
    return bad;
  }
  for (const auto& [k, v] : kCostUnits) {
    if (!j.contains(k)) {
      bad.push_back(std::string("missing field ") + k);
      continue;
    }
    if (!j["units"].contains(k)) bad.push_back(std::string("no units for ") + k);
    if (std::string(k) == "gate_counts") {
      for (const char* g : {"one_qubit", "two_qubit", "depth"})
        if (!j[k].contains(g) || !j[k][g].is_number()) bad.push_back(std::string("gate_counts.") + g);
    } else if (!j[k].is_number()) {
      bad.push_back(std::string("non-numeric ") + k);
    }
  }
  if (j.contains("S_L") && j["S_L"].is_number() && (j["S_L"].get<double>() < 0 || j["S_L"].get<double>() >= 1))
    bad.push_back("S_L outside [0,1)");
  return bad;
}

void append_jsonl(const std::string& path, const json& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw ArgumentError("cannot open " + path);
  out << record.dump() << '\n';
}

std::vector<json> read_jsonl(std::istream& in) {
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("bad report line: ") + e.what());
    }
  }
  return out;
}

json collate_tables(const std::vector<json>& cells) {
  // table -> row label -> method -> value
  static const std::vector<std::pair<const char*, const char*>> metrics = {
      {"M_eps", "measurements"}, {"kappa_q", "kappa_q"},     {"lambda", "lambda"},
      {"n_unitaries", "n_unitaries"}, {"n_fragments", "n_fragments"},
      {"half_spectral_range", "half_spectral_range"},        {"C", "C"}, {"S_L", "S_L"}, {"beta", "beta"}};
  json tables = json::object();
  for (const auto& c : cells) {
    if (c.value("kind", "") != "cost_report") continue;
    std::string row = c.value("molecule", "") + "/" + c.value("geometry", "");
    std::string method = c.value("method", "");
    for (const auto& [key, table] : metrics) {
      if (!c.contains(key)) continue;
      double v = c[key].get<double>();
      if (v == 0.0) continue;  // metric not computed for this cell
      tables[table][row][method] = v;
    }
  }
  return tables;
}

std::string collate_csv(const std::vector<json>& cells) {
  std::ostringstream out;
  out << "table,row,method,value\n";
  json t = collate_tables(cells);
  for (auto it = t.begin(); it != t.end(); ++it)
    for (auto r = it.value().begin(); r != it.value().end(); ++r)
      for (auto m = r.value().begin(); m != r.value().end(); ++m) {
        out << it.key() << ',' << r.key() << ',' << m.key() << ',';
        out.precision(10);
        out << m.value().get<double>() << '\n';
      }
  return out.str();
}

}  // namespace qres
