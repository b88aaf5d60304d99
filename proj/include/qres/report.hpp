#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qres/costs.hpp"
#include "qres/qcc.hpp"

namespace qres {

using json = nlohmann::ordered_json;

// every numeric field comes with an entry in "units"
json to_json(const CostReport& r);
json to_json(const std::vector<QccRow>& rows, const std::string& molecule, const std::string& geometry);

// schema-level check of a cost report record; returns problems found (empty when valid)
std::vector<std::string> check_cost_report(const json& j);

void append_jsonl(const std::string& path, const json& record);
std::vector<json> read_jsonl(std::istream& in);

// cells grouped by table: rows keyed by molecule/geometry, one column per method
json collate_tables(const std::vector<json>& cells);
std::string collate_csv(const std::vector<json>& cells);

}  // namespace qres
