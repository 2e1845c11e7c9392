#include "limid/json_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace limid {

namespace {

void require_keys(const Json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw InputError("unknown key \"" + key + "\" in " + where);
  }
}

}  // namespace

InfluenceDiagram diagram_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("diagram document must be a JSON object");
  require_keys(doc, {"nodes", "cpts", "utilities"}, "the diagram document");
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw InputError("diagram document needs a \"nodes\" array");

  struct Raw {
    std::string name;
    std::string kind;
    std::vector<std::string> parents;
    int domain = 0;
  };
  std::vector<Raw> raws;
  for (const Json& jn : doc["nodes"]) {
    if (!jn.is_object()) throw InputError("every node must be a JSON object");
    require_keys(jn, {"name", "kind", "parents", "domain"}, "a node entry");
    Raw r;
    if (!jn.contains("name") || !jn["name"].is_string())
      throw InputError("node entry misses a string \"name\"");
    r.name = jn["name"].get<std::string>();
    if (!jn.contains("kind") || !jn["kind"].is_string())
      throw InputError("node \"" + r.name + "\" misses a string \"kind\"");
    r.kind = jn["kind"].get<std::string>();
    if (r.kind != "chance" && r.kind != "decision" && r.kind != "utility")
      throw InputError("node \"" + r.name + "\" has unknown kind \"" + r.kind + "\"");
    if (jn.contains("parents")) {
      if (!jn["parents"].is_array())
        throw InputError("\"parents\" of node \"" + r.name + "\" must be an array");
      for (const Json& p : jn["parents"]) {
        if (!p.is_string())
          throw InputError("\"parents\" of node \"" + r.name + "\" must hold names");
        r.parents.push_back(p.get<std::string>());
      }
    }
    if (r.kind == "utility") {
      if (jn.contains("domain"))
        throw InputError("key \"domain\" is not allowed on utility node \"" + r.name + "\"");
    } else {
      if (!jn.contains("domain") || !jn["domain"].is_number_integer())
        throw InputError("node \"" + r.name + "\" needs an integer \"domain\"");
      r.domain = jn["domain"].get<int>();
    }
    raws.push_back(std::move(r));
  }

  std::map<std::string, NodeId> by_name;
  for (std::size_t i = 0; i < raws.size(); ++i) {
    if (by_name.count(raws[i].name))
      throw InputError("duplicate node name \"" + raws[i].name + "\"");
    by_name[raws[i].name] = static_cast<NodeId>(i);
  }

  // Two passes would allow forward parent references, but node ids must be
  // dense in array order, so parents must already be declared.
  InfluenceDiagram d;
  for (const Raw& r : raws) {
    std::vector<NodeId> parents;
    for (const std::string& p : r.parents) {
      auto it = by_name.find(p);
      if (it == by_name.end() || it->second >= d.num_nodes())
        throw InputError("node \"" + r.name + "\" references parent \"" + p +
                         "\" before it is declared");
      parents.push_back(it->second);
    }
    if (r.kind == "chance")
      d.add_chance(r.name, parents, r.domain);
    else if (r.kind == "decision")
      d.add_decision(r.name, parents, r.domain);
    else
      d.add_utility(r.name, parents);
  }

  if (doc.contains("cpts")) {
    if (!doc["cpts"].is_object()) throw InputError("\"cpts\" must be an object");
    for (const auto& [name, values] : doc["cpts"].items()) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw InputError("cpt for unknown node \"" + name + "\"");
      if (d.node(it->second).kind != NodeKind::Chance)
        throw InputError("cpt attached to non-chance node \"" + name + "\"");
      if (!values.is_array()) throw InputError("cpt of \"" + name + "\" must be an array");
      d.set_cpt(it->second, values.get<std::vector<double>>());
    }
  }
  if (doc.contains("utilities")) {
    if (!doc["utilities"].is_object()) throw InputError("\"utilities\" must be an object");
    for (const auto& [name, values] : doc["utilities"].items()) {
      auto it = by_name.find(name);
      if (it == by_name.end()) throw InputError("utility table for unknown node \"" + name + "\"");
      if (d.node(it->second).kind != NodeKind::Utility)
        throw InputError("utility table attached to non-utility node \"" + name + "\"");
      if (!values.is_array()) throw InputError("utilities of \"" + name + "\" must be an array");
      d.set_utility(it->second, values.get<std::vector<double>>());
    }
  }
  return d;
}

Json diagram_to_json(const InfluenceDiagram& d) {
  Json doc;
  doc["nodes"] = Json::array();
  for (const DiagramNode& n : d.nodes()) {
    Json jn;
    jn["name"] = n.name;
    jn["kind"] = n.kind == NodeKind::Chance ? "chance"
               : n.kind == NodeKind::Decision ? "decision"
                                              : "utility";
    Json parents = Json::array();
    for (NodeId p : n.parents) parents.push_back(d.node(p).name);
    jn["parents"] = std::move(parents);
    if (n.kind != NodeKind::Utility) jn["domain"] = n.domain_size;
    doc["nodes"].push_back(std::move(jn));
  }
  doc["cpts"] = Json::object();
  for (NodeId id : d.chance_ids()) doc["cpts"][d.node(id).name] = d.cpt(id)->values;
  doc["utilities"] = Json::object();
  for (NodeId id : d.utility_ids()) doc["utilities"][d.node(id).name] = d.utility(id)->values;
  return doc;
}

InfluenceDiagram load_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open \"" + path + "\"");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("cannot parse \"" + path + "\": " + e.what());
  }
  InfluenceDiagram d = diagram_from_json(doc);
  const ValidationReport report = validate_diagram(d);
  if (!report.ok())
    throw InputError("\"" + path + "\" is not a valid diagram:\n" + report.summary());
  return d;
}

std::string parent_config_string(const InfluenceDiagram& d, NodeId decision,
                                 std::uint64_t row) {
  const DiagramNode& n = d.node(decision);
  const std::vector<int> vals = d.config_values(decision, row);
  std::string out;
  for (std::size_t i = 0; i < n.parents.size(); ++i) {
    if (i > 0) out += ",";
    out += d.node(n.parents[i]).name + "=" + std::to_string(vals[i]);
  }
  return out;
}

Json strategy_to_json(const InfluenceDiagram& d, const Strategy& strategy) {
  Json out = Json::object();
  for (const Policy& p : strategy.policies) {
    const DiagramNode& n = d.node(p.decision);
    const std::uint64_t rows = d.parent_config_count(p.decision);
    Json table = Json::object();
    for (std::uint64_t j = 0; j < rows; ++j) {
      int chosen = -1;
      for (int a = 0; a < n.domain_size; ++a) {
        const double v = p.table[j * static_cast<std::uint64_t>(n.domain_size) +
                                 static_cast<std::uint64_t>(a)];
        if (v == 1.0 && chosen < 0) chosen = a;
      }
      if (chosen < 0)
        throw Error("strategy for '" + n.name + "' is not pure; cannot serialize");
      table[parent_config_string(d, p.decision, j)] = chosen;
    }
    out[n.name] = std::move(table);
  }
  return out;
}

Strategy strategy_from_json(const InfluenceDiagram& d, const Json& doc) {
  const Json* body = &doc;
  if (doc.is_object() && doc.contains("strategy")) body = &doc["strategy"];
  if (!body->is_object()) throw InputError("strategy document must be a JSON object");

  std::vector<std::vector<int>> choices;
  const std::vector<NodeId> decisions = d.decision_ids();
  for (NodeId dec : decisions) {
    const DiagramNode& n = d.node(dec);
    if (!body->contains(n.name))
      throw InputError("strategy misses decision \"" + n.name + "\"");
    const Json& table = (*body)[n.name];
    if (!table.is_object())
      throw InputError("strategy for \"" + n.name + "\" must be an object");
    const std::uint64_t rows = d.parent_config_count(dec);
    std::vector<int> row_choice(rows, -1);
    for (std::uint64_t j = 0; j < rows; ++j) {
      const std::string key = parent_config_string(d, dec, j);
      if (!table.contains(key))
        throw InputError("strategy for \"" + n.name + "\" misses configuration \"" + key + "\"");
      if (!table[key].is_number_integer())
        throw InputError("alternative for \"" + n.name + "\" / \"" + key +
                         "\" must be an integer");
      const int a = table[key].get<int>();
      if (a < 0 || a >= n.domain_size)
        throw InputError("alternative " + std::to_string(a) + " out of range for \"" + n.name +
                         "\"");
      row_choice[j] = a;
    }
    if (table.size() != rows)
      throw InputError("strategy for \"" + n.name + "\" lists unknown configurations");
    choices.push_back(std::move(row_choice));
  }
  for (const auto& [name, _] : body->items())
    if (!d.find(name) || d.node(*d.find(name)).kind != NodeKind::Decision)
      throw InputError("strategy names unknown decision \"" + name + "\"");
  return pure_strategy_from_choices(d, choices);
}

Json result_to_json(const InfluenceDiagram& d, const SolveResult& result, bool include_bound) {
  Json out;
  out["strategy"] = strategy_to_json(d, result.strategy);
  out["eu"] = result.eu;
  if (include_bound) {
    out["upper_bound"] = result.upper_bound;
    out["gap_percent"] = result.gap_percent;
  }
  out["nodes_evaluated"] = result.nodes_evaluated;
  out["status"] = result.status == SolveStatus::Proven ? "proven" : "stopped";
  return out;
}

}  // namespace limid
