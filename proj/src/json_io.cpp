#include "matchforge/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace matchforge {

using nlohmann::json;

namespace {

[[noreturn]] void reject(const std::string& what) { throw InstanceError(what); }

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) reject(where + ": unknown key \"" + it.key() + "\"");
  }
}

int require_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) reject(where + " must be an integer");
  return v.get<int>();
}

std::string require_string(const json& v, const std::string& where) {
  if (!v.is_string()) reject(where + " must be a string");
  return v.get<std::string>();
}

int parse_contract_id_key(const std::string& key, const std::string& where) {
  try {
    std::size_t used = 0;
    const int id = std::stoi(key, &used);
    if (used != key.size() || id < 0) throw std::invalid_argument(key);
    return id;
  } catch (const std::exception&) {
    reject(where + ": key \"" + key + "\" is not a contract id");
  }
}

MatroidSpec parse_matroid(const json& m, ContractSet ground, const std::string& where) {
  if (!m.is_object()) reject(where + " must be an object");
  const std::string kind = require_string(m.value("kind", json()), where + ".kind");
  if (kind == "uniform") {
    require_keys(m, where, {"kind", "q"});
    return MatroidSpec::uniform(ground, require_int(m.value("q", json()), where + ".q"));
  }
  if (kind == "partition") {
    require_keys(m, where, {"kind", "class", "quota"});
    const json& cls = m.value("class", json::object());
    const json& quota = m.value("quota", json::object());
    if (!cls.is_object() || !quota.is_object()) reject(where + ": class/quota must be objects");
    std::vector<std::string> class_names;
    for (auto it = quota.begin(); it != quota.end(); ++it) class_names.push_back(it.key());
    std::sort(class_names.begin(), class_names.end());
    std::vector<int> quotas;
    for (const std::string& c : class_names)
      quotas.push_back(require_int(quota.at(c), where + ".quota." + c));
    std::map<int, int> element_class;
    for (auto it = cls.begin(); it != cls.end(); ++it) {
      const int id = parse_contract_id_key(it.key(), where + ".class");
      const std::string c = require_string(it.value(), where + ".class." + it.key());
      const auto pos = std::lower_bound(class_names.begin(), class_names.end(), c);
      if (pos == class_names.end() || *pos != c)
        reject(where + ".class." + it.key() + ": unknown class \"" + c + "\"");
      element_class[id] = static_cast<int>(pos - class_names.begin());
    }
    return MatroidSpec::partition(ground, std::move(element_class), std::move(quotas));
  }
  if (kind == "transversal") {
    require_keys(m, where, {"kind", "reserves", "traits"});
    const json& reserves = m.value("reserves", json::object());
    const json& traits = m.value("traits", json::object());
    if (!reserves.is_object() || !traits.is_object())
      reject(where + ": reserves/traits must be objects");
    std::vector<std::string> type_names;
    for (auto it = reserves.begin(); it != reserves.end(); ++it) type_names.push_back(it.key());
    std::sort(type_names.begin(), type_names.end());
    std::vector<int> counts;
    for (const std::string& t : type_names)
      counts.push_back(require_int(reserves.at(t), where + ".reserves." + t));
    std::map<int, std::vector<int>> element_traits;
    for (auto it = traits.begin(); it != traits.end(); ++it) {
      const int id = parse_contract_id_key(it.key(), where + ".traits");
      if (!it.value().is_array()) reject(where + ".traits." + it.key() + " must be an array");
      for (const json& t : it.value()) {
        const std::string name = require_string(t, where + ".traits." + it.key());
        const auto pos = std::lower_bound(type_names.begin(), type_names.end(), name);
        if (pos == type_names.end() || *pos != name)
          reject(where + ".traits." + it.key() + ": unknown type \"" + name + "\"");
        element_traits[id].push_back(static_cast<int>(pos - type_names.begin()));
      }
    }
    return MatroidSpec::transversal(ground, std::move(counts), std::move(element_traits));
  }
  if (kind == "explicit") {
    require_keys(m, where, {"kind", "sets"});
    const json& sets = m.value("sets", json::array());
    if (!sets.is_array()) reject(where + ".sets must be an array");
    std::vector<ContractSet> family;
    for (const json& s : sets) {
      if (!s.is_array()) reject(where + ".sets entries must be arrays of contract ids");
      ContractSet f;
      for (const json& v : s) f.insert(require_int(v, where + ".sets"));
      family.push_back(f);
    }
    return MatroidSpec::explicit_family(ground, std::move(family));
  }
  reject(where + ".kind: unknown matroid kind \"" + kind + "\"");
}

}  // namespace

Problem load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    reject(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) reject("instance must be a JSON object");
  require_keys(doc, "instance", {"contracts", "preferences", "institutions"});

  const json& jcontracts = doc.value("contracts", json::array());
  const json& jprefs = doc.value("preferences", json::object());
  const json& jinst = doc.value("institutions", json::object());
  if (!jcontracts.is_array()) reject("contracts must be an array");
  if (!jprefs.is_object()) reject("preferences must be an object");
  if (!jinst.is_object()) reject("institutions must be an object");

  if (jcontracts.size() > static_cast<std::size_t>(kMaxContracts))
    reject("contracts: instance has " + std::to_string(jcontracts.size()) +
           " contracts; the cap is 64");

  // First pass: collect names. Institutions come from the institutions map;
  // agents from the contracts (order of first appearance).
  std::vector<std::string> agent_names;
  std::vector<std::string> institution_names;
  for (auto it = jinst.begin(); it != jinst.end(); ++it) institution_names.push_back(it.key());

  struct RawContract {
    std::string agent, institution, label;
  };
  std::vector<RawContract> raw(jcontracts.size());
  std::vector<char> seen(jcontracts.size(), 0);
  for (std::size_t k = 0; k < jcontracts.size(); ++k) {
    const json& c = jcontracts[k];
    const std::string where = "contracts[" + std::to_string(k) + "]";
    if (!c.is_object()) reject(where + " must be an object");
    require_keys(c, where, {"id", "agent", "institution", "label"});
    const int id = require_int(c.value("id", json()), where + ".id");
    if (id < 0 || id >= static_cast<int>(jcontracts.size()))
      reject(where + ".id: ids must be 0..n-1, got " + std::to_string(id));
    if (seen[id]) reject(where + ".id: duplicate contract id " + std::to_string(id));
    seen[id] = 1;
    raw[id].agent = require_string(c.value("agent", json()), where + ".agent");
    raw[id].institution = require_string(c.value("institution", json()), where + ".institution");
    if (c.contains("label")) raw[id].label = require_string(c["label"], where + ".label");
  }

  auto find_or_add_agent = [&](const std::string& name) {
    for (std::size_t a = 0; a < agent_names.size(); ++a)
      if (agent_names[a] == name) return static_cast<int>(a);
    agent_names.push_back(name);
    return static_cast<int>(agent_names.size() - 1);
  };
  auto find_institution = [&](const std::string& name, const std::string& where) {
    for (std::size_t i = 0; i < institution_names.size(); ++i)
      if (institution_names[i] == name) return static_cast<int>(i);
    reject(where + ": institution \"" + name + "\" has no entry under institutions");
  };

  std::vector<Contract> contracts(raw.size());
  for (std::size_t id = 0; id < raw.size(); ++id) {
    contracts[id].agent = find_or_add_agent(raw[id].agent);
    contracts[id].institution =
        find_institution(raw[id].institution, "contracts[" + std::to_string(id) + "].institution");
    contracts[id].label = raw[id].label;
  }

  // Preferences: acceptable prefix, optional "null", optional tail; unlisted
  // contracts complete below null in ascending id order.
  std::vector<std::vector<int>> own(agent_names.size());
  for (std::size_t id = 0; id < contracts.size(); ++id)
    own[contracts[id].agent].push_back(static_cast<int>(id));

  for (auto it = jprefs.begin(); it != jprefs.end(); ++it) {
    bool known = false;
    for (const std::string& a : agent_names) known |= (a == it.key());
    if (!known) reject("preferences." + it.key() + ": unknown agent (no contract mentions them)");
  }

  std::vector<Preference> preferences(agent_names.size());
  for (std::size_t a = 0; a < agent_names.size(); ++a) {
    const std::string where = "preferences." + agent_names[a];
    std::vector<int> order;
    ContractSet listed;
    bool saw_null = false;
    if (jprefs.contains(agent_names[a])) {
      const json& arr = jprefs.at(agent_names[a]);
      if (!arr.is_array()) reject(where + " must be an array");
      for (const json& v : arr) {
        if (v.is_string()) {
          if (v.get<std::string>() != "null")
            reject(where + ": only the string \"null\" is allowed among ids");
          if (saw_null) reject(where + ": \"null\" appears twice");
          saw_null = true;
          order.push_back(Preference::kNull);
          continue;
        }
        const int id = require_int(v, where);
        if (id < 0 || id >= static_cast<int>(contracts.size()) ||
            contracts[id].agent != static_cast<int>(a))
          reject(where + ": contract " + std::to_string(id) + " does not belong to this agent");
        if (listed.contains(id)) reject(where + ": contract " + std::to_string(id) + " repeats");
        listed.insert(id);
        order.push_back(id);
      }
    }
    if (!saw_null) order.push_back(Preference::kNull);
    for (int id : own[a])
      if (!listed.contains(id)) order.push_back(id);
    preferences[a] = Preference(std::move(order));
  }

  // Institutions.
  std::vector<InstitutionSpec> specs(institution_names.size());
  for (std::size_t i = 0; i < institution_names.size(); ++i) {
    const std::string where = "institutions." + institution_names[i];
    const json& obj = jinst.at(institution_names[i]);
    if (!obj.is_object()) reject(where + " must be an object");
    require_keys(obj, where,
                 {"capacity", "priority", "returning", "types", "traits", "reserves", "matroid"});
    InstitutionSpec& spec = specs[i];
    if (!obj.contains("capacity")) reject(where + ".capacity is required");
    spec.capacity = require_int(obj["capacity"], where + ".capacity");
    if (spec.capacity < 0) reject(where + ".capacity is negative");

    ContractSet ground;
    for (std::size_t id = 0; id < contracts.size(); ++id)
      if (contracts[id].institution == static_cast<int>(i)) ground.insert(static_cast<int>(id));

    if (!obj.contains("priority")) reject(where + ".priority is required");
    if (!obj["priority"].is_array()) reject(where + ".priority must be an array");
    for (const json& v : obj["priority"])
      spec.priority.push_back(require_int(v, where + ".priority"));

    if (obj.contains("returning")) {
      if (!obj["returning"].is_array()) reject(where + ".returning must be an array");
      for (const json& v : obj["returning"]) {
        const int id = require_int(v, where + ".returning");
        if (id < 0 || id >= static_cast<int>(contracts.size()))
          reject(where + ".returning: unknown contract " + std::to_string(id));
        spec.returning.insert(id);
      }
    }

    if (obj.contains("types")) {
      if (!obj["types"].is_array()) reject(where + ".types must be an array");
      for (const json& v : obj["types"]) spec.types.push_back(require_string(v, where + ".types"));
      std::sort(spec.types.begin(), spec.types.end());
      if (std::adjacent_find(spec.types.begin(), spec.types.end()) != spec.types.end())
        reject(where + ".types: duplicate type");
    }
    spec.reserves.assign(spec.types.size(), 0);
    if (obj.contains("reserves")) {
      if (!obj["reserves"].is_object()) reject(where + ".reserves must be an object");
      for (auto it = obj["reserves"].begin(); it != obj["reserves"].end(); ++it) {
        const auto pos = std::lower_bound(spec.types.begin(), spec.types.end(), it.key());
        if (pos == spec.types.end() || *pos != it.key())
          reject(where + ".reserves." + it.key() + ": type not listed under types");
        const int count = require_int(it.value(), where + ".reserves." + it.key());
        if (count < 0) reject(where + ".reserves." + it.key() + " is negative");
        spec.reserves[pos - spec.types.begin()] = count;
      }
    }
    if (obj.contains("traits")) {
      if (!obj["traits"].is_object()) reject(where + ".traits must be an object");
      for (auto it = obj["traits"].begin(); it != obj["traits"].end(); ++it) {
        const int id = parse_contract_id_key(it.key(), where + ".traits");
        if (!it.value().is_array()) reject(where + ".traits." + it.key() + " must be an array");
        std::vector<int> ts;
        for (const json& v : it.value()) {
          const std::string t = require_string(v, where + ".traits." + it.key());
          const auto pos = std::lower_bound(spec.types.begin(), spec.types.end(), t);
          if (pos == spec.types.end() || *pos != t)
            reject(where + ".traits." + it.key() + ": type \"" + t + "\" not listed under types");
          ts.push_back(static_cast<int>(pos - spec.types.begin()));
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        spec.traits[id] = std::move(ts);
      }
    }
    if (obj.contains("matroid"))
      spec.matroid = parse_matroid(obj["matroid"], ground, where + ".matroid");
  }

  return Problem::make(std::move(agent_names), std::move(institution_names), std::move(contracts),
                       std::move(preferences), std::move(specs));
}

Problem load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

std::string save_instance(const Problem& p) {
  json doc;
  doc["contracts"] = json::array();
  for (int id = 0; id < p.contract_count(); ++id) {
    const Contract& c = p.contract(id);
    json jc{{"id", id},
            {"agent", p.agent_name(c.agent)},
            {"institution", p.institution_name(c.institution)}};
    if (!c.label.empty()) jc["label"] = c.label;
    doc["contracts"].push_back(jc);
  }
  doc["preferences"] = json::object();
  for (int a = 0; a < p.agent_count(); ++a) {
    json arr = json::array();
    for (int id : p.preference(a).order())
      if (id == Preference::kNull)
        arr.push_back("null");
      else
        arr.push_back(id);
    doc["preferences"][p.agent_name(a)] = arr;
  }
  doc["institutions"] = json::object();
  for (int i = 0; i < p.institution_count(); ++i) {
    const InstitutionSpec& spec = p.institution(i);
    json obj{{"capacity", spec.capacity}, {"priority", spec.priority}};
    if (!spec.returning.empty()) obj["returning"] = spec.returning.ids();
    if (!spec.types.empty()) {
      obj["types"] = spec.types;
      json reserves = json::object();
      for (std::size_t t = 0; t < spec.types.size(); ++t) reserves[spec.types[t]] = spec.reserves[t];
      obj["reserves"] = reserves;
      json traits = json::object();
      for (const auto& [id, ts] : spec.traits) {
        json names = json::array();
        for (int t : ts) names.push_back(spec.types[t]);
        traits[std::to_string(id)] = names;
      }
      if (!traits.empty()) obj["traits"] = traits;
    }
    if (spec.matroid) {
      const MatroidSpec& m = *spec.matroid;
      json jm;
      switch (m.kind) {
        case MatroidSpec::Kind::uniform:
          jm = {{"kind", "uniform"}, {"q", m.uniform_q}};
          break;
        case MatroidSpec::Kind::partition: {
          jm["kind"] = "partition";
          json cls = json::object(), quota = json::object();
          for (const auto& [id, c] : m.element_class)
            cls[std::to_string(id)] = "c" + std::to_string(c);
          for (std::size_t c = 0; c < m.class_quota.size(); ++c)
            quota["c" + std::to_string(c)] = m.class_quota[c];
          jm["class"] = cls;
          jm["quota"] = quota;
          break;
        }
        case MatroidSpec::Kind::transversal: {
          jm["kind"] = "transversal";
          json reserves = json::object(), traits = json::object();
          for (std::size_t t = 0; t < m.seat_reserves.size(); ++t)
            reserves["t" + std::to_string(t)] = m.seat_reserves[t];
          for (const auto& [id, ts] : m.element_traits) {
            json names = json::array();
            for (int t : ts) names.push_back("t" + std::to_string(t));
            traits[std::to_string(id)] = names;
          }
          jm["reserves"] = reserves;
          jm["traits"] = traits;
          break;
        }
        case MatroidSpec::Kind::explicit_sets: {
          jm["kind"] = "explicit";
          json sets = json::array();
          for (ContractSet f : m.independent_sets) sets.push_back(f.ids());
          jm["sets"] = sets;
          break;
        }
      }
      obj["matroid"] = jm;
    }
    doc["institutions"][p.institution_name(i)] = obj;
  }
  return doc.dump(2) + "\n";
}

void save_instance_file(const Problem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write instance file \"" + path + "\"");
  out << save_instance(p);
}

json matching_to_json(const Problem& p, const Matching& m) {
  json arr = json::array();
  for (int id : m.contracts()) arr.push_back(id);
  json named = json::array();
  for (int id : m.contracts()) named.push_back(p.contract_name(id));
  return json{{"contracts", arr}, {"named", named}};
}

json trace_to_json(const Problem& p, const DATrace& trace) {
  json steps = json::array();
  for (const DAStep& s : trace.steps) {
    json per = json::object();
    for (int i = 0; i < p.institution_count(); ++i) {
      per[p.institution_name(i)] = {{"considered", s.institutions[i].considered.ids()},
                                    {"accepted", s.institutions[i].accepted.ids()},
                                    {"rejected", s.institutions[i].rejected.ids()}};
    }
    steps.push_back(json{{"step", s.step}, {"proposals", s.proposals}, {"perInstitution", per}});
  }
  return json{{"steps", steps}, {"matching", matching_to_json(p, trace.outcome)}};
}

std::string tabulated_rule_to_json(const ChoiceFunction& rule) {
  const std::vector<ContractSet>& table = rule.table();
  const std::vector<int>& pos = rule.ground_positions();
  json choices = json::object();
  for (std::uint64_t j = 0; j < table.size(); ++j) {
    // Compact the chosen set into ground-local bit positions.
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
      if (table[j].contains(pos[k])) m |= std::uint64_t{1} << k;
    choices[std::to_string(j)] = std::to_string(m);
  }
  return json{{"ground_size", static_cast<int>(pos.size())}, {"choices", choices}}.dump(2) + "\n";
}

ChoiceFunction tabulated_rule_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    reject(std::string("tabulated rule is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) reject("tabulated rule must be a JSON object");
  require_keys(doc, "tabulated rule", {"ground_size", "choices"});
  const int n = require_int(doc.value("ground_size", json()), "ground_size");
  if (n < 0 || n > kTabulationGuard) reject("ground_size out of range");
  const json& choices = doc.value("choices", json::object());
  if (!choices.is_object()) reject("choices must be an object");
  const std::uint64_t total = std::uint64_t{1} << n;
  ContractSet ground;
  for (int k = 0; k < n; ++k) ground.insert(k);
  std::vector<ContractSet> table(total);
  std::vector<char> present(total, 0);
  for (auto it = choices.begin(); it != choices.end(); ++it) {
    std::uint64_t key = 0, value = 0;
    try {
      key = std::stoull(it.key());
      value = std::stoull(require_string(it.value(), "choices." + it.key()));
    } catch (const std::exception&) {
      reject("choices." + it.key() + ": masks must be decimal strings");
    }
    if (key >= total) reject("choices." + it.key() + ": subset mask out of range");
    table[key] = ContractSet::from_mask(value);
    present[key] = 1;
  }
  for (std::uint64_t j = 0; j < total; ++j)
    if (!present[j]) reject("choices: missing entry for subset mask " + std::to_string(j));
  return ChoiceFunction::from_table("tabulated", ground, std::move(table));
}

ChoiceFunction tabulated_rule_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open rule file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return tabulated_rule_from_json(buf.str());
}

}  // namespace matchforge
