#include "matchforge/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace matchforge {

// ---------------------------------------------------------------------------
// Preference

Preference::Preference(std::vector<int> best_first) : order_(std::move(best_first)) {
  int max_id = -1;
  int nulls = 0;
  for (int id : order_) {
    if (id == kNull) {
      ++nulls;
      continue;
    }
    if (id < 0 || id >= kMaxContracts) throw InstanceError("preference lists contract id out of range");
    max_id = std::max(max_id, id);
  }
  if (nulls != 1) throw InstanceError("preference order must contain the null contract exactly once");
  rank_by_id_.assign(static_cast<std::size_t>(max_id + 1), -1);
  for (std::size_t r = 0; r < order_.size(); ++r) {
    if (order_[r] == kNull) {
      null_rank_ = static_cast<int>(r);
      continue;
    }
    if (rank_by_id_[order_[r]] != -1)
      throw InstanceError("preference order lists contract " + std::to_string(order_[r]) + " twice");
    rank_by_id_[order_[r]] = static_cast<int>(r);
  }
}

int Preference::rank_of(int x) const {
  if (x == kNull) return null_rank_;
  if (x < 0 || x >= static_cast<int>(rank_by_id_.size()) || rank_by_id_[x] == -1)
    throw DomainError("contract " + std::to_string(x) + " is not in this preference order");
  return rank_by_id_[x];
}

// ---------------------------------------------------------------------------
// PriorityOrder

PriorityOrder::PriorityOrder(std::vector<int> best_first) : order_(std::move(best_first)) {
  int max_id = -1;
  for (int id : order_) {
    if (id < 0 || id >= kMaxContracts) throw InstanceError("priority lists contract id out of range");
    max_id = std::max(max_id, id);
  }
  rank_by_id_.assign(static_cast<std::size_t>(max_id + 1), -1);
  for (std::size_t r = 0; r < order_.size(); ++r) {
    if (rank_by_id_[order_[r]] != -1)
      throw InstanceError("priority order lists contract " + std::to_string(order_[r]) + " twice");
    rank_by_id_[order_[r]] = static_cast<int>(r);
  }
}

int PriorityOrder::rank_of(int x) const {
  if (x < 0 || x >= static_cast<int>(rank_by_id_.size()) || rank_by_id_[x] == -1)
    throw DomainError("contract " + std::to_string(x) + " is not in this priority order");
  return rank_by_id_[x];
}

ContractSet PriorityOrder::ground() const {
  ContractSet g;
  for (int id : order_) g.insert(id);
  return g;
}

// ---------------------------------------------------------------------------
// Problem

Problem Problem::make(std::vector<std::string> agent_names,
                      std::vector<std::string> institution_names,
                      std::vector<Contract> contracts, std::vector<Preference> preferences,
                      std::vector<InstitutionSpec> specs) {
  Problem p;
  p.agent_names_ = std::move(agent_names);
  p.institution_names_ = std::move(institution_names);
  p.contracts_ = std::move(contracts);
  p.preferences_ = std::move(preferences);
  p.specs_ = std::move(specs);
  p.index();
  p.validate();
  return p;
}

Problem Problem::with_preferences(const Problem& base, std::vector<Preference> preferences) {
  Problem p = base;
  p.preferences_ = std::move(preferences);
  p.validate();
  return p;
}

void Problem::index() {
  if (contract_count() > kMaxContracts)
    throw InstanceError("instance has " + std::to_string(contract_count()) +
                        " contracts; the cap is 64");
  by_agent_.assign(agent_names_.size(), {});
  by_institution_.assign(institution_names_.size(), {});
  universe_ = {};
  for (int id = 0; id < contract_count(); ++id) {
    const Contract& c = contracts_[id];
    if (c.agent < 0 || c.agent >= agent_count())
      throw InstanceError("contracts[" + std::to_string(id) + "].agent is out of range");
    if (c.institution < 0 || c.institution >= institution_count())
      throw InstanceError("contracts[" + std::to_string(id) + "].institution is out of range");
    by_agent_[c.agent].insert(id);
    by_institution_[c.institution].insert(id);
    universe_.insert(id);
  }
}

void Problem::validate() const {
  // (agent, institution, label) unique
  std::set<std::tuple<int, int, std::string>> seen;
  for (int id = 0; id < contract_count(); ++id) {
    const Contract& c = contracts_[id];
    if (!seen.insert({c.agent, c.institution, c.label}).second)
      throw InstanceError("duplicate contract triple (" + agent_names_[c.agent] + ", " +
                          institution_names_[c.institution] + ", \"" + c.label + "\")");
  }

  if (static_cast<int>(preferences_.size()) != agent_count())
    throw InstanceError("preferences: expected one order per agent");
  for (int a = 0; a < agent_count(); ++a) {
    ContractSet listed;
    for (int id : preferences_[a].order()) {
      if (id == Preference::kNull) continue;
      if (id >= contract_count() || contracts_[id].agent != a)
        throw InstanceError("preferences." + agent_names_[a] + ": contract " + std::to_string(id) +
                            " does not belong to this agent");
      listed.insert(id);
    }
    if (listed != by_agent_[a])
      throw InstanceError("preferences." + agent_names_[a] +
                          ": order must cover the agent's contracts exactly once");
  }

  if (static_cast<int>(specs_.size()) != institution_count())
    throw InstanceError("institutions: expected one spec per institution");
  for (int i = 0; i < institution_count(); ++i) {
    const InstitutionSpec& spec = specs_[i];
    const std::string& name = institution_names_[i];
    if (spec.capacity < 0)
      throw InstanceError("institutions." + name + ".capacity is negative");

    ContractSet listed;
    for (int id : spec.priority) {
      if (id < 0 || id >= contract_count() || contracts_[id].institution != i)
        throw InstanceError("institutions." + name + ".priority: contract " + std::to_string(id) +
                            " does not belong to this institution");
      if (listed.contains(id))
        throw InstanceError("institutions." + name + ".priority is not a total order: contract " +
                            std::to_string(id) + " repeats");
      listed.insert(id);
    }
    if (listed != by_institution_[i])
      throw InstanceError("institutions." + name +
                          ".priority is not a total order over the institution's contracts");

    if (!spec.returning.subset_of(by_institution_[i]))
      throw InstanceError("institutions." + name +
                          ".returning contains contracts of other institutions");
    if (spec.returning.size() > spec.capacity)
      throw InstanceError("institutions." + name + ".returning has " +
                          std::to_string(spec.returning.size()) + " contracts, more than capacity " +
                          std::to_string(spec.capacity));

    if (spec.reserves.size() != spec.types.size())
      throw InstanceError("institutions." + name + ".reserves must give one count per type");
    for (std::size_t t = 0; t < spec.reserves.size(); ++t)
      if (spec.reserves[t] < 0)
        throw InstanceError("institutions." + name + ".reserves." + spec.types[t] + " is negative");
    for (const auto& [id, ts] : spec.traits) {
      if (id < 0 || id >= contract_count() || contracts_[id].institution != i)
        throw InstanceError("institutions." + name + ".traits: contract " + std::to_string(id) +
                            " does not belong to this institution");
      for (int t : ts)
        if (t < 0 || t >= static_cast<int>(spec.types.size()))
          throw InstanceError("institutions." + name + ".traits: unknown type index for contract " +
                              std::to_string(id));
    }

    if (spec.reserve_flavored()) {
      // One contract per agent at reserve-flavored institutions.
      std::set<int> agents_here;
      for (int id : by_institution_[i])
        if (!agents_here.insert(contracts_[id].agent).second)
          throw InstanceError("institutions." + name +
                              ": reserve/returning data requires one contract per agent, but agent " +
                              agent_names_[contracts_[id].agent] + " holds several");
    }

    if (spec.matroid) {
      if (spec.matroid->ground != by_institution_[i])
        throw InstanceError("institutions." + name +
                            ".matroid: ground must equal the institution's contract set");
      make_oracle(*spec.matroid);  // explicit variants validate here
    }
  }
}

ContractSet Problem::agent_contracts(int agent) const {
  if (agent < 0 || agent >= agent_count())
    throw InstanceError("unknown agent index " + std::to_string(agent));
  return by_agent_[agent];
}

ContractSet Problem::institution_contracts(int institution) const {
  if (institution < 0 || institution >= institution_count())
    throw InstanceError("unknown institution index " + std::to_string(institution));
  return by_institution_[institution];
}

const Contract& Problem::contract(int id) const {
  if (id < 0 || id >= contract_count())
    throw InstanceError("unknown contract id " + std::to_string(id));
  return contracts_[id];
}

const Preference& Problem::preference(int agent) const {
  if (agent < 0 || agent >= agent_count())
    throw InstanceError("unknown agent index " + std::to_string(agent));
  return preferences_[agent];
}

const InstitutionSpec& Problem::institution(int i) const {
  if (i < 0 || i >= institution_count())
    throw InstanceError("unknown institution index " + std::to_string(i));
  return specs_[i];
}

int Problem::agent_index(const std::string& name) const {
  for (int a = 0; a < agent_count(); ++a)
    if (agent_names_[a] == name) return a;
  throw InstanceError("unknown agent \"" + name + "\"");
}

int Problem::institution_index(const std::string& name) const {
  for (int i = 0; i < institution_count(); ++i)
    if (institution_names_[i] == name) return i;
  throw InstanceError("unknown institution \"" + name + "\"");
}

PriorityOrder Problem::priority_order(int institution) const {
  return PriorityOrder(this->institution(institution).priority);
}

std::string Problem::contract_name(int id) const {
  const Contract& c = contract(id);
  std::string out = agent_names_[c.agent] + "@" + institution_names_[c.institution];
  if (!c.label.empty()) out += ":" + c.label;
  return out;
}

// ---------------------------------------------------------------------------
// Matching

Matching Matching::from_set(const Problem& p, ContractSet contracts) {
  if (!contracts.subset_of(p.universe()))
    throw DomainError("matching contains contracts outside the instance universe");
  Matching m;
  m.set_ = contracts;
  m.by_agent_.assign(p.agent_count(), Preference::kNull);
  for (int id : contracts) {
    const int a = p.contract(id).agent;
    if (m.by_agent_[a] != Preference::kNull)
      throw DomainError("not a matching: agent " + p.agent_name(a) + " holds two contracts");
    m.by_agent_[a] = id;
  }
  return m;
}

int Matching::assigned(int agent) const {
  if (agent < 0 || agent >= static_cast<int>(by_agent_.size())) return Preference::kNull;
  return by_agent_[agent];
}

// ---------------------------------------------------------------------------
// Free functions

ContractSet restrict_to_agent(const Problem& p, ContractSet x, int agent) {
  if (!x.subset_of(p.universe()))
    throw DomainError("restrict: set is not a subset of the instance universe");
  return x & p.agent_contracts(agent);
}

ContractSet restrict_to_institution(const Problem& p, ContractSet x, int institution) {
  if (!x.subset_of(p.universe()))
    throw DomainError("restrict: set is not a subset of the instance universe");
  return x & p.institution_contracts(institution);
}

ContractSet restrict_to_agent(const Problem& p, ContractSet x, const std::string& agent) {
  return restrict_to_agent(p, x, p.agent_index(agent));
}

ContractSet restrict_to_institution(const Problem& p, ContractSet x, const std::string& institution) {
  return restrict_to_institution(p, x, p.institution_index(institution));
}

ContractSet demand(const Problem& p, const Matching& x, int institution) {
  ContractSet d;
  for (int id : p.institution_contracts(institution)) {
    const int a = p.contract(id).agent;
    if (p.preference(a).weakly_prefers(id, x.assigned(a))) d.insert(id);
  }
  return d;
}

}  // namespace matchforge
