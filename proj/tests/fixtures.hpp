#ifndef MATCHFORGE_TESTS_FIXTURES_HPP
#define MATCHFORGE_TESTS_FIXTURES_HPP

#include <string>

#include "matchforge/engine.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/json_io.hpp"
#include "oracles.hpp"

namespace matchforge::test_fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(MATCHFORGE_TEST_DATA_DIR) + "/" + name;
}

inline Problem load(const std::string& name) { return load_instance_file(data_path(name)); }

// Reserve graph of the e1 fixture: two types with one seat each; element 0
// carries the first, element 1 both, element 2 none.
inline test_oracles::ReserveGraph e1_graph() {
  return {{1, 1}, {{0, {0}}, {1, {0, 1}}}};
}

inline MatroidSpec e1_transversal() {
  return MatroidSpec::transversal(ContractSet::of({0, 1, 2}), {1, 1}, {{0, {0}}, {1, {0, 1}}});
}

// Chile data of the e3 fixture: capacity 2, priority 0 > 1 > 2, contract 2
// returning, one reserved seat that only contract 1 can fill.
inline test_oracles::ChileData e3_data() {
  test_oracles::ChileData d;
  d.capacity = 2;
  d.priority = {0, 1, 2};
  d.returning = ContractSet::of({2});
  d.graph = {{1}, {{1, {0}}}};
  return d;
}

// Chile data extracted from a single-institution problem.
inline test_oracles::ChileData chile_data_of(const Problem& p, int institution = 0) {
  const InstitutionSpec& spec = p.institution(institution);
  test_oracles::ChileData d;
  d.capacity = spec.capacity;
  d.priority = spec.priority;
  d.returning = spec.returning;
  d.graph.reserves = spec.reserves;
  d.graph.traits = spec.traits;
  return d;
}

// One contract per pair, every capacity 1, seeded priorities. Unit capacities
// guarantee contention, which the manipulability searches need.
inline Problem unit_capacity_shape(int agents, int institutions, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> agent_names, inst_names;
  for (int a = 0; a < agents; ++a) agent_names.push_back("a" + std::to_string(a));
  for (int i = 0; i < institutions; ++i) inst_names.push_back("i" + std::to_string(i));
  std::vector<Contract> contracts;
  for (int a = 0; a < agents; ++a)
    for (int i = 0; i < institutions; ++i) contracts.push_back({a, i, ""});
  std::vector<Preference> prefs;
  for (int a = 0; a < agents; ++a) {
    std::vector<int> order{Preference::kNull};
    for (std::size_t id = 0; id < contracts.size(); ++id)
      if (contracts[id].agent == a) order.push_back(static_cast<int>(id));
    rng.shuffle(order);
    prefs.emplace_back(std::move(order));
  }
  std::vector<InstitutionSpec> specs(institutions);
  for (int i = 0; i < institutions; ++i) {
    specs[i].capacity = 1;
    for (std::size_t id = 0; id < contracts.size(); ++id)
      if (contracts[id].institution == i) specs[i].priority.push_back(static_cast<int>(id));
    rng.shuffle(specs[i].priority);
  }
  return Problem::make(std::move(agent_names), std::move(inst_names), std::move(contracts),
                       std::move(prefs), std::move(specs));
}

// Immediate-acceptance ("Boston-like") rule with responsive institutions:
// accepted contracts are final, rejected agents move on. Used as the known
// manipulable counterpoint to deferred acceptance.
inline RuleUnderTest immediate_acceptance_rule() {
  return {"immediate acceptance", [](const Problem& p) {
            ContractSet placed;
            std::vector<int> remaining(p.institution_count());
            for (int i = 0; i < p.institution_count(); ++i)
              remaining[i] = p.institution(i).capacity;
            std::vector<std::size_t> next(p.agent_count(), 0);
            std::vector<char> active(p.agent_count(), 1);
            bool moved = true;
            while (moved) {
              moved = false;
              std::vector<ContractSet> proposals(p.institution_count());
              for (int a = 0; a < p.agent_count(); ++a) {
                if (!active[a]) continue;
                const auto& order = p.preference(a).order();
                if (next[a] >= order.size() || order[next[a]] == Preference::kNull) {
                  active[a] = 0;
                  continue;
                }
                const int id = order[next[a]];
                ++next[a];
                proposals[p.contract(id).institution].insert(id);
                moved = true;
              }
              for (int i = 0; i < p.institution_count(); ++i) {
                const PriorityOrder pr = p.priority_order(i);
                int room = remaining[i];
                for (int id : pr.order()) {
                  if (!proposals[i].contains(id)) continue;
                  if (room > 0) {
                    placed.insert(id);
                    --room;
                    active[p.contract(id).agent] = 0;
                  }
                }
                remaining[i] = room;
              }
            }
            return Matching::from_set(p, placed);
          }};
}

}  // namespace matchforge::test_fixtures

#endif
