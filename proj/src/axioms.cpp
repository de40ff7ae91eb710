#include "matchforge/axioms.hpp"

#include <algorithm>

namespace matchforge {

// ---------------------------------------------------------------------------
// Punctual axiom library

PunctualAxiom phi_non_wastefulness(ContractSet ground, int capacity) {
  if (capacity < 0) throw InstanceError("non-wastefulness: negative capacity");
  return {"non-wastefulness", ground, [capacity](ContractSet x, ContractSet y) {
            return y.size() == std::min(x.size(), capacity);
          }};
}

PunctualAxiom phi_no_justified_envy(const PriorityOrder& priority) {
  PriorityOrder pr = priority;
  return {"no justified envy", priority.ground(), [pr](ContractSet x, ContractSet y) {
            for (int chosen : y)
              for (int rejected : x - y)
                if (!pr.prefers(chosen, rejected)) return false;
            return true;
          }};
}

PunctualAxiom phi_guaranteed_enrollment(ContractSet ground, ContractSet returning) {
  return {"guaranteed enrollment for returning students", ground,
          [returning](ContractSet x, ContractSet y) { return (x & returning).subset_of(y); }};
}

PunctualAxiom phi_max_reserve_utilization(const RankOracle& oracle, int capacity,
                                          ContractSet returning) {
  RankOracle o = oracle.with_memo();
  return {"maximal utilization of reservations", oracle.ground(),
          [o, capacity, returning](ContractSet x, ContractSet y) {
            if (y.size() < capacity) {
              const int r = o.rank(y);
              for (int rejected : x - y)
                if (o.rank(y.with(rejected)) == r + 1) return false;
              return true;
            }
            if (y.size() == capacity) {
              const int r = o.rank(y);
              for (int rejected : x - y)
                for (int held : y - returning)
                  if (o.rank(y.without(held).with(rejected)) > r) return false;
              return true;
            }
            return false;  // |Y| > q is in neither branch of the correspondence
          }};
}

PunctualAxiom phi_no_justified_envy_reserves(const RankOracle& oracle,
                                             const PriorityOrder& priority,
                                             ContractSet returning) {
  RankOracle o = oracle.with_memo();
  PriorityOrder pr = priority;
  return {"no justified envy under reserves", oracle.ground(),
          [o, pr, returning](ContractSet x, ContractSet y) {
            const int r = o.rank(y);
            for (int chosen : y - returning)
              for (int rejected : x - y)
                if (pr.prefers(rejected, chosen) &&
                    o.rank(y.without(chosen).with(rejected)) >= r)
                  return false;
            return true;
          }};
}

PunctualAxiom phi_feasibility(const RankOracle& oracle) {
  RankOracle o = oracle;
  return {"feasibility", oracle.ground(),
          [o](ContractSet, ContractSet y) { return o.is_independent(y); }};
}

PunctualAxiom phi_rank_maximality(const RankOracle& oracle) {
  RankOracle o = oracle.with_memo();
  return {"rank maximality", oracle.ground(),
          [o](ContractSet x, ContractSet y) { return o.rank(y) == o.rank(x); }};
}

PunctualAxiom phi_no_justified_envy_rank(const RankOracle& oracle,
                                         const PriorityOrder& priority) {
  RankOracle o = oracle.with_memo();
  PriorityOrder pr = priority;
  return {"no justified envy under rank", oracle.ground(),
          [o, pr](ContractSet x, ContractSet y) {
            const int r = o.rank(y);
            for (int chosen : y)
              for (int rejected : x - y)
                if (pr.prefers(rejected, chosen) &&
                    o.rank(y.without(chosen).with(rejected)) >= r)
                  return false;
            return true;
          }};
}

PunctualAxiom phi_matroidal_objectives(const RankOracle& oracle) {
  RankOracle o = oracle.with_memo();
  return {"matroidal objectives", oracle.ground(),
          [o](ContractSet x, ContractSet y) { return o.rank(y) == o.rank(x); }};
}

// ---------------------------------------------------------------------------
// Axiom sets per institution

namespace {

RankOracle capped_oracle(const Problem& p, int institution) {
  return truncate(institution_oracle(p, institution), p.institution(institution).capacity);
}

}  // namespace

PunctualAxiom builtin_axiom(const Problem& p, int institution, const std::string& name) {
  const InstitutionSpec& spec = p.institution(institution);
  const ContractSet ground = p.institution_contracts(institution);
  if (name == "non-wastefulness") return phi_non_wastefulness(ground, spec.capacity);
  if (name == "no justified envy") return phi_no_justified_envy(p.priority_order(institution));
  if (name == "guaranteed enrollment for returning students")
    return phi_guaranteed_enrollment(ground, spec.returning);
  if (name == "maximal utilization of reservations") {
    if (spec.types.empty())
      throw InstanceError("axiom \"maximal utilization of reservations\" needs reserve data at " +
                          p.institution_name(institution));
    return phi_max_reserve_utilization(transversal_oracle(p, institution), spec.capacity,
                                       spec.returning);
  }
  if (name == "no justified envy under reserves") {
    if (spec.types.empty())
      throw InstanceError("axiom \"no justified envy under reserves\" needs reserve data at " +
                          p.institution_name(institution));
    return phi_no_justified_envy_reserves(transversal_oracle(p, institution),
                                          p.priority_order(institution), spec.returning);
  }
  if (name == "feasibility") return phi_feasibility(institution_oracle(p, institution));
  if (name == "rank maximality") return phi_rank_maximality(institution_oracle(p, institution));
  if (name == "no justified envy under rank")
    return phi_no_justified_envy_rank(institution_oracle(p, institution),
                                      p.priority_order(institution));
  if (name == "no justified envy under rank (capped)")
    return phi_no_justified_envy_rank(capped_oracle(p, institution),
                                      p.priority_order(institution));
  if (name == "matroidal objectives")
    return phi_matroidal_objectives(capped_oracle(p, institution));
  throw InstanceError("unknown punctual axiom \"" + name + "\"");
}

std::vector<PunctualAxiom> builtin_axioms(const Problem& p, int institution) {
  const InstitutionSpec& spec = p.institution(institution);
  std::vector<PunctualAxiom> out;
  out.push_back(builtin_axiom(p, institution, "non-wastefulness"));
  out.push_back(builtin_axiom(p, institution, "no justified envy"));
  out.push_back(builtin_axiom(p, institution, "guaranteed enrollment for returning students"));
  if (!spec.types.empty()) {
    out.push_back(builtin_axiom(p, institution, "maximal utilization of reservations"));
    out.push_back(builtin_axiom(p, institution, "no justified envy under reserves"));
  }
  if (spec.matroid || !spec.types.empty()) {
    out.push_back(builtin_axiom(p, institution, "feasibility"));
    out.push_back(builtin_axiom(p, institution, "rank maximality"));
    out.push_back(builtin_axiom(p, institution, "no justified envy under rank"));
    out.push_back(builtin_axiom(p, institution, "matroidal objectives"));
  }
  return out;
}

std::vector<PunctualAxiom> characterizing_axioms(const Problem& p, int institution, RuleKind kind) {
  auto get = [&](const char* n) { return builtin_axiom(p, institution, n); };
  switch (kind) {
    case RuleKind::responsive:
      return {get("non-wastefulness"), get("no justified envy")};
    case RuleKind::guaranteed_enrollment:
      return {get("guaranteed enrollment for returning students"),
              get("maximal utilization of reservations"),
              get("no justified envy under reserves"), get("non-wastefulness")};
    case RuleKind::matroid:
      return {get("matroidal objectives"), get("no justified envy under rank (capped)"),
              get("non-wastefulness")};
    case RuleKind::greedy: {
      // The uncapped feasibility matroid, not the capacity-truncated one.
      RankOracle o = institution_oracle(p, institution);
      return {phi_feasibility(o), phi_rank_maximality(o),
              phi_no_justified_envy_rank(o, p.priority_order(institution))};
    }
  }
  throw DomainError("unreachable rule kind");
}

// ---------------------------------------------------------------------------
// Satisfaction and extension

Report satisfies_punctual(const ChoiceFunction& c, const PunctualAxiom& axiom, int guard) {
  const int n = c.ground().size();
  if (n > guard)
    throw GuardError("punctual check on \"" + c.name() + "\": ground has " + std::to_string(n) +
                     " contracts, guard is " + std::to_string(guard));
  const std::vector<int> pos = c.ground().ids();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet x = nth_subset(j, pos);
    const ContractSet y = c.choose(x);
    if (!axiom.member(x, y))
      return Report::fail("\"" + c.name() + "\" violates \"" + axiom.name + "\" at X=" +
                          to_string(x) + ": chose " + to_string(y));
  }
  return Report::ok();
}

MatchingAxiom extend(const PunctualAxiom& axiom, int institution) {
  PunctualAxiom phi = axiom;
  return {phi.name + " (extension)",
          [phi, institution](const Matching& x, const Problem& p) {
            const ContractSet d = demand(p, x, institution);
            const ContractSet held = x.contracts() & p.institution_contracts(institution);
            if (phi.member(d, held)) return Report::ok();
            return Report::fail("matching violates the extension of \"" + phi.name +
                                "\" at institution " + p.institution_name(institution) +
                                ": demand=" + to_string(d) + " held=" + to_string(held));
          }};
}

// ---------------------------------------------------------------------------
// Direct matching axioms

MatchingAxiom individual_rationality() {
  return {"individual rationality", [](const Matching& x, const Problem& p) {
            for (int a = 0; a < p.agent_count(); ++a) {
              const int held = x.assigned(a);
              if (held != Preference::kNull && !p.preference(a).acceptable(held))
                return Report::fail("agent " + p.agent_name(a) + " holds unacceptable contract " +
                                    p.contract_name(held));
            }
            return Report::ok();
          }};
}

namespace {

// Shared quantifier: contracts of institution i that their agent strictly
// prefers to their assignment (the demanded-but-unmatched contracts).
ContractSet strict_demanders(const Problem& p, const Matching& x, int i) {
  ContractSet out;
  for (int id : p.institution_contracts(i) - x.contracts()) {
    const int a = p.contract(id).agent;
    if (p.preference(a).strictly_prefers(id, x.assigned(a))) out.insert(id);
  }
  return out;
}

MatchingAxiom direct_nonwastefulness_at(int i) {
  return {"non-wastefulness", [i](const Matching& x, const Problem& p) {
            const int q = p.institution(i).capacity;
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            if (held.size() > q)
              return Report::fail("institution " + p.institution_name(i) + " holds " +
                                  std::to_string(held.size()) + " contracts over capacity " +
                                  std::to_string(q));
            const ContractSet want = strict_demanders(p, x, i);
            if (!want.empty() && held.size() != q)
              return Report::fail("institution " + p.institution_name(i) +
                                  " has an empty seat while contract " +
                                  p.contract_name(*want.begin()) + " is demanded");
            return Report::ok();
          }};
}

MatchingAxiom direct_no_justified_envy_at(int i) {
  return {"no justified envy", [i](const Matching& x, const Problem& p) {
            const PriorityOrder pr = p.priority_order(i);
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            for (int want : strict_demanders(p, x, i))
              for (int have : held)
                if (pr.prefers(want, have))
                  return Report::fail("contract " + p.contract_name(want) +
                                      " has justified envy against " + p.contract_name(have) +
                                      " at " + p.institution_name(i));
            return Report::ok();
          }};
}

MatchingAxiom direct_guaranteed_enrollment_at(int i) {
  return {"guaranteed enrollment for returning students",
          [i](const Matching& x, const Problem& p) {
            for (int id : p.institution(i).returning - x.contracts()) {
              const int a = p.contract(id).agent;
              if (!p.preference(a).strictly_prefers(x.assigned(a), id))
                return Report::fail("returning contract " + p.contract_name(id) +
                                    " is unmatched and not beaten by the agent's assignment");
            }
            return Report::ok();
          }};
}

MatchingAxiom direct_max_reserve_utilization_at(int i) {
  return {"maximal utilization of reservations", [i](const Matching& x, const Problem& p) {
            const RankOracle o = transversal_oracle(p, i).with_memo();
            const int q = p.institution(i).capacity;
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            const ContractSet returning = p.institution(i).returning;
            // The correspondence has no branch above the capacity, so an
            // overfull institution violates the axiom outright.
            if (held.size() > q)
              return Report::fail("institution " + p.institution_name(i) + " holds " +
                                  std::to_string(held.size()) + " contracts over capacity " +
                                  std::to_string(q));
            const int r = o.rank(held);
            for (int want : strict_demanders(p, x, i)) {
              if (held.size() < q) {
                if (o.rank(held.with(want)) != r)
                  return Report::fail("contract " + p.contract_name(want) +
                                      " could raise reserve utilization on an empty seat at " +
                                      p.institution_name(i));
              } else if (held.size() == q) {
                for (int have : held - returning)
                  if (o.rank(held.without(have).with(want)) > r)
                    return Report::fail("replacing " + p.contract_name(have) + " with " +
                                        p.contract_name(want) + " raises reserve utilization at " +
                                        p.institution_name(i));
              }
            }
            return Report::ok();
          }};
}

MatchingAxiom direct_no_justified_envy_reserves_at(int i) {
  return {"no justified envy under reserves", [i](const Matching& x, const Problem& p) {
            const RankOracle o = transversal_oracle(p, i).with_memo();
            const PriorityOrder pr = p.priority_order(i);
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            const ContractSet returning = p.institution(i).returning;
            const int r = o.rank(held);
            for (int want : strict_demanders(p, x, i))
              for (int have : held - returning)
                if (pr.prefers(want, have) && o.rank(held.without(have).with(want)) >= r)
                  return Report::fail("contract " + p.contract_name(want) +
                                      " has justified envy under reserves against " +
                                      p.contract_name(have) + " at " + p.institution_name(i));
            return Report::ok();
          }};
}

MatchingAxiom direct_feasibility_at(int i) {
  return {"feasibility", [i](const Matching& x, const Problem& p) {
            const RankOracle o = institution_oracle(p, i);
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            if (!o.is_independent(held))
              return Report::fail("institution " + p.institution_name(i) +
                                  " holds an infeasible set " + to_string(held));
            return Report::ok();
          }};
}

MatchingAxiom direct_rank_maximality_at(int i) {
  return {"rank maximality", [i](const Matching& x, const Problem& p) {
            const RankOracle o = institution_oracle(p, i).with_memo();
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            const int r = o.rank(held);
            for (int want : strict_demanders(p, x, i))
              if (o.rank(held.with(want)) != r)
                return Report::fail("contract " + p.contract_name(want) +
                                    " could be added without violating feasibility at " +
                                    p.institution_name(i));
            return Report::ok();
          }};
}

MatchingAxiom direct_no_justified_envy_rank_at(int i, bool capped) {
  return {"no justified envy under rank", [i, capped](const Matching& x, const Problem& p) {
            RankOracle o = institution_oracle(p, i);
            if (capped) o = truncate(o, p.institution(i).capacity);
            o = o.with_memo();
            const PriorityOrder pr = p.priority_order(i);
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            const int r = o.rank(held);
            for (int want : strict_demanders(p, x, i))
              for (int have : held)
                if (pr.prefers(want, have) && o.rank(held.without(have).with(want)) >= r)
                  return Report::fail("contract " + p.contract_name(want) +
                                      " has justified envy under rank against " +
                                      p.contract_name(have) + " at " + p.institution_name(i));
            return Report::ok();
          }};
}

MatchingAxiom direct_matroidal_objectives_at(int i) {
  return {"matroidal objectives", [i](const Matching& x, const Problem& p) {
            const RankOracle o =
                truncate(institution_oracle(p, i), p.institution(i).capacity).with_memo();
            const ContractSet held = x.contracts() & p.institution_contracts(i);
            const int r = o.rank(held);
            for (int want : strict_demanders(p, x, i))
              if (o.rank(held.with(want)) != r)
                return Report::fail("contract " + p.contract_name(want) +
                                    " would raise the rank at " + p.institution_name(i));
            return Report::ok();
          }};
}

MatchingAxiom all_institutions(const Problem& p, const std::string& name,
                               MatchingAxiom (*make_at)(int)) {
  std::vector<MatchingAxiom> per;
  for (int i = 0; i < p.institution_count(); ++i) per.push_back(make_at(i));
  return {name, [per](const Matching& x, const Problem& prob) {
            for (const MatchingAxiom& ax : per) {
              Report r = ax.check(x, prob);
              if (!r.pass) return r;
            }
            return Report::ok();
          }};
}

}  // namespace

MatchingAxiom direct_matching_axiom(const Problem& p, int institution, const std::string& name) {
  const InstitutionSpec& spec = p.institution(institution);
  if (name == "non-wastefulness") return direct_nonwastefulness_at(institution);
  if (name == "no justified envy") return direct_no_justified_envy_at(institution);
  if (name == "guaranteed enrollment for returning students")
    return direct_guaranteed_enrollment_at(institution);
  if (name == "maximal utilization of reservations" || name == "no justified envy under reserves") {
    if (spec.types.empty())
      throw InstanceError("axiom \"" + name + "\" needs reserve data at " +
                          p.institution_name(institution));
    return name == "maximal utilization of reservations"
               ? direct_max_reserve_utilization_at(institution)
               : direct_no_justified_envy_reserves_at(institution);
  }
  if (name == "feasibility") return direct_feasibility_at(institution);
  if (name == "rank maximality") return direct_rank_maximality_at(institution);
  if (name == "no justified envy under rank")
    return direct_no_justified_envy_rank_at(institution, /*capped=*/false);
  if (name == "no justified envy under rank (capped)")
    return direct_no_justified_envy_rank_at(institution, /*capped=*/true);
  if (name == "matroidal objectives") return direct_matroidal_objectives_at(institution);
  throw InstanceError("unknown matching axiom \"" + name + "\"");
}

std::vector<MatchingAxiom> matching_axiom_library(const Problem& p) {
  std::vector<MatchingAxiom> out;
  out.push_back(individual_rationality());
  out.push_back(all_institutions(p, "non-wastefulness", &direct_nonwastefulness_at));
  out.push_back(all_institutions(p, "no justified envy", &direct_no_justified_envy_at));

  bool any_reserves = false, any_matroid = false;
  for (int i = 0; i < p.institution_count(); ++i) {
    any_reserves |= !p.institution(i).types.empty();
    any_matroid |= p.institution(i).matroid.has_value() || !p.institution(i).types.empty();
  }
  if (any_reserves) {
    out.push_back(all_institutions(p, "guaranteed enrollment for returning students",
                                   &direct_guaranteed_enrollment_at));
    out.push_back(all_institutions(p, "maximal utilization of reservations",
                                   &direct_max_reserve_utilization_at));
    out.push_back(all_institutions(p, "no justified envy under reserves",
                                   &direct_no_justified_envy_reserves_at));
  }
  if (any_matroid) {
    out.push_back(all_institutions(p, "feasibility", &direct_feasibility_at));
    out.push_back(all_institutions(p, "rank maximality", &direct_rank_maximality_at));
    out.push_back(all_institutions(p, "no justified envy under rank", [](int i) {
      return direct_no_justified_envy_rank_at(i, false);
    }));
    out.push_back(all_institutions(p, "matroidal objectives", &direct_matroidal_objectives_at));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extension equivalence

Report verify_extension_equivalence(const std::vector<Problem>& profiles, int institution,
                                    const PunctualAxiom& axiom, const MatchingAxiom& direct,
                                    std::uint64_t matching_guard) {
  const MatchingAxiom extended = extend(axiom, institution);
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    const Problem& p = profiles[pi];

    std::uint64_t count = 1;
    for (int a = 0; a < p.agent_count(); ++a) {
      count *= static_cast<std::uint64_t>(p.agent_contracts(a).size()) + 1;
      if (count > matching_guard)
        throw GuardError("extension equivalence: matching space exceeds the guard");
    }

    std::vector<std::vector<int>> options(p.agent_count());
    for (int a = 0; a < p.agent_count(); ++a) {
      options[a].push_back(Preference::kNull);
      for (int id : p.agent_contracts(a)) options[a].push_back(id);
    }
    std::vector<std::size_t> pick(p.agent_count(), 0);
    for (std::uint64_t it = 0; it < count; ++it) {
      ContractSet m;
      for (int a = 0; a < p.agent_count(); ++a)
        if (options[a][pick[a]] != Preference::kNull) m.insert(options[a][pick[a]]);
      const Matching x = Matching::from_set(p, m);
      const bool via_ext = extended.check(x, p).pass;
      const bool via_direct = direct.check(x, p).pass;
      if (via_ext != via_direct)
        return Report::fail("extension of \"" + axiom.name + "\" and direct \"" + direct.name +
                            "\" disagree on matching " + to_string(m) + " (profile #" +
                            std::to_string(pi) + "): extension says " +
                            (via_ext ? "pass" : "fail") + ", direct says " +
                            (via_direct ? "pass" : "fail"));
      // odometer
      for (int a = 0; a < p.agent_count(); ++a) {
        if (++pick[a] < options[a].size()) break;
        pick[a] = 0;
      }
    }
  }
  return Report::ok();
}

}  // namespace matchforge
