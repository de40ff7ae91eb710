#include "matchforge/engine.hpp"

#include <algorithm>
#include <optional>

namespace matchforge {

// ---------------------------------------------------------------------------
// Deferred acceptance

DATrace run_da(const Problem& p, const std::vector<ChoiceFunction>& rules) {
  if (static_cast<int>(rules.size()) != p.institution_count())
    throw InstanceError("deferred acceptance: expected one choice rule per institution");

  DATrace trace;
  std::vector<ContractSet> held(p.institution_count());
  std::vector<std::size_t> next(p.agent_count(), 0);  // cursor into the preference order
  std::vector<char> must_propose(p.agent_count(), 1);

  const int max_steps = p.contract_count() + 1;
  for (int step = 1;; ++step) {
    if (step > max_steps)
      throw ContractViolation("deferred acceptance failed to terminate within " +
                              std::to_string(max_steps) + " steps");
    DAStep rec;
    rec.step = step;
    rec.institutions.resize(p.institution_count());

    std::vector<ContractSet> proposals(p.institution_count());
    for (int a = 0; a < p.agent_count(); ++a) {
      if (!must_propose[a]) continue;
      must_propose[a] = 0;
      const std::vector<int>& order = p.preference(a).order();
      // Next most preferred acceptable contract not yet proposed; the cursor
      // parks on the null contract once acceptable ones run out.
      if (next[a] < order.size() && order[next[a]] != Preference::kNull) {
        const int id = order[next[a]];
        ++next[a];
        proposals[p.contract(id).institution].insert(id);
        rec.proposals.push_back(id);
      }
    }
    std::sort(rec.proposals.begin(), rec.proposals.end());

    bool any_rejection = false;
    for (int i = 0; i < p.institution_count(); ++i) {
      const ContractSet considered = held[i] | proposals[i];
      ContractSet accepted;
      try {
        accepted = rules[i].choose(considered);
      } catch (const ContractViolation& e) {
        throw ContractViolation(std::string(e.what()) + " (step " + std::to_string(step) + ")");
      }
      const ContractSet rejected = considered - accepted;
      rec.institutions[i] = {considered, accepted, rejected};
      held[i] = accepted;
      for (int id : rejected) {
        must_propose[p.contract(id).agent] = 1;
        any_rejection = true;
      }
    }

    trace.steps.push_back(std::move(rec));
    if (!any_rejection) break;
  }

  ContractSet final_set;
  for (const ContractSet& h : held) final_set = final_set | h;
  trace.outcome = Matching::from_set(p, final_set);
  return trace;
}

// ---------------------------------------------------------------------------
// Stability

Report is_stable(const Matching& x, const Problem& p, const std::vector<ChoiceFunction>& rules) {
  if (static_cast<int>(rules.size()) != p.institution_count())
    throw InstanceError("stability check: expected one choice rule per institution");

  Report ir = individual_rationality().check(x, p);
  if (!ir.pass) return Report::fail("individual rationality: " + ir.witness);

  for (int i = 0; i < p.institution_count(); ++i) {
    const ContractSet held = x.contracts() & p.institution_contracts(i);
    if (rules[i].choose(held) != held)
      return Report::fail("institution rationality: " + p.institution_name(i) +
                          " would drop part of its own assignment " + to_string(held));
  }

  for (int id : p.universe() - x.contracts()) {
    const int a = p.contract(id).agent;
    const int i = p.contract(id).institution;
    if (!p.preference(a).strictly_prefers(id, x.assigned(a))) continue;
    const ContractSet held = x.contracts() & p.institution_contracts(i);
    if (rules[i].choose(held.with(id)).contains(id))
      return Report::fail("blocking contract " + p.contract_name(id) + ": agent " +
                          p.agent_name(a) + " prefers it and " + p.institution_name(i) +
                          " would take it");
  }
  return Report::ok();
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Matching> enumerate_matchings(const Problem& p, std::uint64_t guard) {
  std::uint64_t count = 1;
  for (int a = 0; a < p.agent_count(); ++a) {
    count *= static_cast<std::uint64_t>(p.agent_contracts(a).size()) + 1;
    if (count > guard)
      throw GuardError("matching enumeration: space exceeds the guard of " + std::to_string(guard));
  }
  std::vector<std::vector<int>> options(p.agent_count());
  for (int a = 0; a < p.agent_count(); ++a) {
    options[a].push_back(Preference::kNull);
    for (int id : p.agent_contracts(a)) options[a].push_back(id);
  }
  std::vector<Matching> out;
  out.reserve(count);
  std::vector<std::size_t> pick(p.agent_count(), 0);
  for (std::uint64_t it = 0; it < count; ++it) {
    ContractSet m;
    for (int a = 0; a < p.agent_count(); ++a)
      if (options[a][pick[a]] != Preference::kNull) m.insert(options[a][pick[a]]);
    out.push_back(Matching::from_set(p, m));
    for (int a = 0; a < p.agent_count(); ++a) {
      if (++pick[a] < options[a].size()) break;
      pick[a] = 0;
    }
  }
  return out;
}

std::vector<Matching> enumerate_stable(const Problem& p, const std::vector<ChoiceFunction>& rules,
                                       std::uint64_t guard) {
  std::vector<Matching> out;
  for (const Matching& m : enumerate_matchings(p, guard))
    if (is_stable(m, p, rules).pass) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Profile space

namespace {

std::vector<Preference> all_orders(ContractSet own) {
  std::vector<int> base;
  base.push_back(Preference::kNull);
  for (int id : own) base.push_back(id);
  std::sort(base.begin(), base.end());
  std::vector<Preference> out;
  do {
    out.emplace_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

}  // namespace

ProfileSpace::ProfileSpace(const Problem& shape, std::uint64_t guard) : shape_(shape) {
  orders_.resize(shape.agent_count());
  stride_.resize(shape.agent_count());
  for (int a = 0; a < shape.agent_count(); ++a) {
    orders_[a] = all_orders(shape.agent_contracts(a));
    stride_[a] = size_;
    size_ *= orders_[a].size();
    if (size_ > guard)
      throw GuardError("profile enumeration: space exceeds the guard of " + std::to_string(guard));
  }
}

int ProfileSpace::order_index(std::uint64_t profile, int agent) const {
  return static_cast<int>((profile / stride_[agent]) % orders_[agent].size());
}

std::uint64_t ProfileSpace::with_order(std::uint64_t profile, int agent, int order) const {
  const int current = order_index(profile, agent);
  return profile + (static_cast<std::uint64_t>(order) - current) * stride_[agent];
}

Problem ProfileSpace::problem_at(std::uint64_t index) const {
  std::vector<Preference> prefs(shape_.agent_count());
  for (int a = 0; a < shape_.agent_count(); ++a) prefs[a] = orders_[a][order_index(index, a)];
  return Problem::with_preferences(shape_, std::move(prefs));
}

std::uint64_t ProfileSpace::index_of(const Problem& p) const {
  std::uint64_t idx = 0;
  for (int a = 0; a < shape_.agent_count(); ++a) {
    const std::vector<int>& want = p.preference(a).order();
    bool found = false;
    for (std::size_t k = 0; k < orders_[a].size(); ++k)
      if (orders_[a][k].order() == want) {
        idx += k * stride_[a];
        found = true;
        break;
      }
    if (!found) throw DomainError("profile is not in the enumerated space");
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Strategy-proofness

RuleUnderTest da_rule(const Problem& shape, RuleKind kind) {
  auto rules = std::make_shared<std::vector<ChoiceFunction>>(make_rule_profile(shape, kind));
  return {"deferred acceptance (" + rule_kind_name(kind) + ")",
          [rules](const Problem& p) { return run_da(p, *rules).outcome; }};
}

namespace {

std::string order_to_string(const Problem& p, const Preference& pref) {
  std::string out = "[";
  bool first = true;
  for (int id : pref.order()) {
    if (!first) out += " ";
    out += (id == Preference::kNull) ? "null" : p.contract_name(id);
    first = false;
  }
  return out + "]";
}

}  // namespace

Report check_strategy_proofness(const RuleUnderTest& rule, const Problem& shape,
                                std::uint64_t profile_guard) {
  // Guard on the profile space itself (sizes multiply factorially).
  const ProfileSpace space(shape, profile_guard);

  std::vector<std::optional<Matching>> cache(space.size());
  auto outcome = [&](std::uint64_t idx) -> const Matching& {
    if (!cache[idx]) cache[idx] = rule.evaluate(space.problem_at(idx));
    return *cache[idx];
  };

  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    const Matching& truthful = outcome(idx);
    for (int a = 0; a < shape.agent_count(); ++a) {
      const Preference& truth = space.order(a, space.order_index(idx, a));
      for (int alt = 0; alt < space.order_count(a); ++alt) {
        if (alt == space.order_index(idx, a)) continue;
        const Matching& deviated = outcome(space.with_order(idx, a, alt));
        if (truth.strictly_prefers(deviated.assigned(a), truthful.assigned(a))) {
          const Problem at = space.problem_at(idx);
          return Report::fail("\"" + rule.name + "\" is manipulable: agent " + at.agent_name(a) +
                              " with true order " + order_to_string(at, truth) +
                              " gains by reporting " + order_to_string(at, space.order(a, alt)) +
                              " (profile #" + std::to_string(idx) + ")");
        }
      }
    }
  }
  return Report::ok();
}

// ---------------------------------------------------------------------------
// Characterization

std::string to_string(CharacterizationOutcome outcome) {
  switch (outcome) {
    case CharacterizationOutcome::characterized: return "characterized";
    case CharacterizationOutcome::not_unique: return "not-unique";
    case CharacterizationOutcome::incompatible: return "incompatible";
    case CharacterizationOutcome::target_mismatch: return "target-mismatch";
  }
  return "?";
}

CharacterizationReport verify_characterization(const std::vector<PunctualAxiom>& axioms,
                                               const ChoiceFunction& target, int guard) {
  const ContractSet ground = target.ground();
  const int n = ground.size();
  if (n > guard)
    throw GuardError("characterization: ground has " + std::to_string(n) +
                     " contracts, guard is " + std::to_string(guard));
  for (const PunctualAxiom& ax : axioms)
    if (ax.ground != ground)
      throw DomainError("characterization: axiom \"" + ax.name +
                        "\" lives on a different ground than the target");

  const std::vector<int> pos = ground.ids();
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet x = nth_subset(j, pos);
    const ContractSet chosen = target.choose(x);
    std::vector<ContractSet> allowed;
    // Candidates are subsets of x, scanned in canonical order.
    const std::vector<int> xpos = x.ids();
    const std::uint64_t sub_total = std::uint64_t{1} << x.size();
    for (std::uint64_t s = 0; s < sub_total; ++s) {
      const ContractSet y = nth_subset(s, xpos);
      bool ok = true;
      for (const PunctualAxiom& ax : axioms)
        if (!ax.member(x, y)) {
          ok = false;
          break;
        }
      if (ok) {
        allowed.push_back(y);
        if (allowed.size() > 1) break;  // enough to disprove uniqueness
      }
    }
    if (allowed.empty())
      return {CharacterizationOutcome::incompatible,
              "no candidate choice satisfies all axioms at X=" + to_string(x)};
    if (allowed.size() > 1)
      return {CharacterizationOutcome::not_unique,
              "two selections at X=" + to_string(x) + ": " + to_string(allowed[0]) + " and " +
                  to_string(allowed[1])};
    if (allowed[0] != chosen)
      return {CharacterizationOutcome::target_mismatch,
              "at X=" + to_string(x) + " the axioms force " + to_string(allowed[0]) +
                  " but the target chooses " + to_string(chosen)};
  }
  return {CharacterizationOutcome::characterized, ""};
}

// ---------------------------------------------------------------------------
// Lemma chain

LemmaChainReport verify_lemma_chain(const Problem& shape, const std::vector<ChoiceFunction>& rules,
                                    const std::vector<std::vector<PunctualAxiom>>& axioms,
                                    std::uint64_t profile_guard, std::uint64_t matching_guard) {
  if (static_cast<int>(axioms.size()) != shape.institution_count())
    throw InstanceError("lemma chain: expected one axiom set per institution");

  std::vector<MatchingAxiom> extended;
  for (int i = 0; i < shape.institution_count(); ++i)
    for (const PunctualAxiom& phi : axioms[i]) extended.push_back(extend(phi, i));
  const MatchingAxiom ir = individual_rationality();

  auto satisfies_all = [&](const Matching& m, const Problem& p) {
    if (!ir.check(m, p).pass) return false;
    for (const MatchingAxiom& ax : extended)
      if (!ax.check(m, p).pass) return false;
    return true;
  };

  LemmaChainReport report;
  const ProfileSpace space(shape, profile_guard);
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    const Problem p = space.problem_at(idx);

    if (report.da_satisfies_axioms.pass) {
      const Matching da = run_da(p, rules).outcome;
      if (!ir.check(da, p).pass)
        report.da_satisfies_axioms =
            Report::fail("DA outcome violates individual rationality at profile #" +
                         std::to_string(idx));
      for (const MatchingAxiom& ax : extended) {
        Report r = ax.check(da, p);
        if (!r.pass) {
          report.da_satisfies_axioms = Report::fail("profile #" + std::to_string(idx) + ": " + r.witness);
          break;
        }
      }
    }

    if (report.axioms_imply_stable.pass) {
      for (const Matching& m : enumerate_matchings(p, matching_guard)) {
        if (!satisfies_all(m, p)) continue;
        Report st = is_stable(m, p, rules);
        if (!st.pass) {
          report.axioms_imply_stable =
              Report::fail("matching " + to_string(m.contracts()) + " at profile #" +
                           std::to_string(idx) +
                           " satisfies IR and all extended axioms but is unstable: " + st.witness);
          break;
        }
      }
    }

    if (!report.axioms_imply_stable.pass && !report.da_satisfies_axioms.pass) break;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Fixed counterexample regression

RegressionReport counterexample_regression() {
  // Two agents, one institution, one contract each: x (id 0) and y (id 1).
  InstitutionSpec spec;
  spec.capacity = 2;
  spec.priority = {0, 1};
  const Problem shape = Problem::make(
      {"a", "b"}, {"i"}, {{0, 0, ""}, {1, 0, ""}},
      {Preference({0, Preference::kNull}), Preference({1, Preference::kNull})}, {spec});

  const ContractSet ground = ContractSet::of({0, 1});
  const ContractSet both = ground;
  const ContractSet only_x = ContractSet::of({0});
  const ContractSet only_y = ContractSet::of({1});
  const ContractSet none;

  // The axiom: phi({x,y}) = {{x}}, phi({x}) = {{x}, {}}, phi({y}) = {{}}.
  PunctualAxiom phi{"two-contract fixture axiom", ground,
                    [=](ContractSet x, ContractSet y) {
                      if (x == both) return y == only_x;
                      if (x == only_x) return y == only_x || y == none;
                      if (x == only_y) return y == none;
                      return y == none;  // empty problem
                    }};

  // The rule that satisfies the axiom and is path independent.
  // Table order is the canonical subset order: {}, {x}, {y}, {x,y}.
  const ChoiceFunction rule =
      ChoiceFunction::from_table("fixture rule", ground, {none, only_x, none, only_x});
  // Its only sibling selection differs at {x}.
  const ChoiceFunction sibling =
      ChoiceFunction::from_table("fixture sibling", ground, {none, none, none, only_x});

  RegressionReport report;

  report.assertions.emplace_back("rule satisfies the axiom", satisfies_punctual(rule, phi));

  CharacterizationReport pinned = verify_characterization({phi}, rule);
  report.assertions.emplace_back(
      "axiom alone does not pin the rule down (multi-valued at {x})",
      pinned.outcome == CharacterizationOutcome::not_unique
          ? Report::ok()
          : Report::fail("expected not-unique, got " + to_string(pinned.outcome)));

  // Exactly one selection from the axiom passes path independence and size
  // monotonicity, and it is the rule above.
  const bool rule_pi = check_path_independence(rule).pass && check_size_monotonicity(rule).pass;
  const bool sibling_pi =
      check_path_independence(sibling).pass && check_size_monotonicity(sibling).pass;
  report.assertions.emplace_back(
      "the rule is the unique path-independent, size-monotonic selection",
      rule_pi && !sibling_pi
          ? Report::ok()
          : Report::fail(std::string("rule PI+SM: ") + (rule_pi ? "yes" : "no") +
                         ", sibling PI+SM: " + (sibling_pi ? "yes" : "no")));

  // The deviating matching rule: both contracts acceptable -> {x}; else {}.
  RuleUnderTest deviant{"fixture matching rule", [](const Problem& p) {
                          const bool a_in = p.preference(0).acceptable(0);
                          const bool b_in = p.preference(1).acceptable(1);
                          return Matching::from_set(p, (a_in && b_in) ? ContractSet::of({0})
                                                                      : ContractSet{});
                        }};

  const ProfileSpace space(shape);
  Report deviant_ok = Report::ok();
  const MatchingAxiom extended = extend(phi, 0);
  const MatchingAxiom ir = individual_rationality();
  for (std::uint64_t idx = 0; idx < space.size() && deviant_ok.pass; ++idx) {
    const Problem p = space.problem_at(idx);
    const Matching m = deviant.evaluate(p);
    if (!ir.check(m, p).pass)
      deviant_ok = Report::fail("deviant rule violates IR at profile #" + std::to_string(idx));
    else if (!extended.check(m, p).pass)
      deviant_ok =
          Report::fail("deviant rule violates the extended axiom at profile #" + std::to_string(idx));
  }
  if (deviant_ok.pass) deviant_ok = check_strategy_proofness(deviant, shape);
  report.assertions.emplace_back(
      "the deviating rule passes IR, strategy-proofness, and the extended axiom", deviant_ok);

  // And it differs from DA: when a accepts x and b rejects y, DA gives a the
  // contract while the deviating rule leaves everyone unassigned.
  const std::vector<ChoiceFunction> profile{rule};
  Report differs = Report::fail("no profile separates the deviating rule from DA");
  for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
    const Problem p = space.problem_at(idx);
    if (!p.preference(0).acceptable(0) || p.preference(1).acceptable(1)) continue;
    const Matching da = run_da(p, profile).outcome;
    const Matching dev = deviant.evaluate(p);
    if (da.assigned(0) == 0 && dev.assigned(0) == Preference::kNull) {
      differs = Report::ok();
      break;
    }
    differs = Report::fail("DA and the deviating rule agree on the separating profile");
  }
  report.assertions.emplace_back("the deviating rule differs from DA at the separating profile",
                                 differs);

  return report;
}

}  // namespace matchforge
