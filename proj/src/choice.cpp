#include "matchforge/choice.hpp"

#include <algorithm>

namespace matchforge {

// ---------------------------------------------------------------------------
// ChoiceFunction

ChoiceFunction::ChoiceFunction(std::string name, ContractSet ground, Evaluator evaluate)
    : name_(std::move(name)),
      ground_(ground),
      positions_(ground.ids()),
      evaluate_(std::move(evaluate)) {}

ChoiceFunction ChoiceFunction::from_table(std::string name, ContractSet ground,
                                          std::vector<ContractSet> table) {
  const std::uint64_t expected = std::uint64_t{1} << ground.size();
  if (table.size() != expected)
    throw InstanceError("tabulated rule: expected " + std::to_string(expected) +
                        " entries, got " + std::to_string(table.size()));
  ChoiceFunction c(std::move(name), ground, nullptr);
  for (std::uint64_t j = 0; j < expected; ++j) {
    const ContractSet x = nth_subset(j, c.positions_);
    if (!table[j].subset_of(x))
      throw InstanceError("tabulated rule: entry for " + to_string(x) +
                          " chooses " + to_string(table[j]) + ", not a subset");
  }
  c.table_ = std::move(table);
  return c;
}

ContractSet ChoiceFunction::choose(ContractSet x) const {
  if (!x.subset_of(ground_))
    throw DomainError("choice problem " + to_string(x) + " is not a subset of the ground " +
                      to_string(ground_));
  ContractSet chosen;
  if (!table_.empty()) {
    // Compact rank of x within the ground.
    std::uint64_t j = 0;
    for (std::size_t k = 0; k < positions_.size(); ++k)
      if (x.contains(positions_[k])) j |= std::uint64_t{1} << k;
    chosen = table_[j];
  } else {
    chosen = evaluate_(x);
  }
  if (!chosen.subset_of(x))
    throw ContractViolation("choice rule \"" + name_ + "\" returned " + to_string(chosen) +
                            " which is not a subset of " + to_string(x));
  return chosen;
}

void ChoiceFunction::tabulate(int guard) {
  if (is_tabulated()) return;
  const int n = ground_.size();
  if (n > guard)
    throw GuardError("tabulation of \"" + name_ + "\": ground has " + std::to_string(n) +
                     " contracts, guard is " + std::to_string(guard));
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<ContractSet> table(total);
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet x = nth_subset(j, positions_);
    table[j] = choose(x);
  }
  table_ = std::move(table);
}

const std::vector<ContractSet>& ChoiceFunction::table() const {
  if (table_.empty()) throw DomainError("choice rule \"" + name_ + "\" is not tabulated");
  return table_;
}

// ---------------------------------------------------------------------------
// Designed rules

ChoiceFunction responsive(int capacity, const PriorityOrder& priority) {
  if (capacity < 0) throw InstanceError("responsive rule: negative capacity");
  PriorityOrder pr = priority;
  return ChoiceFunction(
      "responsive", priority.ground(), [pr, capacity](ContractSet x) {
        ContractSet chosen;
        for (int id : pr.order()) {
          if (chosen.size() >= capacity) break;
          if (x.contains(id)) chosen.insert(id);
        }
        return chosen;
      });
}

ChoiceFunction greedy_rule(const RankOracle& oracle, const PriorityOrder& priority) {
  RankOracle o = oracle;
  PriorityOrder pr = priority;
  return ChoiceFunction("greedy", oracle.ground(),
                        [o, pr](ContractSet x) { return greedy_base(o, x, pr.order()); });
}

ChoiceFunction nonwasteful_matroid(const RankOracle& oracle, int capacity,
                                   const PriorityOrder& priority) {
  if (capacity < 0) throw InstanceError("matroid rule: negative capacity");
  if (oracle.rank(oracle.ground()) > capacity)
    throw InstanceError("matroid rule: the matroid admits an independent set larger than the capacity " +
                        std::to_string(capacity));
  RankOracle o = oracle;
  PriorityOrder pr = priority;
  return ChoiceFunction(
      "matroid", oracle.ground(), [o, pr, capacity](ContractSet x) {
        ContractSet chosen = greedy_base(o, x, pr.order());
        for (int id : pr.order()) {
          if (chosen.size() >= std::min(x.size(), capacity)) break;
          if (x.contains(id)) chosen.insert(id);
        }
        return chosen;
      });
}

ChoiceFunction guaranteed_enrollment(int capacity, const PriorityOrder& priority,
                                     ContractSet returning, const RankOracle& oracle,
                                     int seat_budget) {
  if (capacity < 0) throw InstanceError("guaranteed-enrollment rule: negative capacity");
  if (!returning.subset_of(priority.ground()))
    throw InstanceError("guaranteed-enrollment rule: returning set leaves the ground");
  if (returning.size() > capacity)
    throw InstanceError("guaranteed-enrollment rule: " + std::to_string(returning.size()) +
                        " returning contracts exceed the capacity " + std::to_string(capacity));
  if (seat_budget < 0) throw InstanceError("guaranteed-enrollment rule: negative seat budget");
  RankOracle o = oracle.with_memo();
  PriorityOrder pr = priority;
  return ChoiceFunction(
      "guaranteed-enrollment", priority.ground(),
      [o, pr, returning, capacity, seat_budget](ContractSet x) {
        // Phase 1: returning contracts are in, unconditionally.
        ContractSet chosen = x & returning;
        if (chosen.size() == capacity) return chosen;

        // Phase 2: seat by seat, the highest-priority contract whose addition
        // raises reserve utilization. Exits: seat budget spent, no such
        // contract, or capacity reached.
        for (int s = 1; s <= seat_budget; ++s) {
          int pick = -1;
          const int base_rank = o.rank(chosen);
          for (int id : pr.order()) {
            if (!x.contains(id) || chosen.contains(id)) continue;
            if (o.rank(chosen.with(id)) == base_rank + 1) {
              pick = id;
              break;
            }
          }
          if (pick == -1) break;
          chosen.insert(pick);
          if (chosen.size() == capacity) return chosen;
        }

        // Phase 3: fill by priority.
        for (int id : pr.order()) {
          if (chosen.size() >= capacity) break;
          if (x.contains(id)) chosen.insert(id);
        }
        return chosen;
      });
}

ChoiceFunction combine(const ChoiceFunction& c1, const ChoiceFunction& c2,
                       std::function<bool(ContractSet)> selector) {
  if (c1.ground() != c2.ground())
    throw DomainError("combine: rules live on different grounds");
  ChoiceFunction a = c1, b = c2;
  return ChoiceFunction("combine(" + c1.name() + "," + c2.name() + ")", c1.ground(),
                        [a, b, selector](ContractSet x) { return selector(x) ? a(x) : b(x); });
}

// ---------------------------------------------------------------------------
// Checkers

namespace {

// Tabulates into compact-index space and hands the table to `body`.
template <typename Body>
Report with_table(const ChoiceFunction& c, int guard, Body body) {
  const int n = c.ground().size();
  if (n > guard)
    throw GuardError("exhaustive check on \"" + c.name() + "\": ground has " + std::to_string(n) +
                     " contracts, guard is " + std::to_string(guard));
  const std::vector<int> pos = c.ground().ids();
  const std::uint64_t total = std::uint64_t{1} << n;
  // chosen[j] as a compact mask, so identities are plain integer lookups.
  std::vector<std::uint64_t> chosen(total);
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet y = c.choose(nth_subset(j, pos));
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
      if (y.contains(pos[k])) m |= std::uint64_t{1} << k;
    chosen[j] = m;
  }
  return body(chosen, pos, total);
}

std::string pair_witness(const char* what, std::uint64_t a, std::uint64_t b,
                         const std::vector<int>& pos) {
  return std::string(what) + ": X=" + to_string(nth_subset(a, pos)) +
         " X'=" + to_string(nth_subset(b, pos));
}

}  // namespace

Report check_path_independence(const ChoiceFunction& c, int guard) {
  return with_table(c, guard, [](const std::vector<std::uint64_t>& ch, const std::vector<int>& pos,
                                 std::uint64_t total) {
    for (std::uint64_t j = 0; j < total; ++j)
      for (std::uint64_t k = 0; k < total; ++k)
        if (ch[j | k] != ch[ch[j] | k])
          return Report::fail(pair_witness("path independence violated", j, k, pos) +
                              ": C(X∪X')=" + to_string(nth_subset(ch[j | k], pos)) +
                              " but C(C(X)∪X')=" + to_string(nth_subset(ch[ch[j] | k], pos)));
    return Report::ok();
  });
}

Report check_size_monotonicity(const ChoiceFunction& c, int guard) {
  return with_table(c, guard, [](const std::vector<std::uint64_t>& ch, const std::vector<int>& pos,
                                 std::uint64_t total) {
    for (std::uint64_t k = 0; k < total; ++k) {
      // j runs over proper submasks of k, descending; order within k is
      // irrelevant for minimality because k is scanned ascending.
      for (std::uint64_t j = k;; j = (j - 1) & k) {
        if (std::popcount(ch[j]) > std::popcount(ch[k]))
          return Report::fail(pair_witness("size monotonicity violated", j, k, pos) + ": |C(X)|=" +
                              std::to_string(std::popcount(ch[j])) + " > |C(X')|=" +
                              std::to_string(std::popcount(ch[k])));
        if (j == 0) break;
      }
    }
    return Report::ok();
  });
}

Report check_substitutability(const ChoiceFunction& c, int guard) {
  return with_table(c, guard, [](const std::vector<std::uint64_t>& ch, const std::vector<int>& pos,
                                 std::uint64_t total) {
    const int n = static_cast<int>(pos.size());
    for (std::uint64_t j = 0; j < total; ++j)
      for (int b = 0; b < n; ++b) {
        const std::uint64_t x_elt = std::uint64_t{1} << b;
        if (!(j & x_elt)) continue;
        const std::uint64_t smaller = j & ~x_elt;
        if ((ch[j] & ~x_elt & ~ch[smaller]) != 0)
          return Report::fail("substitutability violated: C(" + to_string(nth_subset(j, pos)) +
                              ")\\{" + std::to_string(pos[b]) + "} is not contained in C(" +
                              to_string(nth_subset(smaller, pos)) + ")");
      }
    return Report::ok();
  });
}

Report check_irc(const ChoiceFunction& c, int guard) {
  return with_table(c, guard, [](const std::vector<std::uint64_t>& ch, const std::vector<int>& pos,
                                 std::uint64_t total) {
    const int n = static_cast<int>(pos.size());
    for (std::uint64_t j = 0; j < total; ++j)
      for (int b = 0; b < n; ++b) {
        const std::uint64_t x_elt = std::uint64_t{1} << b;
        if (!(j & x_elt) || (ch[j] & x_elt)) continue;  // only rejected contracts
        if (ch[j & ~x_elt] != ch[j])
          return Report::fail("irrelevance of rejected contracts violated: removing rejected " +
                              std::to_string(pos[b]) + " from " + to_string(nth_subset(j, pos)) +
                              " changes the choice");
      }
    return Report::ok();
  });
}

// ---------------------------------------------------------------------------
// Rules from an instance

RuleKind rule_kind_from_name(const std::string& name) {
  if (name == "responsive") return RuleKind::responsive;
  if (name == "matroid") return RuleKind::matroid;
  if (name == "guaranteed-enrollment") return RuleKind::guaranteed_enrollment;
  if (name == "greedy") return RuleKind::greedy;
  throw InstanceError("unknown rule \"" + name +
                      "\" (expected responsive|matroid|guaranteed-enrollment|greedy)");
}

std::string rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::responsive: return "responsive";
    case RuleKind::matroid: return "matroid";
    case RuleKind::guaranteed_enrollment: return "guaranteed-enrollment";
    case RuleKind::greedy: return "greedy";
  }
  return "?";
}

RankOracle transversal_oracle(const Problem& p, int institution) {
  const InstitutionSpec& spec = p.institution(institution);
  return make_oracle(MatroidSpec::transversal(p.institution_contracts(institution),
                                              spec.reserves, spec.traits));
}

RankOracle institution_oracle(const Problem& p, int institution) {
  const InstitutionSpec& spec = p.institution(institution);
  if (spec.matroid) return make_oracle(*spec.matroid);
  if (!spec.types.empty()) return transversal_oracle(p, institution);
  throw InstanceError("institutions." + p.institution_name(institution) +
                      ": no matroid or reserve data to build a matroid rule from");
}

ChoiceFunction make_rule(const Problem& p, int institution, RuleKind kind) {
  const InstitutionSpec& spec = p.institution(institution);
  const PriorityOrder priority = p.priority_order(institution);
  switch (kind) {
    case RuleKind::responsive:
      return responsive(spec.capacity, priority);
    case RuleKind::greedy:
      return greedy_rule(institution_oracle(p, institution).with_memo(), priority);
    case RuleKind::matroid:
      return nonwasteful_matroid(truncate(institution_oracle(p, institution), spec.capacity).with_memo(),
                                 spec.capacity, priority);
    case RuleKind::guaranteed_enrollment: {
      int seats = 0;
      for (int r : spec.reserves) seats += r;
      return guaranteed_enrollment(spec.capacity, priority, spec.returning,
                                   transversal_oracle(p, institution), seats);
    }
  }
  throw DomainError("unreachable rule kind");
}

std::vector<ChoiceFunction> make_rule_profile(const Problem& p, RuleKind kind) {
  return make_rule_profile(p, std::vector<RuleKind>(p.institution_count(), kind));
}

std::vector<ChoiceFunction> make_rule_profile(const Problem& p,
                                              const std::vector<RuleKind>& per_institution) {
  if (static_cast<int>(per_institution.size()) != p.institution_count())
    throw InstanceError("rule profile: expected one rule per institution");
  std::vector<ChoiceFunction> out;
  out.reserve(per_institution.size());
  for (int i = 0; i < p.institution_count(); ++i)
    out.push_back(make_rule(p, i, per_institution[i]));
  return out;
}

}  // namespace matchforge
