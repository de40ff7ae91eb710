#ifndef MATCHFORGE_CHOICE_HPP
#define MATCHFORGE_CHOICE_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "matchforge/matroid.hpp"
#include "matchforge/model.hpp"
#include "matchforge/report.hpp"

namespace matchforge {

inline constexpr int kTabulationGuard = 16;
inline constexpr int kCheckGuard = 12;

/// One institution's choice rule: a map from subsets of its ground to chosen
/// subsets. Every evaluation verifies C(X) ⊆ X and throws ContractViolation
/// otherwise. Tabulation is explicit (2^|ground| entries) and guarded.
class ChoiceFunction {
 public:
  using Evaluator = std::function<ContractSet(ContractSet)>;

  ChoiceFunction() = default;
  ChoiceFunction(std::string name, ContractSet ground, Evaluator evaluate);

  /// Rule given by a full table indexed by canonical subset rank
  /// (nth_subset over the ground's ascending id positions).
  static ChoiceFunction from_table(std::string name, ContractSet ground,
                                   std::vector<ContractSet> table);

  ContractSet choose(ContractSet x) const;
  ContractSet operator()(ContractSet x) const { return choose(x); }

  const std::string& name() const { return name_; }
  ContractSet ground() const { return ground_; }

  void tabulate(int guard = kTabulationGuard);
  bool is_tabulated() const { return !table_.empty(); }
  const std::vector<ContractSet>& table() const;
  const std::vector<int>& ground_positions() const { return positions_; }

 private:
  std::string name_;
  ContractSet ground_;
  std::vector<int> positions_;
  Evaluator evaluate_;
  std::vector<ContractSet> table_;
};

// --- The designed rules ----------------------------------------------------

/// Pick the highest-priority contracts until the capacity is reached or no
/// contract is left.
ChoiceFunction responsive(int capacity, const PriorityOrder& priority);

/// Greedy over the feasibility matroid, nothing else. No capacity beyond the
/// matroid itself.
ChoiceFunction greedy_rule(const RankOracle& oracle, const PriorityOrder& priority);

/// Greedy over the objective matroid, then fill the remaining seats with the
/// highest-priority rejected contracts until min(|X|, capacity) are chosen.
/// Requires every independent set to fit the capacity (rank(ground) <= q).
ChoiceFunction nonwasteful_matroid(const RankOracle& oracle, int capacity,
                                   const PriorityOrder& priority);

/// Returning contracts first; then, seat by seat, the highest-priority
/// contract that raises reserve utilization; then fill by priority.
/// `seat_budget` is the total number of reserved seats (bounds the middle
/// phase; the rank argument makes the bound redundant but all three exits
/// are implemented explicitly).
ChoiceFunction guaranteed_enrollment(int capacity, const PriorityOrder& priority,
                                     ContractSet returning, const RankOracle& oracle,
                                     int seat_budget);

/// Pointwise combination: selector(X) true -> first rule, false -> second.
ChoiceFunction combine(const ChoiceFunction& c1, const ChoiceFunction& c2,
                       std::function<bool(ContractSet)> selector);

// --- Classical checkers (exhaustive, witness on failure) --------------------

/// C(X ∪ X') = C(C(X) ∪ X') over all ordered subset pairs.
Report check_path_independence(const ChoiceFunction& c, int guard = kCheckGuard);

/// |C(X)| <= |C(X')| over all nested pairs X ⊆ X'.
Report check_size_monotonicity(const ChoiceFunction& c, int guard = kCheckGuard);

/// C(X) \ {x} ⊆ C(X \ {x}) over all X and x ∈ X.
Report check_substitutability(const ChoiceFunction& c, int guard = kCheckGuard);

/// C(X \ {x}) = C(X) for every rejected x ∈ X \ C(X).
Report check_irc(const ChoiceFunction& c, int guard = kCheckGuard);

// --- Building rules from an instance ----------------------------------------

enum class RuleKind { responsive, matroid, guaranteed_enrollment, greedy };

RuleKind rule_kind_from_name(const std::string& name);  // InstanceError if unknown
std::string rule_kind_name(RuleKind kind);

/// The institution's matroid: the explicit spec if present, otherwise the
/// transversal matroid of its reserve data. InstanceError when neither exists.
RankOracle institution_oracle(const Problem& p, int institution);

/// Transversal matroid of the institution's reserve graph (types, traits,
/// reserves). An institution without reserve types yields the zero-seat
/// matroid, whose rank is identically zero.
RankOracle transversal_oracle(const Problem& p, int institution);

/// Instantiate a rule for one institution. The matroid kind truncates the
/// institution's matroid at the capacity so that independent sets fit it.
ChoiceFunction make_rule(const Problem& p, int institution, RuleKind kind);

std::vector<ChoiceFunction> make_rule_profile(const Problem& p, RuleKind kind);
std::vector<ChoiceFunction> make_rule_profile(const Problem& p,
                                              const std::vector<RuleKind>& per_institution);

}  // namespace matchforge

#endif
