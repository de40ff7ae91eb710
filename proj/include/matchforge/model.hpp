#ifndef MATCHFORGE_MODEL_HPP
#define MATCHFORGE_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchforge/contract_set.hpp"
#include "matchforge/matroid.hpp"

namespace matchforge {

/// A bilateral contract between one agent and one institution. The optional
/// label distinguishes multiple contracts of the same pair. Contract ids are
/// the dense indices 0..n-1 into Problem::contracts.
struct Contract {
  int agent = -1;
  int institution = -1;
  std::string label;
};

/// Strict ranking of one agent over their own contracts plus the null
/// contract (kNull). A contract is acceptable iff it is ranked above null.
class Preference {
 public:
  static constexpr int kNull = -1;

  Preference() = default;
  explicit Preference(std::vector<int> best_first);

  int rank_of(int contract_or_null) const;  // DomainError if absent
  bool weakly_prefers(int x, int y) const { return rank_of(x) <= rank_of(y); }
  bool strictly_prefers(int x, int y) const { return rank_of(x) < rank_of(y); }
  bool acceptable(int contract) const { return rank_of(contract) < null_rank_; }

  const std::vector<int>& order() const { return order_; }
  bool operator==(const Preference& o) const { return order_ == o.order_; }

 private:
  std::vector<int> order_;        // best first; contains kNull exactly once
  std::vector<int> rank_by_id_;   // -1 = absent
  int null_rank_ = 0;
};

/// Strict priority order of an institution over its own contracts.
class PriorityOrder {
 public:
  PriorityOrder() = default;
  explicit PriorityOrder(std::vector<int> best_first);

  bool prefers(int x, int y) const { return rank_of(x) < rank_of(y); }
  int rank_of(int contract) const;  // DomainError if absent
  const std::vector<int>& order() const { return order_; }
  ContractSet ground() const;

 private:
  std::vector<int> order_;
  std::vector<int> rank_by_id_;
};

/// Per-institution data: capacity, priority, and whatever its choice rule
/// needs (returning contracts, reserve types/traits, or an explicit matroid).
struct InstitutionSpec {
  int capacity = 0;
  std::vector<int> priority;                    // own contract ids, best first
  ContractSet returning;                        // contracts with enrollment guarantees
  std::vector<std::string> types;               // reserve type universe
  std::map<int, std::vector<int>> traits;       // contract id -> type indices
  std::vector<int> reserves;                    // per type index
  std::optional<MatroidSpec> matroid;

  // Institutions carrying reserve or returning data follow the
  // one-contract-per-pair discipline, enforced at validation.
  bool reserve_flavored() const { return !types.empty() || !returning.empty(); }
};

/// An immutable matching-market instance: contracts, one preference per
/// agent, one spec per institution. Validated on construction; all queries
/// afterwards are pure.
class Problem {
 public:
  Problem() = default;
  static Problem make(std::vector<std::string> agent_names,
                      std::vector<std::string> institution_names,
                      std::vector<Contract> contracts, std::vector<Preference> preferences,
                      std::vector<InstitutionSpec> specs);

  /// Same instance with preferences swapped out (used by profile sweeps).
  static Problem with_preferences(const Problem& base, std::vector<Preference> preferences);

  int agent_count() const { return static_cast<int>(agent_names_.size()); }
  int institution_count() const { return static_cast<int>(institution_names_.size()); }
  int contract_count() const { return static_cast<int>(contracts_.size()); }

  ContractSet universe() const { return universe_; }
  ContractSet agent_contracts(int agent) const;
  ContractSet institution_contracts(int institution) const;

  const Contract& contract(int id) const;
  const Preference& preference(int agent) const;
  const InstitutionSpec& institution(int i) const;
  const std::vector<Preference>& preferences() const { return preferences_; }

  const std::string& agent_name(int a) const { return agent_names_.at(a); }
  const std::string& institution_name(int i) const { return institution_names_.at(i); }
  int agent_index(const std::string& name) const;        // InstanceError if unknown
  int institution_index(const std::string& name) const;  // InstanceError if unknown

  PriorityOrder priority_order(int institution) const;
  std::string contract_name(int id) const;  // "agent@institution[:label]"

 private:
  std::vector<std::string> agent_names_;
  std::vector<std::string> institution_names_;
  std::vector<Contract> contracts_;
  std::vector<Preference> preferences_;
  std::vector<InstitutionSpec> specs_;
  std::vector<ContractSet> by_agent_;
  std::vector<ContractSet> by_institution_;
  ContractSet universe_;

  void validate() const;
  void index();
};

/// A set of contracts with at most one contract per agent.
class Matching {
 public:
  Matching() = default;
  static Matching from_set(const Problem& p, ContractSet contracts);  // DomainError if some |X_a| > 1

  ContractSet contracts() const { return set_; }
  int assigned(int agent) const;  // contract id or Preference::kNull
  bool operator==(const Matching& o) const { return set_ == o.set_; }

 private:
  ContractSet set_;
  std::vector<int> by_agent_;
};

/// Contracts of X belonging to the given agent / institution.
ContractSet restrict_to_agent(const Problem& p, ContractSet x, int agent);
ContractSet restrict_to_institution(const Problem& p, ContractSet x, int institution);
ContractSet restrict_to_agent(const Problem& p, ContractSet x, const std::string& agent);
ContractSet restrict_to_institution(const Problem& p, ContractSet x, const std::string& institution);

/// The demand for institution i at matching X: every contract of i that its
/// agent weakly prefers to their assignment. Always contains X_i.
ContractSet demand(const Problem& p, const Matching& x, int institution);

}  // namespace matchforge

#endif
