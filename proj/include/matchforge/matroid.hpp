#ifndef MATCHFORGE_MATROID_HPP
#define MATCHFORGE_MATROID_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "matchforge/contract_set.hpp"
#include "matchforge/report.hpp"

namespace matchforge {

/// Declarative description of a matroid over a contract ground set.
///
/// Variants:
///   uniform      — independent iff |X| <= q
///   partition    — independent iff every class stays within its quota
///   transversal  — independent iff the elements can be assigned to distinct
///                  reserved seats (seat s of type t accepts elements whose
///                  trait set contains t; type t contributes seat_reserves[t]
///                  distinct seats)
///   explicit_sets — the family is listed in full; validated on construction
struct MatroidSpec {
  enum class Kind { uniform, partition, transversal, explicit_sets };

  Kind kind = Kind::uniform;
  ContractSet ground;

  // uniform
  int uniform_q = 0;

  // partition: every ground element must be mapped to a class
  std::map<int, int> element_class;
  std::vector<int> class_quota;

  // transversal
  std::vector<int> seat_reserves;               // per type index
  std::map<int, std::vector<int>> element_traits;  // ground id -> type indices

  // explicit_sets
  std::vector<ContractSet> independent_sets;

  static MatroidSpec uniform(ContractSet ground, int q);
  static MatroidSpec partition(ContractSet ground, std::map<int, int> element_class,
                               std::vector<int> class_quota);
  static MatroidSpec transversal(ContractSet ground, std::vector<int> seat_reserves,
                                 std::map<int, std::vector<int>> element_traits);
  static MatroidSpec explicit_family(ContractSet ground, std::vector<ContractSet> sets);
};

/// Independence oracle with a derived rank function. Value type; copies share
/// the underlying (immutable) matroid. The optional memo caches rank values
/// per oracle and can be stripped with `without_memo()` — axiom checking
/// constructs memo-free oracles so caching can never mask a bug.
class RankOracle {
 public:
  RankOracle() = default;

  ContractSet ground() const;

  /// True iff X is independent. Throws DomainError when X is not a subset of
  /// the ground set.
  bool is_independent(ContractSet x) const;

  /// Size of a maximal independent subset of X. Computed greedily over the
  /// independence oracle (exact for matroids); the transversal variant
  /// instead runs an augmenting-path bipartite matching.
  int rank(ContractSet x) const;

  RankOracle with_memo() const;
  RankOracle without_memo() const;
  bool has_memo() const { return memo_ != nullptr; }

  // Introspection used by rule builders.
  std::optional<int> seat_total() const;  // sum of reserves, transversal only

  struct Impl;
  explicit RankOracle(std::shared_ptr<const Impl> impl);
  const std::shared_ptr<const Impl>& impl() const { return impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
  std::shared_ptr<std::unordered_map<std::uint64_t, int>> memo_;
};

/// Builds the runnable oracle for a spec. The explicit variant is validated
/// with check_matroid_axioms and refused (InstanceError) if it is not a
/// matroid, since everything downstream assumes matroid structure.
RankOracle make_oracle(const MatroidSpec& spec);

/// Contract the oracle by `fixed`: the result ranges over ground \ fixed and
/// rank'(Y) = rank(Y ∪ fixed) − rank(fixed).
RankOracle minor(const RankOracle& oracle, ContractSet fixed);

/// Cap independent sets at `cap` elements; rank'(X) = min(rank(X), cap).
RankOracle truncate(const RankOracle& oracle, int cap);

/// Scan X from the highest-priority element down, keeping an element iff the
/// kept set stays independent. Returns a base of X (|result| = rank(X)).
/// `priority`: contract ids, best first; must cover X.
ContractSet greedy_base(const RankOracle& oracle, ContractSet x,
                        const std::vector<int>& priority);

/// Exhaustively verifies, over every subset of the ground:
///   I1  the empty set is independent
///   I2  subsets of independent sets are independent
///   I3  a smaller independent set extends into any larger one
///   R1  0 <= r(X) <= |X|
///   R2  rank is monotone
///   R3  rank is submodular: r(X∪X') + r(X∩X') <= r(X) + r(X')
///   B1  base exchange: bases of the same set swap element for element
/// plus consistency of the oracle's rank with the rank derived from the
/// independence predicate. Returns the first (minimal) witness on failure.
/// Pair scans are quadratic in 2^|ground|; keep fixtures small.
Report check_matroid_axioms(const RankOracle& oracle, int guard = 16);
Report check_matroid_axioms(const MatroidSpec& spec, int guard = 16);

/// Greedy rank ignoring any variant-specific fast path; used to cross-check
/// the transversal matching rank against the generic route.
int rank_via_greedy(const RankOracle& oracle, ContractSet x);

}  // namespace matchforge

#endif
