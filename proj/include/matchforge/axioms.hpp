#ifndef MATCHFORGE_AXIOMS_HPP
#define MATCHFORGE_AXIOMS_HPP

#include <functional>
#include <string>
#include <vector>

#include "matchforge/choice.hpp"
#include "matchforge/model.hpp"
#include "matchforge/report.hpp"

namespace matchforge {

/// A punctual choice axiom as a correspondence: member(X, Y) says whether Y
/// is an allowed choice at problem X. Callers guarantee Y ⊆ X ⊆ ground.
/// A choice rule satisfies the axiom iff member(X, C(X)) for every X.
struct PunctualAxiom {
  std::string name;
  ContractSet ground;
  std::function<bool(ContractSet problem, ContractSet candidate)> member;
};

/// A requirement on matchings at a given problem. Checks are deterministic
/// and produce a concrete witness on failure.
struct MatchingAxiom {
  std::string name;
  std::function<Report(const Matching&, const Problem&)> check;
};

// --- The punctual axiom library ---------------------------------------------

/// |Y| = min(|X|, q): never waste a seat, never exceed the capacity.
PunctualAxiom phi_non_wastefulness(ContractSet ground, int capacity);

/// Chosen contracts beat every rejected contract in priority.
PunctualAxiom phi_no_justified_envy(const PriorityOrder& priority);

/// Present returning contracts are always chosen: X ∩ returning ⊆ Y.
PunctualAxiom phi_guaranteed_enrollment(ContractSet ground, ContractSet returning);

/// Below capacity no rejected contract may raise reserve utilization; at
/// capacity no swap against a non-returning chosen contract may raise it.
PunctualAxiom phi_max_reserve_utilization(const RankOracle& oracle, int capacity,
                                          ContractSet returning);

/// A non-returning chosen contract beaten in priority by a rejected one must
/// be rank-justified: the swap strictly lowers reserve utilization.
PunctualAxiom phi_no_justified_envy_reserves(const RankOracle& oracle,
                                             const PriorityOrder& priority,
                                             ContractSet returning);

/// Y is independent in the feasibility matroid.
PunctualAxiom phi_feasibility(const RankOracle& oracle);

/// r(Y) = r(X): the choice spans everything the constraints allow.
PunctualAxiom phi_rank_maximality(const RankOracle& oracle);

/// Like the reserves version, without returning exemptions.
PunctualAxiom phi_no_justified_envy_rank(const RankOracle& oracle,
                                         const PriorityOrder& priority);

/// r(Y) >= r(X') for every X' ⊆ X; by monotonicity this is r(Y) = r(X),
/// which is how it is evaluated.
PunctualAxiom phi_matroidal_objectives(const RankOracle& oracle);

/// All axioms constructible from the institution's spec data.
std::vector<PunctualAxiom> builtin_axioms(const Problem& p, int institution);

/// The axiom set that pins down the given rule kind.
std::vector<PunctualAxiom> characterizing_axioms(const Problem& p, int institution, RuleKind kind);

/// Single axiom by its library name ("non-wastefulness", "no justified envy",
/// "guaranteed enrollment for returning students", "maximal utilization of
/// reservations", "no justified envy under reserves", "feasibility",
/// "rank maximality", "no justified envy under rank", "matroidal objectives").
PunctualAxiom builtin_axiom(const Problem& p, int institution, const std::string& name);

// --- Satisfaction and extension ----------------------------------------------

/// member(X, C(X)) for every X ⊆ ground; witness on the first failure.
Report satisfies_punctual(const ChoiceFunction& c, const PunctualAxiom& axiom,
                          int guard = kTabulationGuard);

/// The systematic extension: matching X satisfies the extended axiom at R iff
/// X_i is an allowed choice at the demand D_i(X).
MatchingAxiom extend(const PunctualAxiom& axiom, int institution);

// --- Direct matching axioms ----------------------------------------------------

MatchingAxiom individual_rationality();

/// Direct (non-extension) checker for one institution, by the same names as
/// builtin_axiom.
MatchingAxiom direct_matching_axiom(const Problem& p, int institution, const std::string& name);

/// Every direct checker constructible for the instance, each quantified over
/// all institutions, plus individual rationality.
std::vector<MatchingAxiom> matching_axiom_library(const Problem& p);

/// For every preference profile given and every matching of the instance,
/// extend(axiom) and the direct checker must agree. Witness otherwise.
Report verify_extension_equivalence(const std::vector<Problem>& profiles, int institution,
                                    const PunctualAxiom& axiom, const MatchingAxiom& direct,
                                    std::uint64_t matching_guard = 1000000);

}  // namespace matchforge

#endif
