#ifndef MATCHFORGE_ENGINE_HPP
#define MATCHFORGE_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matchforge/axioms.hpp"
#include "matchforge/choice.hpp"
#include "matchforge/model.hpp"

namespace matchforge {

inline constexpr std::uint64_t kEnumerationGuard = 1000000;

/// One step of the deferred-acceptance run.
struct DAStep {
  int step = 0;                  // 1-based
  std::vector<int> proposals;    // contract ids proposed this step, ascending
  struct PerInstitution {
    ContractSet considered;      // tentative holds ∪ new proposals
    ContractSet accepted;
    ContractSet rejected;
  };
  std::vector<PerInstitution> institutions;  // by institution index
};

struct DATrace {
  std::vector<DAStep> steps;
  Matching outcome;
};

/// Agent-proposing deferred acceptance based on the given choice profile.
/// Simultaneous rounds: every agent rejected in the previous step proposes
/// their next acceptable, not-yet-proposed contract; each institution applies
/// its rule to tentative holds plus new proposals; stops on a rejection-free
/// step. Throws ContractViolation (with the step index) if a rule returns a
/// set that is not a subset of what it was shown.
DATrace run_da(const Problem& p, const std::vector<ChoiceFunction>& rules);

/// Stability with respect to the choice profile: individual rationality,
/// institution rationality (C_i(X_i) = X_i), and no blocking contract
/// (x ∉ X with x ∈ C_i(X_i ∪ {x}) strictly preferred by its agent).
/// The witness names the failing clause and contract.
Report is_stable(const Matching& x, const Problem& p, const std::vector<ChoiceFunction>& rules);

/// All matchings of the instance (each agent: one own contract or null).
/// Guard: the product of (|X_a| + 1) must not exceed `guard`.
std::vector<Matching> enumerate_matchings(const Problem& p,
                                          std::uint64_t guard = kEnumerationGuard);

/// Brute-force stable set, in canonical enumeration order.
std::vector<Matching> enumerate_stable(const Problem& p, const std::vector<ChoiceFunction>& rules,
                                       std::uint64_t guard = kEnumerationGuard);

/// The full preference-profile space over an instance shape: every strict
/// order over X_a ∪ {null} for every agent. Profiles are addressed by index;
/// deviations move one agent to another of their orders.
class ProfileSpace {
 public:
  ProfileSpace(const Problem& shape, std::uint64_t guard = kEnumerationGuard);

  std::uint64_t size() const { return size_; }
  Problem problem_at(std::uint64_t index) const;

  /// Index of the profile carrying exactly this problem's preferences.
  std::uint64_t index_of(const Problem& p) const;

  int order_count(int agent) const { return static_cast<int>(orders_[agent].size()); }
  int order_index(std::uint64_t profile, int agent) const;
  std::uint64_t with_order(std::uint64_t profile, int agent, int order) const;
  const Preference& order(int agent, int index) const { return orders_[agent][index]; }

 private:
  Problem shape_;
  std::vector<std::vector<Preference>> orders_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t size_ = 1;
};

/// A matching rule under test: evaluates a whole problem to a matching.
struct RuleUnderTest {
  std::string name;
  std::function<Matching(const Problem&)> evaluate;
};

/// DA based on the rules built for this shape (rules depend on specs only,
/// so they are built once and reused across the profile space).
RuleUnderTest da_rule(const Problem& shape, RuleKind kind);

/// Exhaustive strategy-proofness check over the full profile space and every
/// unilateral deviation. Witness = (profile, agent, misreport) where the
/// misreport strictly improves the agent's assignment under their true order.
Report check_strategy_proofness(const RuleUnderTest& rule, const Problem& shape,
                                std::uint64_t profile_guard = kEnumerationGuard);

// --- Characterization machinery ----------------------------------------------

enum class CharacterizationOutcome {
  characterized,    // every problem: axiom intersection = { target(X) }
  not_unique,       // some problem admits a second selection
  incompatible,     // some problem admits no selection at all
  target_mismatch,  // unique selection exists but differs from the target
};

struct CharacterizationReport {
  CharacterizationOutcome outcome = CharacterizationOutcome::characterized;
  std::string witness;
  bool characterized() const { return outcome == CharacterizationOutcome::characterized; }
};

std::string to_string(CharacterizationOutcome outcome);

/// For every subset X of the target's ground, enumerate the candidate choices
/// allowed by all axioms simultaneously and compare with { target(X) }.
CharacterizationReport verify_characterization(const std::vector<PunctualAxiom>& axioms,
                                               const ChoiceFunction& target,
                                               int guard = kTabulationGuard);

// --- Implication-level verifiers -------------------------------------------------

struct LemmaChainReport {
  Report axioms_imply_stable;   // IR + extended axioms => stable, all profiles × matchings
  Report da_satisfies_axioms;   // DA outcome satisfies IR + extended axioms, all profiles
  bool pass() const { return axioms_imply_stable.pass && da_satisfies_axioms.pass; }
};

LemmaChainReport verify_lemma_chain(const Problem& shape, const std::vector<ChoiceFunction>& rules,
                                    const std::vector<std::vector<PunctualAxiom>>& axioms,
                                    std::uint64_t profile_guard = kEnumerationGuard,
                                    std::uint64_t matching_guard = kEnumerationGuard);

/// Fixed two-contract regression: a multi-valued punctual axiom set that a
/// rule satisfies without being pinned down by it, and a non-DA matching rule
/// that nevertheless passes individual rationality, strategy-proofness, and
/// the extended axiom. Pins the boundary of what the characterization
/// machinery may claim: multi-valued axiom sets admit rules beyond DA.
struct RegressionReport {
  std::vector<std::pair<std::string, Report>> assertions;
  bool pass() const {
    for (const auto& [_, r] : assertions)
      if (!r.pass) return false;
    return true;
  }
};

RegressionReport counterexample_regression();

}  // namespace matchforge

#endif
