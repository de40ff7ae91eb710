#ifndef MATCHFORGE_GENERATOR_HPP
#define MATCHFORGE_GENERATOR_HPP

#include <cstdint>
#include <vector>

#include "matchforge/choice.hpp"
#include "matchforge/model.hpp"

namespace matchforge {

/// Deterministic PRNG for instance generation. Wraps the fully specified
/// mt19937_64 engine and draws bounded values by rejection, so identical
/// (config, seed) pairs produce identical instances on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  int uniform(int n);  // [0, n)

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (int k = static_cast<int>(items.size()) - 1; k > 0; --k)
      std::swap(items[k], items[uniform(k + 1)]);
  }

 private:
  std::uint64_t state_;
};

struct GenConfig {
  int agents = 3;
  int institutions = 2;
  int types = 2;          // reserve types per institution; 0 = plain responsive market
  int max_reserve = 2;    // per-type reserve counts drawn from [0, max_reserve]
  bool returning = true;  // sample returning contracts (within capacity)
  std::uint64_t seed = 0;
};

/// Full market instance: one contract per (agent, institution) pair, random
/// strict preferences and priorities, random traits/reserves/returning.
Problem generate_instance(const GenConfig& config);

/// Single-institution choice fixture (the whole instance is one institution's
/// choice problem): n contracts, random priority, reserve graph, returning
/// set within capacity. Exercises the guaranteed-enrollment rule space.
Problem generate_chile_fixture(int contracts, std::uint64_t seed);

/// Same, but without returning contracts and with the institution's matroid
/// declared explicitly as a transversal spec; used for matroid/greedy rules.
Problem generate_matroid_fixture(int contracts, std::uint64_t seed);

/// Instance shape for profile sweeps: `agents` x `institutions`, one contract
/// per pair, seeded priorities and (for reserve-flavored kinds) seeded reserve
/// data. Preferences are placeholders; sweeps enumerate them.
Problem generate_shape(int agents, int institutions, RuleKind kind, std::uint64_t seed);

/// 2 agents x 2 institutions with `labels` contracts per pair (labelled
/// contracts enrich the stable-set structure). Plain responsive data.
Problem generate_labeled_shape(int labels, std::uint64_t seed);

}  // namespace matchforge

#endif
