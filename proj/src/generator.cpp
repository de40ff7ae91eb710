#include "matchforge/generator.hpp"

namespace matchforge {

std::uint64_t Rng::next() {
  // splitmix64: platform-independent and cheap enough for inner loops.
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

int Rng::uniform(int n) {
  if (n <= 0) throw DomainError("Rng::uniform: n must be positive");
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return static_cast<int>(draw % span);
}

namespace {

std::vector<std::string> make_names(const char* prefix, int count) {
  std::vector<std::string> out;
  for (int k = 0; k < count; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

Preference random_preference(Rng& rng, ContractSet own) {
  std::vector<int> order;
  order.push_back(Preference::kNull);
  for (int id : own) order.push_back(id);
  rng.shuffle(order);
  return Preference(std::move(order));
}

std::vector<int> random_priority(Rng& rng, ContractSet ground) {
  std::vector<int> order = ground.ids();
  rng.shuffle(order);
  return order;
}

}  // namespace

Problem generate_instance(const GenConfig& config) {
  if (config.agents < 0 || config.institutions < 0 || config.types < 0 || config.max_reserve < 0)
    throw InstanceError("generator: sizes must be nonnegative");
  if (config.agents * config.institutions > kMaxContracts)
    throw InstanceError("generator: " + std::to_string(config.agents * config.institutions) +
                        " contracts exceed the 64-contract cap");
  Rng rng(config.seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);

  std::vector<Contract> contracts;
  for (int a = 0; a < config.agents; ++a)
    for (int i = 0; i < config.institutions; ++i) contracts.push_back({a, i, ""});

  std::vector<Preference> preferences;
  std::vector<ContractSet> own(config.agents);
  for (std::size_t id = 0; id < contracts.size(); ++id)
    own[contracts[id].agent].insert(static_cast<int>(id));
  for (int a = 0; a < config.agents; ++a) preferences.push_back(random_preference(rng, own[a]));

  std::vector<ContractSet> ground(config.institutions);
  for (std::size_t id = 0; id < contracts.size(); ++id)
    ground[contracts[id].institution].insert(static_cast<int>(id));

  std::vector<InstitutionSpec> specs(config.institutions);
  for (int i = 0; i < config.institutions; ++i) {
    InstitutionSpec& spec = specs[i];
    spec.capacity = config.agents > 0 ? 1 + rng.uniform(config.agents) : 0;
    spec.priority = random_priority(rng, ground[i]);
    for (int t = 0; t < config.types; ++t) {
      spec.types.push_back("t" + std::to_string(t));
      spec.reserves.push_back(rng.uniform(config.max_reserve + 1));
    }
    if (config.types > 0)
      for (int id : ground[i]) {
        std::vector<int> ts;
        for (int t = 0; t < config.types; ++t)
          if (rng.uniform(2) == 1) ts.push_back(t);
        if (!ts.empty()) spec.traits[id] = ts;
      }
    if (config.returning) {
      // Up to capacity returning contracts, sampled without replacement.
      std::vector<int> pool = ground[i].ids();
      rng.shuffle(pool);
      const int budget = std::min<int>(spec.capacity, rng.uniform(static_cast<int>(pool.size()) + 1));
      for (int k = 0; k < budget; ++k) spec.returning.insert(pool[k]);
    }
  }

  return Problem::make(make_names("a", config.agents), make_names("i", config.institutions),
                       std::move(contracts), std::move(preferences), std::move(specs));
}

Problem generate_chile_fixture(int contracts, std::uint64_t seed) {
  GenConfig config;
  config.agents = contracts;
  config.institutions = 1;
  config.types = 1 + static_cast<int>(seed % 3);  // 1..3 reserve types
  config.max_reserve = 2;
  config.returning = true;
  config.seed = seed;
  return generate_instance(config);
}

Problem generate_matroid_fixture(int contracts, std::uint64_t seed) {
  GenConfig config;
  config.agents = contracts;
  config.institutions = 1;
  config.types = 1 + static_cast<int>(seed % 3);
  config.max_reserve = 2;
  config.returning = false;
  config.seed = seed;
  return generate_instance(config);
}

Problem generate_shape(int agents, int institutions, RuleKind kind, std::uint64_t seed) {
  GenConfig config;
  config.agents = agents;
  config.institutions = institutions;
  config.seed = seed;
  switch (kind) {
    case RuleKind::responsive:
      config.types = 0;
      config.returning = false;
      break;
    case RuleKind::greedy:
    case RuleKind::matroid:
      config.types = 2;
      config.returning = false;
      break;
    case RuleKind::guaranteed_enrollment:
      config.types = 2;
      config.returning = true;
      break;
  }
  return generate_instance(config);
}

Problem generate_labeled_shape(int labels, std::uint64_t seed) {
  if (labels < 1) throw InstanceError("labeled shape: need at least one contract per pair");
  const int agents = 2, institutions = 2;
  if (agents * institutions * labels > kMaxContracts)
    throw InstanceError("labeled shape exceeds the contract cap");
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);

  std::vector<Contract> contracts;
  for (int a = 0; a < agents; ++a)
    for (int i = 0; i < institutions; ++i)
      for (int l = 0; l < labels; ++l) contracts.push_back({a, i, "l" + std::to_string(l)});

  std::vector<ContractSet> own(agents);
  std::vector<ContractSet> ground(institutions);
  for (std::size_t id = 0; id < contracts.size(); ++id) {
    own[contracts[id].agent].insert(static_cast<int>(id));
    ground[contracts[id].institution].insert(static_cast<int>(id));
  }

  std::vector<Preference> preferences;
  for (int a = 0; a < agents; ++a) preferences.push_back(random_preference(rng, own[a]));

  std::vector<InstitutionSpec> specs(institutions);
  for (int i = 0; i < institutions; ++i) {
    specs[i].capacity = 1;
    specs[i].priority = random_priority(rng, ground[i]);
  }
  return Problem::make(make_names("a", agents), make_names("i", institutions),
                       std::move(contracts), std::move(preferences), std::move(specs));
}

}  // namespace matchforge
