#include "matchforge/matroid.hpp"

#include <algorithm>
#include <cstdint>

namespace matchforge {

namespace {

std::string bad_subset_msg(ContractSet x, ContractSet ground) {
  return "set " + to_string(x) + " is not a subset of the ground " + to_string(ground);
}

}  // namespace

// ---------------------------------------------------------------------------
// MatroidSpec constructors

MatroidSpec MatroidSpec::uniform(ContractSet ground, int q) {
  if (q < 0) throw InstanceError("uniform matroid: q must be nonnegative");
  MatroidSpec s;
  s.kind = Kind::uniform;
  s.ground = ground;
  s.uniform_q = q;
  return s;
}

MatroidSpec MatroidSpec::partition(ContractSet ground, std::map<int, int> element_class,
                                   std::vector<int> class_quota) {
  MatroidSpec s;
  s.kind = Kind::partition;
  s.ground = ground;
  for (int id : ground) {
    auto it = element_class.find(id);
    if (it == element_class.end())
      throw InstanceError("partition matroid: element " + std::to_string(id) + " has no class");
    if (it->second < 0 || it->second >= static_cast<int>(class_quota.size()))
      throw InstanceError("partition matroid: element " + std::to_string(id) +
                          " maps to unknown class " + std::to_string(it->second));
  }
  for (int q : class_quota)
    if (q < 0) throw InstanceError("partition matroid: negative quota");
  s.element_class = std::move(element_class);
  s.class_quota = std::move(class_quota);
  return s;
}

MatroidSpec MatroidSpec::transversal(ContractSet ground, std::vector<int> seat_reserves,
                                     std::map<int, std::vector<int>> element_traits) {
  MatroidSpec s;
  s.kind = Kind::transversal;
  s.ground = ground;
  for (int r : seat_reserves)
    if (r < 0) throw InstanceError("transversal matroid: negative reserve count");
  for (const auto& [id, traits] : element_traits) {
    if (!ground.contains(id))
      throw InstanceError("transversal matroid: traits given for non-ground element " +
                          std::to_string(id));
    for (int t : traits)
      if (t < 0 || t >= static_cast<int>(seat_reserves.size()))
        throw InstanceError("transversal matroid: element " + std::to_string(id) +
                            " carries unknown type " + std::to_string(t));
  }
  s.seat_reserves = std::move(seat_reserves);
  s.element_traits = std::move(element_traits);
  return s;
}

MatroidSpec MatroidSpec::explicit_family(ContractSet ground, std::vector<ContractSet> sets) {
  MatroidSpec s;
  s.kind = Kind::explicit_sets;
  s.ground = ground;
  for (ContractSet f : sets)
    if (!f.subset_of(ground))
      throw InstanceError("explicit matroid: listed set " + to_string(f) +
                          " is not a subset of the ground");
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  s.independent_sets = std::move(sets);
  return s;
}

// ---------------------------------------------------------------------------
// Oracle implementations

struct RankOracle::Impl {
  ContractSet ground;
  virtual ~Impl() = default;
  virtual bool independent(ContractSet x) const = 0;
  // Variant-specific rank; nullopt means "derive greedily from independence".
  virtual std::optional<int> direct_rank(ContractSet) const { return std::nullopt; }
  virtual std::optional<int> seat_total() const { return std::nullopt; }
};

namespace {

struct UniformImpl final : RankOracle::Impl {
  int q = 0;
  bool independent(ContractSet x) const override { return x.size() <= q; }
  std::optional<int> direct_rank(ContractSet x) const override { return std::min(x.size(), q); }
};

struct PartitionImpl final : RankOracle::Impl {
  std::vector<int> cls;  // by contract id; -1 outside ground
  std::vector<int> quota;
  bool independent(ContractSet x) const override {
    std::vector<int> used(quota.size(), 0);
    for (int id : x)
      if (++used[cls[id]] > quota[cls[id]]) return false;
    return true;
  }
  std::optional<int> direct_rank(ContractSet x) const override {
    std::vector<int> used(quota.size(), 0);
    for (int id : x) ++used[cls[id]];
    int r = 0;
    for (std::size_t c = 0; c < quota.size(); ++c) r += std::min(used[c], quota[c]);
    return r;
  }
};

// Transversal matroid over the reserve graph: elements on one side, one node
// per reserved seat on the other. Independence of X = a matching covering X;
// rank of X = maximum matching size. Kuhn's augmenting paths are plenty at
// desk scale.
struct TransversalImpl final : RankOracle::Impl {
  std::vector<int> seat_type;                 // per seat node
  std::vector<std::vector<int>> seats_of;     // contract id -> adjacent seat nodes

  int max_matching(ContractSet x) const {
    const int num_seats = static_cast<int>(seat_type.size());
    std::vector<int> seat_owner(num_seats, -1);
    std::vector<char> visited(num_seats, 0);
    int matched = 0;
    for (int id : x) {
      std::fill(visited.begin(), visited.end(), 0);
      if (try_augment(id, x, seat_owner, visited)) ++matched;
    }
    return matched;
  }

  bool try_augment(int id, ContractSet x, std::vector<int>& seat_owner,
                   std::vector<char>& visited) const {
    for (int s : seats_of[id]) {
      if (visited[s]) continue;
      visited[s] = 1;
      if (seat_owner[s] == -1 ||
          (x.contains(seat_owner[s]) && try_augment(seat_owner[s], x, seat_owner, visited))) {
        seat_owner[s] = id;
        return true;
      }
    }
    return false;
  }

  bool independent(ContractSet x) const override { return max_matching(x) == x.size(); }
  std::optional<int> direct_rank(ContractSet x) const override { return max_matching(x); }
  std::optional<int> seat_total() const override { return static_cast<int>(seat_type.size()); }
};

struct ExplicitImpl final : RankOracle::Impl {
  std::vector<std::uint64_t> family;  // sorted masks
  bool independent(ContractSet x) const override {
    return std::binary_search(family.begin(), family.end(), x.mask());
  }
};

struct MinorImpl final : RankOracle::Impl {
  RankOracle parent;
  ContractSet fixed;
  int fixed_rank = 0;
  bool independent(ContractSet x) const override {
    return parent.rank(x | fixed) - fixed_rank == x.size();
  }
  std::optional<int> direct_rank(ContractSet x) const override {
    return parent.rank(x | fixed) - fixed_rank;
  }
};

struct TruncateImpl final : RankOracle::Impl {
  RankOracle parent;
  int cap = 0;
  bool independent(ContractSet x) const override {
    return x.size() <= cap && parent.is_independent(x);
  }
  std::optional<int> direct_rank(ContractSet x) const override {
    return std::min(parent.rank(x), cap);
  }
  std::optional<int> seat_total() const override { return parent.seat_total(); }
};

}  // namespace

// ---------------------------------------------------------------------------
// RankOracle

RankOracle::RankOracle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ContractSet RankOracle::ground() const { return impl_ ? impl_->ground : ContractSet{}; }

bool RankOracle::is_independent(ContractSet x) const {
  if (!x.subset_of(ground())) throw DomainError(bad_subset_msg(x, ground()));
  return impl_->independent(x);
}

int RankOracle::rank(ContractSet x) const {
  if (!x.subset_of(ground())) throw DomainError(bad_subset_msg(x, ground()));
  if (memo_) {
    auto it = memo_->find(x.mask());
    if (it != memo_->end()) return it->second;
  }
  int r;
  if (auto direct = impl_->direct_rank(x))
    r = *direct;
  else
    r = rank_via_greedy(*this, x);
  if (memo_) memo_->emplace(x.mask(), r);
  return r;
}

RankOracle RankOracle::with_memo() const {
  RankOracle copy = *this;
  copy.memo_ = std::make_shared<std::unordered_map<std::uint64_t, int>>();
  return copy;
}

RankOracle RankOracle::without_memo() const {
  RankOracle copy = *this;
  copy.memo_.reset();
  return copy;
}

std::optional<int> RankOracle::seat_total() const {
  return impl_ ? impl_->seat_total() : std::nullopt;
}

int rank_via_greedy(const RankOracle& oracle, ContractSet x) {
  if (!x.subset_of(oracle.ground())) throw DomainError(bad_subset_msg(x, oracle.ground()));
  ContractSet kept;
  for (int id : x)
    if (oracle.impl()->independent(kept.with(id))) kept.insert(id);
  return kept.size();
}

// ---------------------------------------------------------------------------
// Construction

RankOracle make_oracle(const MatroidSpec& spec) {
  switch (spec.kind) {
    case MatroidSpec::Kind::uniform: {
      auto impl = std::make_shared<UniformImpl>();
      impl->ground = spec.ground;
      impl->q = spec.uniform_q;
      return RankOracle(impl);
    }
    case MatroidSpec::Kind::partition: {
      auto impl = std::make_shared<PartitionImpl>();
      impl->ground = spec.ground;
      impl->cls.assign(kMaxContracts, -1);
      for (const auto& [id, c] : spec.element_class)
        if (spec.ground.contains(id)) impl->cls[id] = c;
      impl->quota = spec.class_quota;
      return RankOracle(impl);
    }
    case MatroidSpec::Kind::transversal: {
      auto impl = std::make_shared<TransversalImpl>();
      impl->ground = spec.ground;
      std::vector<std::vector<int>> seats_by_type(spec.seat_reserves.size());
      for (std::size_t t = 0; t < spec.seat_reserves.size(); ++t)
        for (int k = 0; k < spec.seat_reserves[t]; ++k) {
          seats_by_type[t].push_back(static_cast<int>(impl->seat_type.size()));
          impl->seat_type.push_back(static_cast<int>(t));
        }
      impl->seats_of.assign(kMaxContracts, {});
      for (int id : spec.ground) {
        auto it = spec.element_traits.find(id);
        if (it == spec.element_traits.end()) continue;
        for (int t : it->second)
          for (int s : seats_by_type[t]) impl->seats_of[id].push_back(s);
      }
      return RankOracle(impl);
    }
    case MatroidSpec::Kind::explicit_sets: {
      auto impl = std::make_shared<ExplicitImpl>();
      impl->ground = spec.ground;
      impl->family.reserve(spec.independent_sets.size());
      for (ContractSet f : spec.independent_sets) impl->family.push_back(f.mask());
      RankOracle oracle(impl);
      Report axioms = check_matroid_axioms(oracle);
      if (!axioms.pass)
        throw InstanceError("explicit matroid: family is not a matroid: " + axioms.witness);
      return oracle;
    }
  }
  throw DomainError("unreachable matroid kind");
}

RankOracle minor(const RankOracle& oracle, ContractSet fixed) {
  if (!fixed.subset_of(oracle.ground()))
    throw DomainError(bad_subset_msg(fixed, oracle.ground()));
  auto impl = std::make_shared<MinorImpl>();
  impl->ground = oracle.ground() - fixed;
  impl->parent = oracle;
  impl->fixed = fixed;
  impl->fixed_rank = oracle.rank(fixed);
  return RankOracle(impl);
}

RankOracle truncate(const RankOracle& oracle, int cap) {
  if (cap < 0) throw DomainError("truncation cap must be nonnegative");
  auto impl = std::make_shared<TruncateImpl>();
  impl->ground = oracle.ground();
  impl->parent = oracle;
  impl->cap = cap;
  return RankOracle(impl);
}

ContractSet greedy_base(const RankOracle& oracle, ContractSet x,
                        const std::vector<int>& priority) {
  if (!x.subset_of(oracle.ground())) throw DomainError(bad_subset_msg(x, oracle.ground()));
  ContractSet seen;
  ContractSet kept;
  for (int id : priority) {
    if (!x.contains(id)) continue;
    seen.insert(id);
    if (oracle.is_independent(kept.with(id))) kept.insert(id);
  }
  if (seen != x)
    throw DomainError("priority order does not cover " + to_string(x - seen));
  return kept;
}

// ---------------------------------------------------------------------------
// Axiom verification

Report check_matroid_axioms(const MatroidSpec& spec, int guard) {
  // The explicit variant validates through this path at construction; build
  // the impl directly to avoid recursing through make_oracle.
  if (spec.kind == MatroidSpec::Kind::explicit_sets) {
    auto impl = std::make_shared<ExplicitImpl>();
    impl->ground = spec.ground;
    for (ContractSet f : spec.independent_sets) impl->family.push_back(f.mask());
    std::sort(impl->family.begin(), impl->family.end());
    return check_matroid_axioms(RankOracle(impl), guard);
  }
  return check_matroid_axioms(make_oracle(spec), guard);
}

Report check_matroid_axioms(const RankOracle& oracle_in, int guard) {
  const RankOracle oracle = oracle_in.without_memo();
  const ContractSet ground = oracle.ground();
  const int n = ground.size();
  if (n > guard)
    throw GuardError("matroid axiom check: ground has " + std::to_string(n) +
                     " elements, guard is " + std::to_string(guard));

  const std::vector<int> pos = ground.ids();
  const std::uint64_t total = std::uint64_t{1} << n;

  std::vector<char> indep(total);
  std::vector<int> oracle_rank(total);
  std::vector<ContractSet> sets(total);
  for (std::uint64_t j = 0; j < total; ++j) {
    sets[j] = nth_subset(j, pos);
    indep[j] = oracle.is_independent(sets[j]) ? 1 : 0;
    oracle_rank[j] = oracle.rank(sets[j]);
  }

  // Rank derived from the independence predicate alone.
  std::vector<int> derived(total, 0);
  for (std::uint64_t j = 1; j < total; ++j) {
    if (indep[j]) {
      derived[j] = std::popcount(j);
      continue;
    }
    int best = 0;
    for (std::uint64_t b = j; b != 0; b &= b - 1) {
      std::uint64_t without = j & ~(b & -b);
      best = std::max(best, derived[without]);
    }
    derived[j] = best;
  }

  // I1
  if (!indep[0]) return Report::fail("I1 violated: the empty set is not independent");

  // I2: deleting one element from an independent set stays independent.
  for (std::uint64_t j = 1; j < total; ++j) {
    if (!indep[j]) continue;
    for (std::uint64_t b = j; b != 0; b &= b - 1) {
      std::uint64_t sub = j & ~(b & -b);
      if (!indep[sub])
        return Report::fail("I2 violated: " + to_string(sets[sub]) + " is a subset of independent " +
                            to_string(sets[j]) + " but is not independent");
    }
  }

  // I3: augmentation between independent sets of different size.
  for (std::uint64_t j = 0; j < total; ++j) {
    if (!indep[j]) continue;
    for (std::uint64_t k = 0; k < total; ++k) {
      if (!indep[k] || std::popcount(j) >= std::popcount(k)) continue;
      bool extended = false;
      for (std::uint64_t b = k & ~j; b != 0; b &= b - 1) {
        if (indep[j | (b & -b)]) {
          extended = true;
          break;
        }
      }
      if (!extended)
        return Report::fail("I3 violated: " + to_string(sets[j]) + " cannot be extended from " +
                            to_string(sets[k]));
    }
  }

  // Oracle rank must agree with the rank the independence predicate induces.
  for (std::uint64_t j = 0; j < total; ++j)
    if (oracle_rank[j] != derived[j])
      return Report::fail("rank inconsistency: oracle says r(" + to_string(sets[j]) + ") = " +
                          std::to_string(oracle_rank[j]) + ", independence enumeration gives " +
                          std::to_string(derived[j]));

  // R1
  for (std::uint64_t j = 0; j < total; ++j)
    if (oracle_rank[j] < 0 || oracle_rank[j] > std::popcount(j))
      return Report::fail("R1 violated at " + to_string(sets[j]));

  // R2: adding one element never lowers rank (stepwise monotonicity).
  for (std::uint64_t j = 0; j < total; ++j)
    for (int b = 0; b < n; ++b) {
      if ((j >> b) & 1) continue;
      const std::uint64_t k = j | (std::uint64_t{1} << b);
      if (oracle_rank[j] > oracle_rank[k])
        return Report::fail("R2 violated: r(" + to_string(sets[j]) + ") > r(" + to_string(sets[k]) + ")");
    }

  // R3: submodularity over all pairs.
  for (std::uint64_t j = 0; j < total; ++j)
    for (std::uint64_t k = j; k < total; ++k)
      if (oracle_rank[j | k] + oracle_rank[j & k] > oracle_rank[j] + oracle_rank[k])
        return Report::fail("R3 violated at X=" + to_string(sets[j]) + " X'=" + to_string(sets[k]));

  // B1: base exchange within every subset. Subset indices are compact masks,
  // so submask enumeration stays in index space.
  for (std::uint64_t j = 0; j < total; ++j) {
    const int r = oracle_rank[j];
    std::vector<std::uint64_t> bases;
    for (std::uint64_t y = j;; y = (y - 1) & j) {
      if (std::popcount(y) == r && indep[y]) bases.push_back(y);
      if (y == 0) break;
    }
    for (std::uint64_t y : bases)
      for (std::uint64_t y2 : bases) {
        if (y == y2) continue;
        for (std::uint64_t b = y & ~y2; b != 0; b &= b - 1) {
          const std::uint64_t x_elt = b & ~(b - 1);
          bool swapped = false;
          for (std::uint64_t c = y2 & ~y; c != 0; c &= c - 1) {
            const std::uint64_t y_elt = c & ~(c - 1);
            if (indep[(y & ~x_elt) | y_elt]) {
              swapped = true;
              break;
            }
          }
          if (!swapped) return Report::fail("B1 violated within " + to_string(sets[j]));
        }
      }
  }

  return Report::ok();
}

}  // namespace matchforge
