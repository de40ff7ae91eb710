#ifndef MATCHFORGE_TESTS_ORACLES_HPP
#define MATCHFORGE_TESTS_ORACLES_HPP

// Brute-force oracles used to derive expected values. Everything here is
// deliberately independent of the library's algorithms: transversal
// independence is decided by backtracking over per-type seat budgets (not by
// augmenting paths), rank by subset enumeration (not by greedy), and the
// designed rules' expected outputs by enumerating the axiom correspondences
// written out by hand.

#include <functional>
#include <map>
#include <vector>

#include "matchforge/contract_set.hpp"
#include "matchforge/model.hpp"

namespace matchforge::test_oracles {

struct ReserveGraph {
  std::vector<int> reserves;                     // seats per type
  std::map<int, std::vector<int>> traits;        // element -> type indices
};

// Can every element of X be charged to a distinct reserved seat? Seats of a
// type are interchangeable, so a per-type counting backtrack decides it.
inline bool seat_assignable(const ReserveGraph& g, const std::vector<int>& elems, std::size_t k,
                            std::vector<int>& used) {
  if (k == elems.size()) return true;
  const auto it = g.traits.find(elems[k]);
  if (it == g.traits.end()) return false;
  for (int t : it->second) {
    if (used[t] >= g.reserves[t]) continue;
    ++used[t];
    if (seat_assignable(g, elems, k + 1, used)) {
      --used[t];
      return true;
    }
    --used[t];
  }
  return false;
}

inline bool brute_transversal_independent(const ReserveGraph& g, ContractSet x) {
  std::vector<int> elems = x.ids();
  std::vector<int> used(g.reserves.size(), 0);
  return seat_assignable(g, elems, 0, used);
}

// Rank by enumerating every subset and taking the largest independent one.
inline int brute_rank(const std::function<bool(ContractSet)>& independent, ContractSet x) {
  const std::vector<int> pos = x.ids();
  const std::uint64_t total = std::uint64_t{1} << x.size();
  int best = 0;
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet s = nth_subset(j, pos);
    if (s.size() > best && independent(s)) best = s.size();
  }
  return best;
}

inline int brute_transversal_rank(const ReserveGraph& g, ContractSet x) {
  return brute_rank([&](ContractSet s) { return brute_transversal_independent(g, s); }, x);
}

// All bases (maximal independent subsets) of X, by enumeration.
inline std::vector<ContractSet> brute_bases(const std::function<bool(ContractSet)>& independent,
                                            ContractSet x) {
  const int r = brute_rank(independent, x);
  const std::vector<int> pos = x.ids();
  const std::uint64_t total = std::uint64_t{1} << x.size();
  std::vector<ContractSet> out;
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet s = nth_subset(j, pos);
    if (s.size() == r && independent(s)) out.push_back(s);
  }
  return out;
}

// Candidate choices allowed by a conjunction of hand-written predicates.
using MemberFn = std::function<bool(ContractSet problem, ContractSet candidate)>;

inline std::vector<ContractSet> allowed_choices(const std::vector<MemberFn>& axioms,
                                                ContractSet x) {
  const std::vector<int> pos = x.ids();
  const std::uint64_t total = std::uint64_t{1} << x.size();
  std::vector<ContractSet> out;
  for (std::uint64_t j = 0; j < total; ++j) {
    const ContractSet y = nth_subset(j, pos);
    bool ok = true;
    for (const MemberFn& m : axioms)
      if (!m(x, y)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(y);
  }
  return out;
}

struct ChileData {
  int capacity = 0;
  std::vector<int> priority;  // best first
  ContractSet returning;
  ReserveGraph graph;
};

// The four correspondences of the guaranteed-enrollment characterization,
// written out directly from their definitions over the brute-force rank.
inline std::vector<MemberFn> chile_axioms(const ChileData& d) {
  auto rank = [g = d.graph](ContractSet s) { return brute_transversal_rank(g, s); };
  auto rank_of = [pr = d.priority](int id) {
    for (std::size_t k = 0; k < pr.size(); ++k)
      if (pr[k] == id) return static_cast<int>(k);
    return -1;
  };
  std::vector<MemberFn> out;
  // guaranteed enrollment
  out.push_back([ret = d.returning](ContractSet x, ContractSet y) {
    return (x & ret).subset_of(y);
  });
  // maximal utilization of reservations
  out.push_back([rank, q = d.capacity, ret = d.returning](ContractSet x, ContractSet y) {
    if (y.size() < q) {
      for (int rej : x - y)
        if (rank(y.with(rej)) == rank(y) + 1) return false;
      return true;
    }
    if (y.size() == q) {
      for (int rej : x - y)
        for (int held : y - ret)
          if (rank(y.without(held).with(rej)) > rank(y)) return false;
      return true;
    }
    return false;
  });
  // no justified envy under reserves
  out.push_back([rank, rank_of, ret = d.returning](ContractSet x, ContractSet y) {
    for (int held : y - ret)
      for (int rej : x - y)
        if (rank_of(rej) < rank_of(held) && rank(y.without(held).with(rej)) >= rank(y))
          return false;
    return true;
  });
  // non-wastefulness
  out.push_back([q = d.capacity](ContractSet x, ContractSet y) {
    return y.size() == std::min(x.size(), q);
  });
  return out;
}

// The matroid-with-capacity characterization over the brute-force rank of a
// reserve graph truncated at the capacity.
inline std::vector<MemberFn> capped_matroid_axioms(const ChileData& d) {
  auto rank = [g = d.graph, q = d.capacity](ContractSet s) {
    return std::min(brute_transversal_rank(g, s), q);
  };
  auto rank_of = [pr = d.priority](int id) {
    for (std::size_t k = 0; k < pr.size(); ++k)
      if (pr[k] == id) return static_cast<int>(k);
    return -1;
  };
  std::vector<MemberFn> out;
  // matroidal objectives
  out.push_back([rank](ContractSet x, ContractSet y) { return rank(y) == rank(x); });
  // no justified envy under rank
  out.push_back([rank, rank_of](ContractSet x, ContractSet y) {
    for (int held : y)
      for (int rej : x - y)
        if (rank_of(rej) < rank_of(held) && rank(y.without(held).with(rej)) >= rank(y))
          return false;
    return true;
  });
  // non-wastefulness
  out.push_back([q = d.capacity](ContractSet x, ContractSet y) {
    return y.size() == std::min(x.size(), q);
  });
  return out;
}

// The feasibility / rank maximality / no justified envy under rank triple for
// the plain greedy rule, uncapped.
inline std::vector<MemberFn> greedy_axioms(const ChileData& d) {
  auto indep = [g = d.graph](ContractSet s) { return brute_transversal_independent(g, s); };
  auto rank = [g = d.graph](ContractSet s) { return brute_transversal_rank(g, s); };
  auto rank_of = [pr = d.priority](int id) {
    for (std::size_t k = 0; k < pr.size(); ++k)
      if (pr[k] == id) return static_cast<int>(k);
    return -1;
  };
  std::vector<MemberFn> out;
  out.push_back([indep](ContractSet, ContractSet y) { return indep(y); });
  out.push_back([rank](ContractSet x, ContractSet y) { return rank(y) == rank(x); });
  out.push_back([rank, rank_of](ContractSet x, ContractSet y) {
    for (int held : y)
      for (int rej : x - y)
        if (rank_of(rej) < rank_of(held) && rank(y.without(held).with(rej)) >= rank(y))
          return false;
    return true;
  });
  return out;
}

// Demand evaluated straight from its definition.
inline ContractSet brute_demand(const Problem& p, const Matching& x, int institution) {
  ContractSet d;
  for (int id : p.institution_contracts(institution)) {
    const int agent = p.contract(id).agent;
    const int held = x.assigned(agent);
    if (p.preference(agent).rank_of(id) <= p.preference(agent).rank_of(held)) d.insert(id);
  }
  return d;
}

}  // namespace matchforge::test_oracles

#endif
