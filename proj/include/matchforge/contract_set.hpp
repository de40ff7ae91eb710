#ifndef MATCHFORGE_CONTRACT_SET_HPP
#define MATCHFORGE_CONTRACT_SET_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "matchforge/errors.hpp"

namespace matchforge {

// Hard cap on the size of an instance universe. Everything downstream is
// exhaustive, so one machine word is more than desk scale ever needs.
inline constexpr int kMaxContracts = 64;

/// A set of contracts of one instance, stored as a bitset over contract ids.
class ContractSet {
 public:
  constexpr ContractSet() = default;

  static constexpr ContractSet from_mask(std::uint64_t m) { return ContractSet(m); }

  static ContractSet single(int id) {
    check_id(id);
    return ContractSet(std::uint64_t{1} << id);
  }

  static ContractSet of(std::initializer_list<int> ids) {
    ContractSet s;
    for (int id : ids) s.insert(id);
    return s;
  }

  constexpr std::uint64_t mask() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }

  bool contains(int id) const {
    check_id(id);
    return (bits_ >> id) & 1;
  }

  ContractSet& insert(int id) {
    check_id(id);
    bits_ |= std::uint64_t{1} << id;
    return *this;
  }

  ContractSet& erase(int id) {
    check_id(id);
    bits_ &= ~(std::uint64_t{1} << id);
    return *this;
  }

  ContractSet with(int id) const { return ContractSet(*this).insert(id); }
  ContractSet without(int id) const { return ContractSet(*this).erase(id); }

  bool subset_of(ContractSet other) const { return (bits_ & ~other.bits_) == 0; }

  friend constexpr ContractSet operator|(ContractSet a, ContractSet b) { return ContractSet(a.bits_ | b.bits_); }
  friend constexpr ContractSet operator&(ContractSet a, ContractSet b) { return ContractSet(a.bits_ & b.bits_); }
  friend constexpr ContractSet operator-(ContractSet a, ContractSet b) { return ContractSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(ContractSet a, ContractSet b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator!=(ContractSet a, ContractSet b) { return a.bits_ != b.bits_; }
  friend constexpr bool operator<(ContractSet a, ContractSet b) { return a.bits_ < b.bits_; }

  // Iterates contract ids in ascending order.
  class iterator {
   public:
    using value_type = int;
    explicit constexpr iterator(std::uint64_t bits) : bits_(bits) {}
    int operator*() const { return std::countr_zero(bits_); }
    iterator& operator++() {
      bits_ &= bits_ - 1;
      return *this;
    }
    constexpr bool operator!=(const iterator& o) const { return bits_ != o.bits_; }
    constexpr bool operator==(const iterator& o) const { return bits_ == o.bits_; }

   private:
    std::uint64_t bits_;
  };

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int id : *this) out.push_back(id);
    return out;
  }

 private:
  explicit constexpr ContractSet(std::uint64_t m) : bits_(m) {}

  static void check_id(int id) {
    if (id < 0 || id >= kMaxContracts)
      throw DomainError("contract id " + std::to_string(id) + " out of range [0, 64)");
  }

  std::uint64_t bits_ = 0;
};

inline std::string to_string(ContractSet s) {
  std::string out = "{";
  bool first = true;
  for (int id : s) {
    if (!first) out += ",";
    out += std::to_string(id);
    first = false;
  }
  out += "}";
  return out;
}

// Canonical subset enumeration: bit k of `j` is placed at positions[k].
// Enumerating j = 0 .. 2^n - 1 visits every subset exactly once in a
// deterministic order, which keeps every reported witness reproducible.
inline std::uint64_t nth_subset_mask(std::uint64_t j, const std::vector<int>& positions) {
  std::uint64_t m = 0;
  for (std::size_t k = 0; (j >> k) != 0; ++k)
    if ((j >> k) & 1) m |= std::uint64_t{1} << positions[k];
  return m;
}

inline ContractSet nth_subset(std::uint64_t j, const std::vector<int>& positions) {
  return ContractSet::from_mask(nth_subset_mask(j, positions));
}

}  // namespace matchforge

#endif
