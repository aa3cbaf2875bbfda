#pragma once

#include <cstddef>
#include <vector>

#include "relcat/finite_set.hpp"
#include "relcat/rel.hpp"

namespace relcat {

/// A bijection on a finite carrier, stored as its index map.
class Permutation {
 public:
  Permutation() = default;
  /// Throws ConstructionError unless `map` is a bijection on 0..size-1.
  Permutation(FiniteSet carrier, std::vector<std::size_t> map);

  static Permutation identity(const FiniteSet& carrier);

  const FiniteSet& carrier() const { return carrier_; }
  const std::vector<std::size_t>& map() const { return map_; }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  std::size_t size() const { return map_.size(); }

  Permutation inverse() const;
  Rel graph() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.map_ == b.map_; }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.map_ < b.map_; }

 private:
  FiniteSet carrier_;
  std::vector<std::size_t> map_;
};

/// All n! permutations of `carrier` in lexicographic order of their maps.
std::vector<Permutation> all_permutations(const FiniteSet& carrier);

}  // namespace relcat
