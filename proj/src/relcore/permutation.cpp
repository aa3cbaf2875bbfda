#include "relcat/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "relcat/error.hpp"

namespace relcat {

Permutation::Permutation(FiniteSet carrier, std::vector<std::size_t> map)
    : carrier_(std::move(carrier)), map_(std::move(map)) {
  if (map_.size() != carrier_.size()) {
    throw ConstructionError("permutation map has " + std::to_string(map_.size()) +
                            " entries for a carrier of size " + std::to_string(carrier_.size()));
  }
  std::vector<bool> hit(map_.size(), false);
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (map_[i] >= map_.size() || hit[map_[i]]) {
      throw ConstructionError("permutation map is not a bijection at index " + std::to_string(i));
    }
    hit[map_[i]] = true;
  }
}

Permutation Permutation::identity(const FiniteSet& carrier) {
  std::vector<std::size_t> map(carrier.size());
  std::iota(map.begin(), map.end(), std::size_t{0});
  return Permutation(carrier, std::move(map));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
  return Permutation(carrier_, std::move(inv));
}

Rel Permutation::graph() const { return Rel::graph(carrier_, carrier_, map_); }

std::vector<Permutation> all_permutations(const FiniteSet& carrier) {
  std::vector<std::size_t> map(carrier.size());
  std::iota(map.begin(), map.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    out.emplace_back(carrier, map);
  } while (std::next_permutation(map.begin(), map.end()));
  return out;
}

}  // namespace relcat
