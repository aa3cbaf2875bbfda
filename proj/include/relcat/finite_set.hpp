#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relcat {

/// A finite carrier {0, ..., size-1}, optionally with distinct display labels.
///
/// Elements are always identified by index. Labels only affect reports; two
/// sets of the same size are interchangeable everywhere types are checked.
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::size_t size) : size_(size) {}
  explicit FiniteSet(std::vector<std::string> labels);

  static FiniteSet unit() { return FiniteSet(1); }
  static FiniteSet empty() { return FiniteSet(0); }

  std::size_t size() const { return size_; }
  bool labelled() const { return labels_ != nullptr; }

  /// Label of element `i`, or its decimal index when the set is unlabelled.
  std::string label(std::size_t i) const;
  std::optional<std::size_t> index_of(std::string_view label) const;
  const std::vector<std::string>* labels() const { return labels_.get(); }

  /// Cartesian product, encoded (x, y) -> x * |rhs| + y.
  static FiniteSet product(const FiniteSet& lhs, const FiniteSet& rhs);

  friend bool operator==(const FiniteSet& a, const FiniteSet& b);

 private:
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<std::string>> labels_;
};

}  // namespace relcat
