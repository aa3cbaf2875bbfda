#include "relcat/finite_set.hpp"

#include <unordered_set>

#include "relcat/error.hpp"

namespace relcat {

FiniteSet::FiniteSet(std::vector<std::string> labels) : size_(labels.size()) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw ConstructionError("duplicate element label '" + l + "'");
    }
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

std::string FiniteSet::label(std::size_t i) const {
  if (labels_) return (*labels_)[i];
  return std::to_string(i);
}

std::optional<std::size_t> FiniteSet::index_of(std::string_view label) const {
  if (!labels_) return std::nullopt;
  for (std::size_t i = 0; i < labels_->size(); ++i) {
    if ((*labels_)[i] == label) return i;
  }
  return std::nullopt;
}

FiniteSet FiniteSet::product(const FiniteSet& lhs, const FiniteSet& rhs) {
  if (!lhs.labelled() && !rhs.labelled()) {
    return FiniteSet(lhs.size() * rhs.size());
  }
  std::vector<std::string> labels;
  labels.reserve(lhs.size() * rhs.size());
  for (std::size_t x = 0; x < lhs.size(); ++x) {
    for (std::size_t y = 0; y < rhs.size(); ++y) {
      labels.push_back(lhs.label(x) + "," + rhs.label(y));
    }
  }
  return FiniteSet(std::move(labels));
}

bool operator==(const FiniteSet& a, const FiniteSet& b) {
  if (a.size_ != b.size_) return false;
  if (a.labelled() != b.labelled()) return false;
  return !a.labelled() || *a.labels_ == *b.labels_;
}

}  // namespace relcat
