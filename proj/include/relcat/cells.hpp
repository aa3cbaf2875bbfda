#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relcat/finite_set.hpp"
#include "relcat/rel.hpp"

namespace relcat {

/// A 1-cell S -> T: a |T| x |S| matrix of finite sets, stored row-major
/// (t outer, s inner).
///
/// Diagrams are read with the source 0-cell on the right, so for
/// B : T -> U and A : S -> T the composite B∘A is written "B.A".
///
/// Besides the fibers, a 1-cell carries a preorder on each row t: every
/// element gets a rank, strictly increasing inside a fiber, comparable
/// across the fibers of the row. Primitive cells rank by index. Composites
/// inherit the order of their factors, which is what makes horizontal
/// composition strictly associative and lets equal-looking 1-cells with
/// different element orders be told apart.
class OneCell {
 public:
  OneCell() = default;
  OneCell(FiniteSet src, FiniteSet dst, std::vector<FiniteSet> fibers, std::string name = {});
  /// `ranks[i]` are the row ranks of fiber i; they must be strictly
  /// increasing. They are normalised to a total order per row, ties broken
  /// by column.
  OneCell(FiniteSet src, FiniteSet dst, std::vector<FiniteSet> fibers,
          std::vector<std::vector<std::uint32_t>> ranks, std::string name = {});

  static OneCell identity(const FiniteSet& set);
  /// The 1-cell 1 -> 1 whose only fiber is `x`.
  static OneCell scalar(FiniteSet x, std::string name = {});

  const FiniteSet& src() const { return src_; }
  const FiniteSet& dst() const { return dst_; }
  const FiniteSet& fiber(std::size_t t, std::size_t s) const { return fibers_[t * src_.size() + s]; }
  std::size_t fiber_size(std::size_t t, std::size_t s) const { return fiber(t, s).size(); }
  const std::vector<FiniteSet>& fibers() const { return fibers_; }
  bool is_scalar() const { return src_.size() == 1 && dst_.size() == 1; }
  std::uint32_t rank(std::size_t t, std::size_t s, std::size_t i) const {
    return ranks_[t * src_.size() + s][i];
  }
  const std::vector<std::vector<std::uint32_t>>& ranks() const { return ranks_; }

  const std::string& name() const { return name_; }
  OneCell renamed(std::string name) const;
  /// Name (if any) plus shape and the matrix of fiber sizes.
  std::string describe() const;

  /// Same 0-cell sizes, fiber sizes and row orders; names and labels are
  /// ignored.
  friend bool operator==(const OneCell& a, const OneCell& b);

 private:
  void normalise_ranks();

  FiniteSet src_;
  FiniteSet dst_;
  std::vector<FiniteSet> fibers_;
  std::vector<std::vector<std::uint32_t>> ranks_;
  std::string name_;
};

/// A 2-cell between parallel 1-cells, one relation per fiber.
class TwoCell {
 public:
  TwoCell() = default;
  TwoCell(OneCell dom, OneCell cod, std::vector<Rel> components);

  static TwoCell identity(const OneCell& a);
  static TwoCell empty(const OneCell& dom, const OneCell& cod);
  /// The scalar 2-cell with the relation r as its only component.
  static TwoCell scalar(const Rel& r, std::string dom_name = {}, std::string cod_name = {});

  const OneCell& dom() const { return dom_; }
  const OneCell& cod() const { return cod_; }
  const Rel& component(std::size_t t, std::size_t s) const {
    return components_[t * dom_.src().size() + s];
  }
  const std::vector<Rel>& components() const { return components_; }
  /// The only component of a scalar cell.
  const Rel& scalar_rel() const;

  TwoCell retyped(OneCell dom, OneCell cod) const;

 private:
  OneCell dom_;
  OneCell cod_;
  std::vector<Rel> components_;
};

OneCell hcompose(const OneCell& left, const OneCell& right);
TwoCell hcompose(const TwoCell& left, const TwoCell& right);
/// alpha first, then beta.
TwoCell vcompose(const TwoCell& alpha, const TwoCell& beta);
OneCell tensor(const OneCell& a, const OneCell& b);
TwoCell tensor(const TwoCell& a, const TwoCell& b);
TwoCell converse(const TwoCell& a);

/// Position of element `(t, b, a)` inside fiber (u, s) of left∘right, where
/// b lies in left(u, t) and a in right(t, s).
///
/// Elements are ordered lexicographically by (row rank of b in left, t, a).
/// With primitive factors this is the order (b, t, a); in general it is the
/// lexicographic order on the flattened paths, so bracketing does not matter.
class CompositeLayout {
 public:
  CompositeLayout(const OneCell& left, const OneCell& right, std::size_t u, std::size_t s);
  std::size_t position(std::size_t t, std::size_t b, std::size_t a) const {
    return offset_[t][b] + a;
  }
  std::size_t size() const { return size_; }

 private:
  std::vector<std::vector<std::size_t>> offset_;
  std::size_t size_ = 0;
};

struct Difference {
  std::size_t t = 0;
  std::size_t s = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  std::string from_label;
  std::string to_label;
  bool in_lhs = false;  // which side relates from -> to
};

struct EqualityReport {
  bool equal = false;
  bool type_mismatch = false;
  std::optional<Difference> difference;
  std::string message;
};

/// Exact equality of 2-cells with a description of the first difference in
/// row-major fiber order.
EqualityReport equal(const TwoCell& lhs, const TwoCell& rhs);

}  // namespace relcat
