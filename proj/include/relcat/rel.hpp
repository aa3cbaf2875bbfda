#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relcat/finite_set.hpp"

namespace relcat {

/// A binary relation src -> dst stored as a dense bit matrix.
///
/// Storage is source-major: row `a` holds the image of `a` as a bitset over
/// dst. The logical matrix used for printing is dst x src (the convention of
/// the matrices in the literature: rows are outputs, columns are inputs).
class Rel {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Rel() = default;
  /// The empty relation src -> dst.
  Rel(FiniteSet src, FiniteSet dst);

  /// Relation holding exactly `pairs` (a, b). Duplicates are harmless; an
  /// out-of-range pair throws ConstructionError naming it.
  static Rel make(FiniteSet src, FiniteSet dst,
                  std::span<const std::pair<std::size_t, std::size_t>> pairs);
  static Rel make(FiniteSet src, FiniteSet dst,
                  std::initializer_list<std::pair<std::size_t, std::size_t>> pairs);
  static Rel identity(const FiniteSet& set);
  static Rel full(FiniteSet src, FiniteSet dst);
  /// From the rows of the dst x src matrix ("1001" style strings).
  static Rel from_matrix(FiniteSet src, FiniteSet dst, const std::vector<std::string>& rows);
  /// Graph of a function given as dst index per src element.
  static Rel graph(FiniteSet src, FiniteSet dst, std::span<const std::size_t> map);

  const FiniteSet& src() const { return src_; }
  const FiniteSet& dst() const { return dst_; }

  bool test(std::size_t a, std::size_t b) const {
    return (bits_[a * words_ + b / kWordBits] >> (b % kWordBits)) & 1u;
  }
  void set(std::size_t a, std::size_t b, bool value = true);

  std::span<const Word> row(std::size_t a) const {
    return {bits_.data() + a * words_, words_};
  }
  std::span<Word> row(std::size_t a) { return {bits_.data() + a * words_, words_}; }
  std::size_t words_per_row() const { return words_; }

  bool empty() const;
  std::size_t count() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  /// Elements of dst related to `a`, increasing.
  std::vector<std::size_t> image(std::size_t a) const;

  /// Replace the carriers (same sizes) without touching the bits.
  Rel relabel(FiniteSet src, FiniteSet dst) const;

  /// Rows of the dst x src matrix as strings of '0'/'1'.
  std::vector<std::string> matrix_rows() const;
  std::string to_string() const;

  /// Same shape and bits; labels are ignored.
  friend bool operator==(const Rel& a, const Rel& b);
  /// Lexicographic order on the dst x src matrix read row-major.
  friend bool lex_less(const Rel& a, const Rel& b);

 private:
  FiniteSet src_;
  FiniteSet dst_;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

/// r : A -> B followed by s : B -> C (diagrammatic order).
Rel compose(const Rel& r, const Rel& s);
Rel converse(const Rel& r);
/// r x s : A x C -> B x D, pairs encoded with the left factor as high digit.
Rel product(const Rel& r, const Rel& s);
Rel intersect(const Rel& r, const Rel& s);
Rel unite(const Rel& r, const Rel& s);

/// Serial and OpenMP variants of the composition kernel. `compose` picks one
/// by size; both are exposed for tests and benchmarks.
namespace kernels {
Rel compose_serial(const Rel& r, const Rel& s);
Rel compose_parallel(const Rel& r, const Rel& s);
}  // namespace kernels

struct Predicates {
  bool is_function = false;   // single-valued (partial functions allowed)
  bool is_total = false;
  bool is_injective = false;
  bool is_surjective = false;
  bool is_bijection = false;
};

Predicates predicates(const Rel& r);

struct KernelResult {
  FiniteSet carrier;  // elements of A with empty image, increasing order
  Rel inclusion;      // carrier -> A
};

KernelResult kernel(const Rel& r);

/// For sigma : X -> A with compose(sigma, r) empty, the unique sigma~ with
/// compose(sigma~, inclusion) == sigma. nullopt if sigma does not annihilate r.
std::optional<Rel> factor_through_kernel(const Rel& sigma, const Rel& r,
                                         const KernelResult& k);

}  // namespace relcat
