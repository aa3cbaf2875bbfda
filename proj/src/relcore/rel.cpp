#include "relcat/rel.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "relcat/error.hpp"

namespace relcat {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + Rel::kWordBits - 1) / Rel::kWordBits; }

// OR `src` (a bitset of `len` bits) into `dst` starting at bit `offset`.
void or_shifted(std::span<Rel::Word> dst, std::span<const Rel::Word> src, std::size_t len,
                std::size_t offset) {
  if (len == 0) return;
  const std::size_t word = offset / Rel::kWordBits;
  const std::size_t shift = offset % Rel::kWordBits;
  const std::size_t nsrc = words_for(len);
  for (std::size_t i = 0; i < nsrc; ++i) {
    const Rel::Word w = src[i];
    if (w == 0) continue;
    dst[word + i] |= w << shift;
    if (shift != 0 && word + i + 1 < dst.size()) {
      dst[word + i + 1] |= w >> (Rel::kWordBits - shift);
    }
  }
}

template <typename F>
void for_each_bit(std::span<const Rel::Word> row, F&& f) {
  for (std::size_t w = 0; w < row.size(); ++w) {
    Rel::Word bits = row[w];
    while (bits != 0) {
      const int tz = std::countr_zero(bits);
      f(w * Rel::kWordBits + static_cast<std::size_t>(tz));
      bits &= bits - 1;
    }
  }
}

void require_middle(const Rel& r, const Rel& s) {
  if (r.dst().size() != s.src().size()) {
    throw CompositionError("cannot compose relations: first has codomain of size " +
                           std::to_string(r.dst().size()) + ", second has domain of size " +
                           std::to_string(s.src().size()));
  }
}

void compose_row(const Rel& r, const Rel& s, Rel& out, std::size_t a) {
  auto dst = out.row(a);
  for_each_bit(r.row(a), [&](std::size_t b) {
    auto srow = s.row(b);
    for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= srow[w];
  });
}

constexpr std::size_t kParallelWork = std::size_t{1} << 16;

}  // namespace

Rel::Rel(FiniteSet src, FiniteSet dst)
    : src_(std::move(src)),
      dst_(std::move(dst)),
      words_(words_for(dst_.size())),
      bits_(src_.size() * words_, 0) {}

Rel Rel::make(FiniteSet src, FiniteSet dst,
              std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  Rel r(std::move(src), std::move(dst));
  for (const auto& [a, b] : pairs) {
    if (a >= r.src_.size() || b >= r.dst_.size()) {
      throw ConstructionError("pair (" + std::to_string(a) + "," + std::to_string(b) +
                              ") out of range for relation " + std::to_string(r.src_.size()) +
                              " -> " + std::to_string(r.dst_.size()));
    }
    r.set(a, b);
  }
  return r;
}

Rel Rel::make(FiniteSet src, FiniteSet dst,
              std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  return make(std::move(src), std::move(dst),
              std::span<const std::pair<std::size_t, std::size_t>>(pairs.begin(), pairs.size()));
}

Rel Rel::identity(const FiniteSet& set) {
  Rel r(set, set);
  for (std::size_t a = 0; a < set.size(); ++a) r.set(a, a);
  return r;
}

Rel Rel::full(FiniteSet src, FiniteSet dst) {
  Rel r(std::move(src), std::move(dst));
  for (std::size_t a = 0; a < r.src_.size(); ++a) {
    for (std::size_t b = 0; b < r.dst_.size(); ++b) r.set(a, b);
  }
  return r;
}

Rel Rel::from_matrix(FiniteSet src, FiniteSet dst, const std::vector<std::string>& rows) {
  Rel r(std::move(src), std::move(dst));
  if (rows.size() != r.dst_.size()) {
    throw ConstructionError("matrix has " + std::to_string(rows.size()) + " rows, expected " +
                            std::to_string(r.dst_.size()));
  }
  for (std::size_t b = 0; b < rows.size(); ++b) {
    if (rows[b].size() != r.src_.size()) {
      throw ConstructionError("matrix row " + std::to_string(b) + " has " +
                              std::to_string(rows[b].size()) + " columns, expected " +
                              std::to_string(r.src_.size()));
    }
    for (std::size_t a = 0; a < rows[b].size(); ++a) {
      if (rows[b][a] == '1') {
        r.set(a, b);
      } else if (rows[b][a] != '0') {
        throw ConstructionError("matrix entries must be 0 or 1");
      }
    }
  }
  return r;
}

Rel Rel::graph(FiniteSet src, FiniteSet dst, std::span<const std::size_t> map) {
  if (map.size() != src.size()) {
    throw ConstructionError("function table has " + std::to_string(map.size()) +
                            " entries for a domain of size " + std::to_string(src.size()));
  }
  Rel r(std::move(src), std::move(dst));
  for (std::size_t a = 0; a < map.size(); ++a) {
    if (map[a] >= r.dst_.size()) {
      throw ConstructionError("pair (" + std::to_string(a) + "," + std::to_string(map[a]) +
                              ") out of range for relation " + std::to_string(r.src_.size()) +
                              " -> " + std::to_string(r.dst_.size()));
    }
    r.set(a, map[a]);
  }
  return r;
}

void Rel::set(std::size_t a, std::size_t b, bool value) {
  Word& w = bits_[a * words_ + b / kWordBits];
  const Word mask = Word{1} << (b % kWordBits);
  if (value) {
    w |= mask;
  } else {
    w &= ~mask;
  }
}

bool Rel::empty() const {
  return std::all_of(bits_.begin(), bits_.end(), [](Word w) { return w == 0; });
}

std::size_t Rel::count() const {
  std::size_t n = 0;
  for (Word w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::pair<std::size_t, std::size_t>> Rel::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < src_.size(); ++a) {
    for_each_bit(row(a), [&](std::size_t b) { out.emplace_back(a, b); });
  }
  return out;
}

std::vector<std::size_t> Rel::image(std::size_t a) const {
  std::vector<std::size_t> out;
  for_each_bit(row(a), [&](std::size_t b) { out.push_back(b); });
  return out;
}

Rel Rel::relabel(FiniteSet src, FiniteSet dst) const {
  if (src.size() != src_.size() || dst.size() != dst_.size()) {
    throw ConstructionError("relabel must preserve carrier sizes");
  }
  Rel r = *this;
  r.src_ = std::move(src);
  r.dst_ = std::move(dst);
  return r;
}

std::vector<std::string> Rel::matrix_rows() const {
  std::vector<std::string> rows(dst_.size(), std::string(src_.size(), '0'));
  for (std::size_t a = 0; a < src_.size(); ++a) {
    for_each_bit(row(a), [&](std::size_t b) { rows[b][a] = '1'; });
  }
  return rows;
}

std::string Rel::to_string() const {
  std::ostringstream os;
  os << "(";
  const auto rows = matrix_rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (j) os << ' ';
      os << rows[i][j];
    }
  }
  os << ")";
  return os.str();
}

bool operator==(const Rel& a, const Rel& b) {
  return a.src_.size() == b.src_.size() && a.dst_.size() == b.dst_.size() && a.bits_ == b.bits_;
}

bool lex_less(const Rel& a, const Rel& b) {
  return a.matrix_rows() < b.matrix_rows();
}

namespace kernels {

Rel compose_serial(const Rel& r, const Rel& s) {
  require_middle(r, s);
  Rel out(r.src(), s.dst());
  for (std::size_t a = 0; a < r.src().size(); ++a) compose_row(r, s, out, a);
  return out;
}

Rel compose_parallel(const Rel& r, const Rel& s) {
  require_middle(r, s);
  Rel out(r.src(), s.dst());
  const auto n = static_cast<std::ptrdiff_t>(r.src().size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < n; ++a) compose_row(r, s, out, static_cast<std::size_t>(a));
  return out;
}

}  // namespace kernels

Rel compose(const Rel& r, const Rel& s) {
  const std::size_t work = r.src().size() * r.dst().size() * s.words_per_row();
  return work >= kParallelWork ? kernels::compose_parallel(r, s) : kernels::compose_serial(r, s);
}

Rel converse(const Rel& r) {
  Rel out(r.dst(), r.src());
  for (std::size_t a = 0; a < r.src().size(); ++a) {
    for_each_bit(r.row(a), [&](std::size_t b) { out.set(b, a); });
  }
  return out;
}

Rel product(const Rel& r, const Rel& s) {
  Rel out(FiniteSet::product(r.src(), s.src()), FiniteSet::product(r.dst(), s.dst()));
  const std::size_t nc = s.src().size();
  const std::size_t nd = s.dst().size();
  for (std::size_t a = 0; a < r.src().size(); ++a) {
    const auto rrow = r.row(a);
    for (std::size_t c = 0; c < nc; ++c) {
      auto dst = out.row(a * nc + c);
      const auto srow = s.row(c);
      for_each_bit(rrow, [&](std::size_t b) { or_shifted(dst, srow, nd, b * nd); });
    }
  }
  return out;
}

Rel intersect(const Rel& r, const Rel& s) {
  if (r.src().size() != s.src().size() || r.dst().size() != s.dst().size()) {
    throw CompositionError("intersect: shape mismatch");
  }
  Rel out = r;
  for (std::size_t a = 0; a < r.src().size(); ++a) {
    auto o = out.row(a);
    auto t = s.row(a);
    for (std::size_t w = 0; w < o.size(); ++w) o[w] &= t[w];
  }
  return out;
}

Rel unite(const Rel& r, const Rel& s) {
  if (r.src().size() != s.src().size() || r.dst().size() != s.dst().size()) {
    throw CompositionError("unite: shape mismatch");
  }
  Rel out = r;
  for (std::size_t a = 0; a < r.src().size(); ++a) {
    auto o = out.row(a);
    auto t = s.row(a);
    for (std::size_t w = 0; w < o.size(); ++w) o[w] |= t[w];
  }
  return out;
}

Predicates predicates(const Rel& r) {
  Predicates p;
  p.is_function = true;
  p.is_total = true;
  std::vector<std::size_t> preimages(r.dst().size(), 0);
  for (std::size_t a = 0; a < r.src().size(); ++a) {
    std::size_t n = 0;
    for_each_bit(r.row(a), [&](std::size_t b) {
      ++n;
      ++preimages[b];
    });
    if (n > 1) p.is_function = false;
    if (n == 0) p.is_total = false;
  }
  p.is_injective = std::all_of(preimages.begin(), preimages.end(), [](auto n) { return n <= 1; });
  p.is_surjective = std::all_of(preimages.begin(), preimages.end(), [](auto n) { return n >= 1; });
  p.is_bijection = p.is_function && p.is_total && p.is_injective && p.is_surjective;
  return p;
}

KernelResult kernel(const Rel& r) {
  std::vector<std::size_t> rows;
  for (std::size_t a = 0; a < r.src().size(); ++a) {
    const auto row = r.row(a);
    if (std::all_of(row.begin(), row.end(), [](Rel::Word w) { return w == 0; })) {
      rows.push_back(a);
    }
  }
  FiniteSet carrier;
  if (r.src().labelled()) {
    std::vector<std::string> labels;
    for (auto a : rows) labels.push_back(r.src().label(a));
    carrier = FiniteSet(std::move(labels));
  } else {
    carrier = FiniteSet(rows.size());
  }
  Rel inclusion = Rel::graph(carrier, r.src(), rows);
  return {std::move(carrier), std::move(inclusion)};
}

std::optional<Rel> factor_through_kernel(const Rel& sigma, const Rel& r, const KernelResult& k) {
  if (!compose(sigma, r).empty()) return std::nullopt;
  Rel tilde = compose(sigma, converse(k.inclusion));
  if (!(compose(tilde, k.inclusion) == sigma)) return std::nullopt;
  return tilde;
}

}  // namespace relcat
