#include "relcat/cells.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "relcat/error.hpp"

namespace relcat {

namespace {

std::string join_name(const std::string& a, const std::string& b, const char* op) {
  if (a.empty() || b.empty()) return {};
  return "(" + a + op + b + ")";
}

FiniteSet composite_fiber(const OneCell& left, const OneCell& right, std::size_t u,
                          std::size_t s, std::size_t size) {
  // Only the single-middle case has an obvious label scheme (pair labels).
  if (right.dst().size() == 1 &&
      (left.fiber(u, 0).labelled() || right.fiber(0, s).labelled())) {
    return FiniteSet::product(left.fiber(u, 0), right.fiber(0, s));
  }
  return FiniteSet(size);
}

using RowKeys = std::vector<std::vector<std::uint64_t>>;

// Ranks per row from arbitrary comparable keys. Ties between fibers of the
// same row are broken by column: a left factor is always followed by the
// middle index in a composite key, so only this total order is observable.
std::vector<std::vector<std::uint32_t>> dense_ranks(std::size_t nsrc, std::size_t ndst,
                                                    const RowKeys& keys) {
  std::vector<std::vector<std::uint32_t>> out(keys.size());
  std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>> row;
  for (std::size_t t = 0; t < ndst; ++t) {
    row.clear();
    for (std::size_t s = 0; s < nsrc; ++s) {
      const auto& k = keys[t * nsrc + s];
      out[t * nsrc + s].resize(k.size());
      for (std::size_t i = 0; i < k.size(); ++i) row.emplace_back(k[i], s, i);
    }
    std::sort(row.begin(), row.end());
    for (std::size_t r = 0; r < row.size(); ++r) {
      const auto& [v, s, i] = row[r];
      out[t * nsrc + s][i] = static_cast<std::uint32_t>(r);
    }
  }
  return out;
}

std::uint32_t max_rank(const OneCell& c) {
  std::uint32_t m = 0;
  for (const auto& f : c.ranks()) {
    if (!f.empty()) m = std::max(m, f.back());
  }
  return m;
}

bool same_sizes(const OneCell& a, const OneCell& b) {
  if (a.src().size() != b.src().size() || a.dst().size() != b.dst().size()) return false;
  for (std::size_t i = 0; i < a.fibers().size(); ++i) {
    if (a.fibers()[i].size() != b.fibers()[i].size()) return false;
  }
  return true;
}

// Extra note for 1-cells that only differ in how their elements are ordered.
std::string order_note(const OneCell& a, const OneCell& b) {
  return same_sizes(a, b) && !(a == b) ? " (same fiber sizes, different element order)" : "";
}

}  // namespace

OneCell::OneCell(FiniteSet src, FiniteSet dst, std::vector<FiniteSet> fibers, std::string name)
    : src_(std::move(src)), dst_(std::move(dst)), fibers_(std::move(fibers)), name_(std::move(name)) {
  if (fibers_.size() != src_.size() * dst_.size()) {
    throw ConstructionError("1-cell has " + std::to_string(fibers_.size()) + " fibers, expected " +
                            std::to_string(dst_.size()) + "x" + std::to_string(src_.size()));
  }
  ranks_.resize(fibers_.size());
  for (std::size_t i = 0; i < fibers_.size(); ++i) {
    ranks_[i].resize(fibers_[i].size());
    for (std::size_t k = 0; k < ranks_[i].size(); ++k) ranks_[i][k] = static_cast<std::uint32_t>(k);
  }
  normalise_ranks();
}

OneCell::OneCell(FiniteSet src, FiniteSet dst, std::vector<FiniteSet> fibers,
                 std::vector<std::vector<std::uint32_t>> ranks, std::string name)
    : OneCell(std::move(src), std::move(dst), std::move(fibers), std::move(name)) {
  if (ranks.size() != fibers_.size()) {
    throw ConstructionError("1-cell rank table has " + std::to_string(ranks.size()) +
                            " entries, expected " + std::to_string(fibers_.size()));
  }
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i].size() != fibers_[i].size()) {
      throw ConstructionError("rank list of fiber " + std::to_string(i) + " has wrong length");
    }
    for (std::size_t k = 1; k < ranks[i].size(); ++k) {
      if (ranks[i][k - 1] >= ranks[i][k]) {
        throw ConstructionError("ranks inside fiber " + std::to_string(i) +
                                " must be strictly increasing");
      }
    }
  }
  ranks_ = std::move(ranks);
  normalise_ranks();
}

void OneCell::normalise_ranks() {
  RowKeys keys(ranks_.size());
  for (std::size_t i = 0; i < ranks_.size(); ++i) keys[i].assign(ranks_[i].begin(), ranks_[i].end());
  ranks_ = dense_ranks(src_.size(), dst_.size(), keys);
}

OneCell OneCell::identity(const FiniteSet& set) {
  std::vector<FiniteSet> fibers;
  fibers.reserve(set.size() * set.size());
  for (std::size_t t = 0; t < set.size(); ++t) {
    for (std::size_t s = 0; s < set.size(); ++s) fibers.emplace_back(t == s ? 1 : 0);
  }
  return OneCell(set, set, std::move(fibers));
}

OneCell OneCell::scalar(FiniteSet x, std::string name) {
  return OneCell(FiniteSet::unit(), FiniteSet::unit(), {std::move(x)}, std::move(name));
}

OneCell OneCell::renamed(std::string name) const {
  OneCell c = *this;
  c.name_ = std::move(name);
  return c;
}

std::string OneCell::describe() const {
  std::ostringstream os;
  if (!name_.empty()) os << name_ << " ";
  os << src_.size() << "->" << dst_.size() << " [";
  for (std::size_t t = 0; t < dst_.size(); ++t) {
    if (t) os << "; ";
    for (std::size_t s = 0; s < src_.size(); ++s) {
      if (s) os << ' ';
      os << fiber_size(t, s);
    }
  }
  os << "]";
  return os.str();
}

bool operator==(const OneCell& a, const OneCell& b) {
  if (a.src_.size() != b.src_.size() || a.dst_.size() != b.dst_.size()) return false;
  for (std::size_t i = 0; i < a.fibers_.size(); ++i) {
    if (a.fibers_[i].size() != b.fibers_[i].size()) return false;
  }
  return a.ranks_ == b.ranks_;
}

TwoCell::TwoCell(OneCell dom, OneCell cod, std::vector<Rel> components)
    : dom_(std::move(dom)), cod_(std::move(cod)), components_(std::move(components)) {
  if (dom_.src().size() != cod_.src().size() || dom_.dst().size() != cod_.dst().size()) {
    throw ConstructionError("2-cell between non-parallel 1-cells " + dom_.describe() + " and " +
                            cod_.describe());
  }
  if (components_.size() != dom_.fibers().size()) {
    throw ConstructionError("2-cell has " + std::to_string(components_.size()) +
                            " components, expected " + std::to_string(dom_.fibers().size()));
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const Rel& r = components_[i];
    if (r.src().size() != dom_.fibers()[i].size() || r.dst().size() != cod_.fibers()[i].size()) {
      const std::size_t n = dom_.src().size();
      throw ConstructionError("component (" + std::to_string(i / n) + "," + std::to_string(i % n) +
                              ") has shape " + std::to_string(r.src().size()) + "->" +
                              std::to_string(r.dst().size()) + ", fibers are " +
                              std::to_string(dom_.fibers()[i].size()) + "->" +
                              std::to_string(cod_.fibers()[i].size()));
    }
  }
}

TwoCell TwoCell::identity(const OneCell& a) {
  std::vector<Rel> comps;
  comps.reserve(a.fibers().size());
  for (const auto& f : a.fibers()) comps.push_back(Rel::identity(f));
  return TwoCell(a, a, std::move(comps));
}

TwoCell TwoCell::empty(const OneCell& dom, const OneCell& cod) {
  std::vector<Rel> comps;
  comps.reserve(dom.fibers().size());
  for (std::size_t i = 0; i < dom.fibers().size() && i < cod.fibers().size(); ++i) {
    comps.emplace_back(dom.fibers()[i], cod.fibers()[i]);
  }
  return TwoCell(dom, cod, std::move(comps));
}

TwoCell TwoCell::scalar(const Rel& r, std::string dom_name, std::string cod_name) {
  return TwoCell(OneCell::scalar(r.src(), std::move(dom_name)),
                 OneCell::scalar(r.dst(), std::move(cod_name)), {r});
}

const Rel& TwoCell::scalar_rel() const {
  if (!dom_.is_scalar()) throw PreconditionError("not a scalar 2-cell: " + dom_.describe());
  return components_.front();
}

TwoCell TwoCell::retyped(OneCell dom, OneCell cod) const {
  if (!(dom == dom_) || !(cod == cod_)) {
    throw ConstructionError("retyping must preserve fiber sizes: " + dom_.describe() + " => " +
                            cod_.describe() + " vs " + dom.describe() + " => " + cod.describe());
  }
  std::vector<Rel> comps;
  comps.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    comps.push_back(components_[i].relabel(dom.fibers()[i], cod.fibers()[i]));
  }
  return TwoCell(std::move(dom), std::move(cod), std::move(comps));
}

CompositeLayout::CompositeLayout(const OneCell& left, const OneCell& right, std::size_t u,
                                 std::size_t s) {
  const std::size_t nt = right.dst().size();
  offset_.resize(nt);
  // (rank of b in row u of left, t, b)
  std::vector<std::tuple<std::uint32_t, std::size_t, std::size_t>> blocks;
  for (std::size_t t = 0; t < nt; ++t) {
    offset_[t].resize(left.fiber_size(u, t));
    for (std::size_t b = 0; b < left.fiber_size(u, t); ++b) blocks.emplace_back(left.rank(u, t, b), t, b);
  }
  std::sort(blocks.begin(), blocks.end());
  for (const auto& [r, t, b] : blocks) {
    offset_[t][b] = size_;
    size_ += right.fiber_size(t, s);
  }
}

OneCell hcompose(const OneCell& left, const OneCell& right) {
  if (right.dst().size() != left.src().size()) {
    throw CompositionError("cannot compose 1-cells horizontally: " + left.describe() + " after " +
                           right.describe() + " (middle 0-cells differ)");
  }
  const std::size_t nu = left.dst().size();
  const std::size_t ns = right.src().size();
  const std::size_t nt = right.dst().size();
  const std::uint64_t rspan = std::uint64_t{max_rank(right)} + 1;
  std::vector<FiniteSet> fibers;
  RowKeys keys;
  fibers.reserve(nu * ns);
  keys.reserve(nu * ns);
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t s = 0; s < ns; ++s) {
      const CompositeLayout layout(left, right, u, s);
      std::vector<std::uint64_t> k(layout.size());
      for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t b = 0; b < left.fiber_size(u, t); ++b) {
          const std::uint64_t hi = (std::uint64_t{left.rank(u, t, b)} * nt + t) * rspan;
          for (std::size_t a = 0; a < right.fiber_size(t, s); ++a) {
            k[layout.position(t, b, a)] = hi + right.rank(t, s, a);
          }
        }
      }
      fibers.push_back(composite_fiber(left, right, u, s, layout.size()));
      keys.push_back(std::move(k));
    }
  }
  return OneCell(right.src(), left.dst(), std::move(fibers), dense_ranks(ns, nu, keys),
                 join_name(left.name(), right.name(), "."));
}

TwoCell hcompose(const TwoCell& left, const TwoCell& right) {
  if (right.dom().dst().size() != left.dom().src().size()) {
    throw CompositionError("cannot compose 2-cells horizontally: " + left.dom().describe() +
                           " after " + right.dom().describe() + " (middle 0-cells differ)");
  }
  OneCell dom = hcompose(left.dom(), right.dom());
  OneCell cod = hcompose(left.cod(), right.cod());
  const std::size_t nu = dom.dst().size();
  const std::size_t ns = dom.src().size();
  const std::size_t nt = right.dom().dst().size();
  std::vector<Rel> comps;
  comps.reserve(nu * ns);
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t s = 0; s < ns; ++s) {
      const CompositeLayout in(left.dom(), right.dom(), u, s);
      const CompositeLayout out(left.cod(), right.cod(), u, s);
      Rel r(dom.fiber(u, s), cod.fiber(u, s));
      for (std::size_t t = 0; t < nt; ++t) {
        const Rel& beta = left.component(u, t);
        const Rel& alpha = right.component(t, s);
        std::vector<std::vector<std::size_t>> aimgs(alpha.src().size());
        for (std::size_t a = 0; a < aimgs.size(); ++a) aimgs[a] = alpha.image(a);
        for (std::size_t b = 0; b < beta.src().size(); ++b) {
          const auto bimg = beta.image(b);
          if (bimg.empty()) continue;
          for (std::size_t a = 0; a < alpha.src().size(); ++a) {
            const auto& aimg = aimgs[a];
            const std::size_t from = in.position(t, b, a);
            for (auto b2 : bimg) {
              for (auto a2 : aimg) r.set(from, out.position(t, b2, a2));
            }
          }
        }
      }
      comps.push_back(std::move(r));
    }
  }
  return TwoCell(std::move(dom), std::move(cod), std::move(comps));
}

TwoCell vcompose(const TwoCell& alpha, const TwoCell& beta) {
  if (!(alpha.cod() == beta.dom())) {
    throw CompositionError("cannot compose 2-cells vertically: codomain " + alpha.cod().describe() +
                           " vs domain " + beta.dom().describe() +
                           order_note(alpha.cod(), beta.dom()));
  }
  std::vector<Rel> comps;
  comps.reserve(alpha.components().size());
  for (std::size_t i = 0; i < alpha.components().size(); ++i) {
    comps.push_back(compose(alpha.components()[i], beta.components()[i]));
  }
  return TwoCell(alpha.dom(), beta.cod(), std::move(comps));
}

OneCell tensor(const OneCell& a, const OneCell& b) {
  FiniteSet src = FiniteSet::product(a.src(), b.src());
  FiniteSet dst = FiniteSet::product(a.dst(), b.dst());
  const std::uint64_t bspan = std::uint64_t{max_rank(b)} + 1;
  std::vector<FiniteSet> fibers;
  RowKeys keys;
  fibers.reserve(src.size() * dst.size());
  keys.reserve(src.size() * dst.size());
  for (std::size_t t = 0; t < a.dst().size(); ++t) {
    for (std::size_t t2 = 0; t2 < b.dst().size(); ++t2) {
      for (std::size_t s = 0; s < a.src().size(); ++s) {
        for (std::size_t s2 = 0; s2 < b.src().size(); ++s2) {
          fibers.push_back(FiniteSet::product(a.fiber(t, s), b.fiber(t2, s2)));
          std::vector<std::uint64_t> k;
          k.reserve(fibers.back().size());
          for (std::size_t x = 0; x < a.fiber_size(t, s); ++x) {
            for (std::size_t y = 0; y < b.fiber_size(t2, s2); ++y) {
              k.push_back(std::uint64_t{a.rank(t, s, x)} * bspan + b.rank(t2, s2, y));
            }
          }
          keys.push_back(std::move(k));
        }
      }
    }
  }
  auto ranks = dense_ranks(src.size(), dst.size(), keys);
  return OneCell(std::move(src), std::move(dst), std::move(fibers), std::move(ranks),
                 join_name(a.name(), b.name(), "*"));
}

TwoCell tensor(const TwoCell& a, const TwoCell& b) {
  OneCell dom = tensor(a.dom(), b.dom());
  OneCell cod = tensor(a.cod(), b.cod());
  std::vector<Rel> comps;
  comps.reserve(dom.fibers().size());
  for (std::size_t t = 0; t < a.dom().dst().size(); ++t) {
    for (std::size_t t2 = 0; t2 < b.dom().dst().size(); ++t2) {
      for (std::size_t s = 0; s < a.dom().src().size(); ++s) {
        for (std::size_t s2 = 0; s2 < b.dom().src().size(); ++s2) {
          comps.push_back(product(a.component(t, s), b.component(t2, s2)));
        }
      }
    }
  }
  return TwoCell(std::move(dom), std::move(cod), std::move(comps));
}

TwoCell converse(const TwoCell& a) {
  std::vector<Rel> comps;
  comps.reserve(a.components().size());
  for (const auto& r : a.components()) comps.push_back(converse(r));
  return TwoCell(a.cod(), a.dom(), std::move(comps));
}

EqualityReport equal(const TwoCell& lhs, const TwoCell& rhs) {
  EqualityReport rep;
  if (!(lhs.dom() == rhs.dom()) || !(lhs.cod() == rhs.cod())) {
    rep.type_mismatch = true;
    rep.message = "type mismatch: " + lhs.dom().describe() + " => " + lhs.cod().describe() +
                  " vs " + rhs.dom().describe() + " => " + rhs.cod().describe() +
                  order_note(lhs.dom(), rhs.dom()) + order_note(lhs.cod(), rhs.cod());
    return rep;
  }
  const std::size_t ns = lhs.dom().src().size();
  for (std::size_t i = 0; i < lhs.components().size(); ++i) {
    const Rel& x = lhs.components()[i];
    const Rel& y = rhs.components()[i];
    if (x == y) continue;
    for (std::size_t a = 0; a < x.src().size(); ++a) {
      for (std::size_t b = 0; b < x.dst().size(); ++b) {
        if (x.test(a, b) == y.test(a, b)) continue;
        Difference d;
        d.t = i / ns;
        d.s = i % ns;
        d.from = a;
        d.to = b;
        d.from_label = x.src().label(a);
        d.to_label = x.dst().label(b);
        d.in_lhs = x.test(a, b);
        std::ostringstream os;
        os << "component (" << d.t << "," << d.s << "): " << d.from_label << " -> " << d.to_label
           << " related on the " << (d.in_lhs ? "left" : "right") << " side only";
        rep.message = os.str();
        rep.difference = d;
        return rep;
      }
    }
  }
  rep.equal = true;
  return rep;
}

}  // namespace relcat
