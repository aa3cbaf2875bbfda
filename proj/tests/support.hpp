#pragma once

#include <random>

#include "relcat/cells.hpp"

namespace relcat::testing {

inline Rel random_rel(std::mt19937& rng, const FiniteSet& src, const FiniteSet& dst, double density = 0.35) {
  std::bernoulli_distribution bit(density);
  Rel r(src, dst);
  for (std::size_t a = 0; a < src.size(); ++a) {
    for (std::size_t b = 0; b < dst.size(); ++b) {
      if (bit(rng)) r.set(a, b);
    }
  }
  return r;
}

/// Primitive 1-cell with fiber sizes drawn from 0..max_fiber.
inline OneCell random_onecell(std::mt19937& rng, std::size_t src, std::size_t dst, std::size_t max_fiber) {
  std::vector<FiniteSet> fibers;
  for (std::size_t i = 0; i < src * dst; ++i) fibers.emplace_back(rng() % (max_fiber + 1));
  return OneCell(FiniteSet(src), FiniteSet(dst), std::move(fibers));
}

inline TwoCell random_twocell(std::mt19937& rng, const OneCell& dom, const OneCell& cod, double density = 0.35) {
  std::vector<Rel> comps;
  for (std::size_t i = 0; i < dom.fibers().size(); ++i) {
    comps.push_back(random_rel(rng, dom.fibers()[i], cod.fibers()[i], density));
  }
  return TwoCell(dom, cod, std::move(comps));
}

/// 1-cell with the same shape and fiber sizes as `a`, primitive ranks.
inline OneCell same_shape(const OneCell& a) { return OneCell(a.src(), a.dst(), a.fibers()); }

inline bool same(const TwoCell& a, const TwoCell& b) { return equal(a, b).equal; }

}  // namespace relcat::testing
