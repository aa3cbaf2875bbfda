#include <doctest.h>

#include <functional>
#include <random>

#include "relcat/structures.hpp"
#include "support.hpp"

using namespace relcat;
using namespace relcat::testing;

// Composition, converse and both compositions of 2-cells preserve unions in
// each argument, so a law between such composites holds for all arguments
// once it holds for every tuple of atoms (single pairs) and empty cells. The
// union-preservation itself is checked below; that makes the atom sweeps
// exhaustive.

namespace {

constexpr int kSamples = 1000;

void for_each_rel(std::size_t a, std::size_t b, const std::function<void(const Rel&)>& f) {
  const std::size_t bits = a * b;
  for (std::uint32_t m = 0; m < (1u << bits); ++m) {
    Rel r{FiniteSet(a), FiniteSet(b)};
    for (std::size_t i = 0; i < bits; ++i) {
      if ((m >> i) & 1u) r.set(i / b, i % b);
    }
    f(r);
  }
}

std::vector<Rel> atoms(std::size_t a, std::size_t b) {
  std::vector<Rel> out{Rel(FiniteSet(a), FiniteSet(b))};
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) out.push_back(Rel::make(FiniteSet(a), FiniteSet(b), {{i, j}}));
  }
  return out;
}

std::vector<TwoCell> atoms(const OneCell& dom, const OneCell& cod) {
  std::vector<TwoCell> out{TwoCell::empty(dom, cod)};
  for (std::size_t f = 0; f < dom.fibers().size(); ++f) {
    for (std::size_t i = 0; i < dom.fibers()[f].size(); ++i) {
      for (std::size_t j = 0; j < cod.fibers()[f].size(); ++j) {
        std::vector<Rel> comps;
        for (std::size_t g = 0; g < dom.fibers().size(); ++g) comps.emplace_back(dom.fibers()[g], cod.fibers()[g]);
        comps[f].set(i, j);
        out.emplace_back(dom, cod, std::move(comps));
      }
    }
  }
  return out;
}

OneCell uniform(std::size_t src, std::size_t dst, std::size_t fiber) {
  return OneCell(FiniteSet(src), FiniteSet(dst), std::vector<FiniteSet>(src * dst, FiniteSet(fiber)));
}

/// Every 2-cell X => X, for cells with at most `max_bits` component bits.
void for_each_endo(const OneCell& x, const std::function<void(const TwoCell&)>& f) {
  std::size_t bits = 0;
  for (const auto& fib : x.fibers()) bits += fib.size() * fib.size();
  REQUIRE(bits <= 12);
  for (std::uint32_t m = 0; m < (1u << bits); ++m) {
    std::vector<Rel> comps;
    std::size_t k = 0;
    for (const auto& fib : x.fibers()) {
      Rel r(fib, fib);
      for (std::size_t i = 0; i < fib.size(); ++i) {
        for (std::size_t j = 0; j < fib.size(); ++j, ++k) {
          if ((m >> k) & 1u) r.set(i, j);
        }
      }
      comps.push_back(std::move(r));
    }
    f(TwoCell(x, x, std::move(comps)));
  }
}

TwoCell unite(const TwoCell& a, const TwoCell& b) {
  std::vector<Rel> comps;
  for (std::size_t i = 0; i < a.components().size(); ++i) comps.push_back(relcat::unite(a.components()[i], b.components()[i]));
  return TwoCell(a.dom(), a.cod(), std::move(comps));
}

TwoCell identity_of(const OneCell& x) { return TwoCell::identity(x); }

// A permutation graph with, half the time, one bit flipped.
Rel near_permutation(std::mt19937& rng, std::size_t n, std::vector<std::size_t>* perm = nullptr) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  if (perm != nullptr) *perm = p;
  Rel r = Rel::graph(FiniteSet(n), FiniteSet(n), p);
  if (rng() % 2) {
    const std::size_t a = rng() % n, b = rng() % n;
    r.set(a, b, !r.test(a, b));
  }
  return r;
}

bool lemma_one(const Rel& sigma, const Rel& tau) {
  const Rel id = Rel::identity(sigma.src());
  return !(compose(sigma, tau) == id) || compose(tau, sigma) == id;
}

bool lemma_one(const TwoCell& sigma, const TwoCell& tau) {
  const TwoCell id = identity_of(sigma.dom());
  return !same(vcompose(sigma, tau), id) || same(vcompose(tau, sigma), id);
}

// Zig-zag laws on raw masks, read off by following wires.
bool naive_snakes(std::size_t n, std::uint32_t cup, std::uint32_t cap) {
  auto c = [&](std::size_t x, std::size_t y) { return (cup >> (x * n + y)) & 1u; };
  auto k = [&](std::size_t x, std::size_t y) { return (cap >> (x * n + y)) & 1u; };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      bool z1 = false, z2 = false;
      for (std::size_t x = 0; x < n; ++x) {
        z1 = z1 || (c(x, b) && k(a, x));
        z2 = z2 || (c(b, x) && k(x, a));
      }
      if (z1 != (a == b) || z2 != (a == b)) return false;
    }
  }
  return true;
}

DualityPair pair_of(std::size_t n, std::uint32_t cup, std::uint32_t cap) {
  const FiniteSet s(n), ss = FiniteSet::product(s, s);
  Rel u(FiniteSet::unit(), ss), v(ss, FiniteSet::unit());
  for (std::size_t i = 0; i < n * n; ++i) {
    if ((cup >> i) & 1u) u.set(0, i);
    if ((cap >> i) & 1u) v.set(i, 0);
  }
  return {s, u, v};
}

std::uint32_t random_mask(std::mt19937& rng, std::size_t bits) {
  return static_cast<std::uint32_t>(rng()) & ((1u << bits) - 1);
}

}  // namespace

// ---- relations -------------------------------------------------------------

TEST_CASE("relational composition preserves unions in each argument") {
  std::mt19937 rng(1);
  for (int i = 0; i < kSamples; ++i) {
    const std::size_t a = 1 + rng() % 4, b = 1 + rng() % 4, c = 1 + rng() % 4;
    const Rel r = random_rel(rng, FiniteSet(a), FiniteSet(b)), r2 = random_rel(rng, FiniteSet(a), FiniteSet(b));
    const Rel s = random_rel(rng, FiniteSet(b), FiniteSet(c)), s2 = random_rel(rng, FiniteSet(b), FiniteSet(c));
    CHECK(compose(unite(r, r2), s) == unite(compose(r, s), compose(r2, s)));
    CHECK(compose(r, unite(s, s2)) == unite(compose(r, s), compose(r, s2)));
    CHECK(converse(unite(r, r2)) == unite(converse(r), converse(r2)));
  }
}

TEST_CASE("relational composition is associative") {
  // Every triple at sizes up to 2; every first factor against atoms at 3.
  for (std::size_t a = 1; a <= 2; ++a) {
    for (std::size_t b = 1; b <= 2; ++b) {
      for (std::size_t c = 1; c <= 2; ++c) {
        for (std::size_t d = 1; d <= 2; ++d) {
          for_each_rel(a, b, [&](const Rel& r) {
            for_each_rel(b, c, [&](const Rel& s) {
              for_each_rel(c, d, [&](const Rel& t) {
                REQUIRE(compose(compose(r, s), t) == compose(r, compose(s, t)));
              });
            });
          });
        }
      }
    }
  }
  for_each_rel(3, 3, [&](const Rel& r) {
    for (const Rel& s : atoms(3, 3)) {
      for (const Rel& t : atoms(3, 3)) REQUIRE(compose(compose(r, s), t) == compose(r, compose(s, t)));
    }
  });
  std::mt19937 rng(2);
  for (int i = 0; i < kSamples; ++i) {
    const FiniteSet four(4);
    const Rel r = random_rel(rng, four, four), s = random_rel(rng, four, four), t = random_rel(rng, four, four);
    CHECK(compose(compose(r, s), t) == compose(r, compose(s, t)));
  }
}

TEST_CASE("converse is an involution reversing composition") {
  for (std::size_t a = 1; a <= 3; ++a) {
    for (std::size_t b = 1; b <= 3; ++b) {
      for_each_rel(a, b, [&](const Rel& r) {
        REQUIRE(converse(converse(r)) == r);
        for (const Rel& s : atoms(b, 3)) REQUIRE(converse(compose(r, s)) == compose(converse(s), converse(r)));
      });
    }
  }
  std::mt19937 rng(3);
  for (int i = 0; i < kSamples; ++i) {
    const FiniteSet four(4);
    const Rel r = random_rel(rng, four, four), s = random_rel(rng, four, four);
    CHECK(converse(compose(r, s)) == compose(converse(s), converse(r)));
  }
}

TEST_CASE("the kernel is universal among relations annihilating r") {
  auto check = [](const Rel& sigma, const Rel& r) {
    const KernelResult k = kernel(r);
    const auto tilde = factor_through_kernel(sigma, r, k);
    const bool annihilates = compose(sigma, r).empty();
    REQUIRE(tilde.has_value() == annihilates);
    REQUIRE(compose(k.inclusion, r).empty());
    if (!tilde) return;
    REQUIRE(compose(*tilde, k.inclusion) == sigma);
    // Uniqueness: no other relation into the kernel gives sigma.
    if (sigma.src().size() * k.carrier.size() <= 9) {
      int hits = 0;
      for_each_rel(sigma.src().size(), k.carrier.size(), [&](const Rel& other) {
        if (compose(other.relabel(sigma.src(), k.carrier), k.inclusion) == sigma) ++hits;
      });
      REQUIRE(hits == 1);
    }
  };
  for (std::size_t x = 1; x <= 2; ++x) {
    for (std::size_t a = 1; a <= 3; ++a) {
      for (std::size_t b = 1; b <= 3; ++b) {
        for_each_rel(a, b, [&](const Rel& r) { for_each_rel(x, a, [&](const Rel& sigma) { check(sigma, r); }); });
      }
    }
  }
  std::mt19937 rng(4);
  for (int i = 0; i < kSamples; ++i) {
    const FiniteSet four(4);
    const Rel r = random_rel(rng, four, four, 0.2);
    // Half the draws are confined to the kernel so that both branches occur.
    Rel sigma = random_rel(rng, four, four, 0.3);
    if (i % 2) sigma = compose(sigma, compose(converse(kernel(r).inclusion), kernel(r).inclusion));
    check(sigma, r);
  }
}

TEST_CASE("a left inverse of an endomorphism is a right inverse") {
  std::size_t hypotheses = 0;
  for (std::size_t n = 0; n <= 3; ++n) {
    for_each_rel(n, n, [&](const Rel& sigma) {
      for_each_rel(n, n, [&](const Rel& tau) {
        if (compose(sigma, tau) == Rel::identity(sigma.src())) ++hypotheses;
        REQUIRE(lemma_one(sigma, tau));
      });
    });
  }
  // The inverse pairs are exactly the n! permutations for each n.
  CHECK(hypotheses == 1 + 1 + 2 + 6);
  std::mt19937 rng(5);
  std::size_t sampled = 0;
  for (int i = 0; i < kSamples; ++i) {
    std::vector<std::size_t> p;
    const Rel sigma = near_permutation(rng, 4, &p);
    Rel tau = converse(Rel::graph(FiniteSet(4), FiniteSet(4), p));
    if (rng() % 2) {
      const std::size_t a = rng() % 4, b = rng() % 4;
      tau.set(a, b, !tau.test(a, b));
    }
    sampled += compose(sigma, tau) == Rel::identity(FiniteSet(4));
    CHECK(lemma_one(sigma, tau));
  }
  CHECK(sampled > 100);
}

TEST_CASE("between different sets a one-sided inverse need not be two-sided") {
  const Rel sigma = Rel::make(FiniteSet(1), FiniteSet(2), {{0, 0}});
  const Rel tau = converse(sigma);
  CHECK(compose(sigma, tau) == Rel::identity(FiniteSet(1)));
  CHECK_FALSE(compose(tau, sigma) == Rel::identity(FiniteSet(2)));
}

TEST_CASE("a left inverse of an endomorphism 2-cell is a right inverse") {
  const std::vector<OneCell> shapes = {
      uniform(1, 1, 0), uniform(1, 1, 1), uniform(1, 1, 2), uniform(1, 1, 3),
      uniform(2, 1, 1), uniform(1, 2, 2), uniform(2, 2, 1),
      OneCell(FiniteSet(1), FiniteSet(2), {FiniteSet(1), FiniteSet(3)}),
      OneCell(FiniteSet(2), FiniteSet(1), {FiniteSet(0), FiniteSet(3)}),
      OneCell(FiniteSet(2), FiniteSet(2), {FiniteSet(1), FiniteSet(2), FiniteSet(0), FiniteSet(2)}),
  };
  for (const OneCell& x : shapes) {
    INFO(x.describe());
    std::vector<TwoCell> all;
    for_each_endo(x, [&](const TwoCell& c) { all.push_back(c); });
    std::size_t hypotheses = 0;
    for (const TwoCell& sigma : all) {
      for (const TwoCell& tau : all) {
        hypotheses += same(vcompose(sigma, tau), identity_of(x));
        REQUIRE(lemma_one(sigma, tau));
      }
    }
    // One permutation per fiber.
    std::size_t expect = 1;
    for (const auto& f : x.fibers()) {
      for (std::size_t k = 2; k <= f.size(); ++k) expect *= k;
    }
    CHECK(hypotheses == expect);
  }
  std::mt19937 rng(6);
  std::size_t sampled = 0;
  for (int i = 0; i < kSamples; ++i) {
    const OneCell x = uniform(1 + rng() % 2, 1 + rng() % 2, 4);
    std::vector<Rel> s, t;
    for (std::size_t f = 0; f < x.fibers().size(); ++f) {
      std::vector<std::size_t> p;
      s.push_back(near_permutation(rng, 4, &p));
      t.push_back(converse(Rel::graph(FiniteSet(4), FiniteSet(4), p)));
    }
    const TwoCell sigma(x, x, s), tau(x, x, t);
    sampled += same(vcompose(sigma, tau), identity_of(x));
    CHECK(lemma_one(sigma, tau));
  }
  CHECK(sampled > 50);
}

// ---- 2-cells ---------------------------------------------------------------

TEST_CASE("2-cell composition preserves unions in each argument") {
  std::mt19937 rng(7);
  for (int i = 0; i < kSamples; ++i) {
    const OneCell x = random_onecell(rng, 1 + rng() % 2, 1 + rng() % 2, 3);
    const OneCell y = same_shape(x);
    const OneCell z = random_onecell(rng, 1 + rng() % 2, x.src().size(), 3);
    const TwoCell a = random_twocell(rng, x, y), a2 = random_twocell(rng, x, y);
    const TwoCell b = random_twocell(rng, y, x);
    const TwoCell c = random_twocell(rng, z, z);
    CHECK(same(vcompose(unite(a, a2), b), unite(vcompose(a, b), vcompose(a2, b))));
    CHECK(same(hcompose(unite(a, a2), c), unite(hcompose(a, c), hcompose(a2, c))));
    CHECK(same(converse(unite(a, a2)), unite(converse(a), converse(a2))));
  }
}

TEST_CASE("vertical and horizontal composition of 2-cells are associative") {
  // Scalars with fibers up to 3, and cells over 0-cells of size 2 with fibers
  // up to 2; every atom triple.
  for (std::size_t f = 1; f <= 3; ++f) {
    const OneCell x = uniform(1, 1, f);
    const auto as = atoms(x, x);
    for (const auto& a : as) {
      for (const auto& b : as) {
        for (const auto& c : as) {
          REQUIRE(same(vcompose(vcompose(a, b), c), vcompose(a, vcompose(b, c))));
          REQUIRE(same(hcompose(hcompose(a, b), c), hcompose(a, hcompose(b, c))));
        }
      }
    }
  }
  for (std::size_t f = 1; f <= 2; ++f) {
    const OneCell x = uniform(2, 2, f), y = uniform(2, 1, f), z = uniform(1, 2, f);
    const auto xs = atoms(x, x), ys = atoms(y, y), zs = atoms(z, z);
    for (const auto& a : zs) {
      for (const auto& b : ys) {
        for (const auto& c : xs) REQUIRE(same(hcompose(hcompose(a, b), c), hcompose(a, hcompose(b, c))));
      }
    }
    for (const auto& a : xs) {
      for (const auto& b : xs) {
        for (const auto& c : xs) REQUIRE(same(vcompose(vcompose(a, b), c), vcompose(a, vcompose(b, c))));
      }
    }
  }
  std::mt19937 rng(8);
  for (int i = 0; i < kSamples; ++i) {
    const OneCell x = random_onecell(rng, 2, 2, 4), y = random_onecell(rng, 2, 2, 4), z = random_onecell(rng, 2, 2, 4);
    const TwoCell a = random_twocell(rng, x, same_shape(x)), b = random_twocell(rng, y, same_shape(y)),
                  c = random_twocell(rng, z, same_shape(z));
    CHECK(same(hcompose(hcompose(a, b), c), hcompose(a, hcompose(b, c))));
    const TwoCell d = random_twocell(rng, x, x), e = random_twocell(rng, x, x);
    CHECK(same(vcompose(vcompose(a, d.retyped(same_shape(x), same_shape(x))), e.retyped(same_shape(x), same_shape(x))),
               vcompose(a, vcompose(d.retyped(same_shape(x), same_shape(x)), e.retyped(same_shape(x), same_shape(x))))));
  }
}

TEST_CASE("the interchange law") {
  auto interchange = [](const TwoCell& a, const TwoCell& c, const TwoCell& b, const TwoCell& d) {
    // a ; c on the left, b ; d on the right.
    return same(vcompose(hcompose(a, b), hcompose(c, d)), hcompose(vcompose(a, c), vcompose(b, d)));
  };
  for (std::size_t f = 1; f <= 3; ++f) {
    for (std::size_t g = 1; g <= 3; ++g) {
      const OneCell x = uniform(1, 1, f), y = uniform(1, 1, g);
      const auto xs = atoms(x, x), ys = atoms(y, y);
      for (const auto& a : xs) {
        for (const auto& c : xs) {
          for (const auto& b : ys) {
            for (const auto& d : ys) REQUIRE(interchange(a, c, b, d));
          }
        }
      }
    }
  }
  {
    const OneCell x = uniform(2, 2, 1), y = OneCell(FiniteSet(1), FiniteSet(2), {FiniteSet(2), FiniteSet(1)});
    const auto xs = atoms(x, x), ys = atoms(y, y);
    for (const auto& a : xs) {
      for (const auto& c : xs) {
        for (const auto& b : ys) {
          for (const auto& d : ys) REQUIRE(interchange(a, c, b, d));
        }
      }
    }
  }
  std::mt19937 rng(9);
  for (int i = 0; i < kSamples; ++i) {
    const OneCell x = random_onecell(rng, 2, 2, 4), y = random_onecell(rng, 1 + rng() % 2, 2, 4);
    const OneCell x2 = same_shape(x), y2 = same_shape(y);
    CHECK(interchange(random_twocell(rng, x, x2), random_twocell(rng, x2, x), random_twocell(rng, y, y2),
                      random_twocell(rng, y2, y)));
  }
}

TEST_CASE("2-cell converse reverses vertical and preserves horizontal composition") {
  for (std::size_t f = 1; f <= 3; ++f) {
    for (std::size_t g = 1; g <= 3; ++g) {
      const OneCell x = uniform(1, 1, f), y = uniform(1, 1, g);
      for (const auto& a : atoms(x, y)) {
        REQUIRE(same(converse(converse(a)), a));
        for (const auto& b : atoms(y, x)) REQUIRE(same(converse(vcompose(a, b)), vcompose(converse(b), converse(a))));
        for (const auto& b : atoms(y, y)) REQUIRE(same(converse(hcompose(a, b)), hcompose(converse(a), converse(b))));
      }
    }
  }
  std::mt19937 rng(10);
  for (int i = 0; i < kSamples; ++i) {
    const OneCell x = random_onecell(rng, 2, 2, 4), y = random_onecell(rng, 2, 2, 4);
    const TwoCell a = random_twocell(rng, x, same_shape(x)), b = random_twocell(rng, same_shape(x), x);
    const TwoCell c = random_twocell(rng, y, same_shape(y));
    CHECK(same(converse(vcompose(a, b)), vcompose(converse(b), converse(a))));
    CHECK(same(converse(hcompose(a, c)), hcompose(converse(a), converse(c))));
  }
}

// ---- structures ------------------------------------------------------------

TEST_CASE("snake_check agrees with following wires on every cup and cap") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::uint32_t masks = 1u << (n * n);
    std::size_t valid = 0;
    for (std::uint32_t cup = 0; cup < masks; ++cup) {
      for (std::uint32_t cap = 0; cap < masks; ++cap) {
        const bool want = naive_snakes(n, cup, cap);
        valid += want;
        REQUIRE(snake_check(pair_of(n, cup, cap)) == want);
      }
    }
    CHECK(valid == (n == 1 ? 1u : n == 2 ? 2u : 6u));
  }
  std::mt19937 rng(11);
  std::size_t valid = 0;
  for (int i = 0; i < kSamples; ++i) {
    std::uint32_t cup, cap;
    if (i % 2) {
      cup = random_mask(rng, 16);
      cap = random_mask(rng, 16);
    } else {
      std::vector<std::size_t> p;
      near_permutation(rng, 4, &p);
      cup = cap = 0;
      for (std::size_t x = 0; x < 4; ++x) {
        cup |= 1u << (x * 4 + p[x]);
        cap |= 1u << (p[x] * 4 + x);
      }
      if (rng() % 2) cap ^= 1u << (rng() % 16);
    }
    const bool want = naive_snakes(4, cup, cap);
    valid += want;
    CHECK(snake_check(pair_of(4, cup, cap)) == want);
  }
  CHECK(valid > 100);
}

TEST_CASE("controlled operations commute with copying their public input") {
  for (std::size_t s = 1; s <= 3; ++s) {
    for (std::size_t x = 0; x <= 3; ++x) {
      for (std::size_t y = 0; y <= 3; ++y) {
        const std::size_t bits = s * x * y;
        if (bits > 9) continue;
        for (std::uint32_t m = 0; m < (1u << bits); ++m) {
          ControlledOp op{FiniteSet(s), FiniteSet(x), FiniteSet(y), {}};
          std::size_t k = 0;
          for (std::size_t c = 0; c < s; ++c) {
            Rel r{FiniteSet(x), FiniteSet(y)};
            for (std::size_t i = 0; i < x * y; ++i, ++k) {
              if ((m >> k) & 1u) r.set(i / y, i % y);
            }
            op.family.push_back(std::move(r));
          }
          REQUIRE(controlled_lemma_holds(op));
        }
      }
    }
  }
  std::mt19937 rng(12);
  for (int i = 0; i < kSamples; ++i) {
    const FiniteSet s(4), x(1 + rng() % 4), y(1 + rng() % 4);
    ControlledOp op{s, x, y, {}};
    for (std::size_t c = 0; c < 4; ++c) op.family.push_back(random_rel(rng, x, y));
    CHECK(controlled_lemma_holds(op));
  }
}
