#include <doctest.h>

#include <random>

#include "relcat/error.hpp"
#include "relcat/structures.hpp"
#include "support.hpp"

using namespace relcat;
using namespace relcat::testing;

namespace {

// Zig-zag laws on raw bit masks: cup bit x*n+y means () -> (x, y), cap bit
// x*n+y means (x, y) -> (). Each composite is read off by following wires.
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

// Cups admitting some cap, by brute force over both.
std::vector<std::uint32_t> naive_cups(std::size_t n) {
  std::vector<std::uint32_t> out;
  const std::uint32_t masks = 1u << (n * n);
  for (std::uint32_t cup = 0; cup < masks; ++cup) {
    for (std::uint32_t cap = 0; cap < masks; ++cap) {
      if (naive_snakes(n, cup, cap)) {
        out.push_back(cup);
        break;
      }
    }
  }
  return out;
}

bool is_permutation_mask(std::size_t n, std::uint32_t cup) {
  std::vector<int> row(n), col(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if ((cup >> (x * n + y)) & 1u) {
        ++row[x];
        ++col[y];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row[i] != 1 || col[i] != 1) return false;
  }
  return true;
}

std::uint32_t mask_of(const Permutation& p) {
  std::uint32_t m = 0;
  for (std::size_t x = 0; x < p.size(); ++x) m |= 1u << (x * p.size() + p(x));
  return m;
}

}  // namespace

TEST_CASE("the canonical cup and every permutation cup satisfy the snakes") {
  for (std::size_t n = 0; n <= 4; ++n) {
    CHECK(snake_check(canonical_cup(FiniteSet(n))));
    for (const auto& p : all_permutations(FiniteSet(n))) {
      const DualityPair d = cup_from_permutation(p);
      CHECK(snake_check(d));
      CHECK(naive_snakes(n, mask_of(p), mask_of(p.inverse())));
    }
  }
}

TEST_CASE("a non-involution needs the inverse graph as its cap") {
  const Permutation cyc(FiniteSet(3), {1, 2, 0});
  const DualityPair d = cup_from_permutation(cyc);
  CHECK(snake_check(d));
  const DualityPair bad{d.carrier, d.cup, converse(d.cup)};
  CHECK_FALSE(snake_check(bad));
}

TEST_CASE("classify_cups finds n! permutation cups, as brute force does") {
  std::size_t fact = 1;
  for (std::size_t n = 1; n <= 4; ++n) {
    fact *= n;
    const auto cups = classify_cups(FiniteSet(n));
    CHECK(cups.size() == fact);
    CHECK(std::is_sorted(cups.begin(), cups.end()));
    if (n <= 3) {
      const auto oracle = naive_cups(n);
      CHECK(oracle.size() == fact);
      std::vector<std::uint32_t> got;
      for (const auto& p : cups) got.push_back(mask_of(p));
      std::sort(got.begin(), got.end());
      CHECK(got == oracle);
      for (auto m : oracle) CHECK(is_permutation_mask(n, m));
    }
  }
  CHECK_THROWS_AS(classify_cups(FiniteSet(5)), PreconditionError);
}

TEST_CASE("duality_from_cup accepts exactly permutation graphs") {
  const FiniteSet k(2);
  const FiniteSet kk = FiniteSet::product(k, k);
  CHECK(snake_check(duality_from_cup(k, Rel::make(FiniteSet::unit(), kk, {{0, 1}, {0, 2}}))));
  CHECK_THROWS_AS(duality_from_cup(k, Rel::make(FiniteSet::unit(), kk, {{0, 0}, {0, 1}})), ConstructionError);
  CHECK_THROWS_AS(duality_from_cup(k, Rel::make(FiniteSet::unit(), kk, {{0, 0}})), ConstructionError);
  CHECK_THROWS_AS(duality_from_cup(k, Rel(FiniteSet::unit(), FiniteSet(3))), ConstructionError);
}

TEST_CASE("deletion is the only relation to 1 with empty kernel or satisfying the counit laws") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const FiniteSet s(n);
    const Rel dup = duplicate(s);
    const Rel i = Rel::identity(s);
    int empty_kernel = 0, counit = 0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      Rel d(s, FiniteSet::unit());
      for (std::size_t a = 0; a < n; ++a) {
        if ((m >> a) & 1u) d.set(a, 0);
      }
      if (kernel(d).carrier.size() == 0) {
        ++empty_kernel;
        CHECK(d == deletion(s));
      }
      if (compose(dup, product(i, d)) == i && compose(dup, product(d, i)) == i) {
        ++counit;
        CHECK(d == deletion(s));
      }
    }
    CHECK(empty_kernel == 1);
    CHECK(counit == 1);
  }
}

TEST_CASE("twisting and deleting one leg of a key leaves a random key") {
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(twist_delete_check(FiniteSet(n)));
    CHECK(twist_create_check(FiniteSet(n)));
  }
}

TEST_CASE("duplicate and swap") {
  const FiniteSet x(3), y(2);
  CHECK(compose(swap_rel(x, y), swap_rel(y, x)) == Rel::identity(FiniteSet::product(x, y)));
  CHECK(compose(duplicate(x), swap_rel(x, x)) == duplicate(x));
  CHECK(duplicate(x).count() == 3);
  const OneCell a = OneCell::scalar(x), b = OneCell::scalar(y);
  CHECK(same(vcompose(swap(a, b), swap(b, a)), TwoCell::identity(hcompose(a, b))));
  CHECK_THROWS_AS(swap(OneCell::identity(FiniteSet(2)), a), PreconditionError);
  CHECK(dup(a).cod() == hcompose(a, a));
}

TEST_CASE("region edges and wires") {
  const FiniteSet s(3), x(2);
  const OneCell L = left_edge(s), R = right_edge(s);
  CHECK(L.src().size() == 3);
  CHECK(L.dst().size() == 1);
  CHECK(R.src().size() == 1);
  CHECK(R.dst().size() == 3);
  CHECK(region(s) == hcompose(L, R));
  CHECK(region(s).fiber_size(0, 0) == 3);
  CHECK(pub(s) == OneCell::identity(s));
  const OneCell X = OneCell::scalar(x);
  // A private wire slides through the right edge but is inside the region.
  CHECK(hcompose(private_wire(s, x), R) == hcompose(R, X));
  CHECK(hcompose(hcompose(L, R), X) == hcompose(L, hcompose(private_wire(s, x), R)));
  CHECK_FALSE(hcompose(L, private_wire(s, x)) == hcompose(X, L));
}

TEST_CASE("Frobenius axioms hold for regions of size 1 to 4") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto results = frobenius_check(region_structure(FiniteSet(n)));
    CHECK(results.size() >= 16);
    for (const auto& r : results) {
      INFO(n, " ", r.name, " ", r.detail);
      CHECK(r.holds);
    }
  }
}

TEST_CASE("the closed form is the diagonal structure") {
  const FiniteSet s(3);
  const ClosedFrobenius f = closed_form(region_structure(s));
  CHECK(f.copy == duplicate(s));
  CHECK(f.compare == converse(duplicate(s)));
  CHECK(f.del == deletion(s));
  CHECK(f.create == creation(s));
}

TEST_CASE("copy precomposed with a non-identity bijection breaks the axioms") {
  const FiniteSet s(3);
  ClosedFrobenius f = closed_form(region_structure(s));
  const std::vector<std::size_t> cyc{1, 2, 0};
  f.copy = compose(Rel::graph(s, s, cyc), f.copy);
  const auto results = frobenius_check(f);
  CHECK_FALSE(all_hold(results));
  bool located = false;
  for (const auto& r : results) located = located || (!r.holds && !r.detail.empty());
  CHECK(located);
}

TEST_CASE("publish and sample are inverse on the region fiber") {
  const RegionStructure rs = region_structure(FiniteSet(3));
  CHECK(same(vcompose(rs.publish, rs.sample), TwoCell::identity(rs.publish.dom())));
  CHECK(same(vcompose(rs.sample, rs.publish), TwoCell::identity(rs.sample.dom())));
  CHECK(same(vcompose(rs.create_region, rs.delete_region), TwoCell::identity(rs.create_region.dom())));
}

TEST_CASE("controlled computation cannot modify public data") {
  std::mt19937 rng(31);
  for (int i = 0; i < 200; ++i) {
    const FiniteSet s(1 + rng() % 3), x(rng() % 3), y(rng() % 3);
    ControlledOp op{s, x, y, {}};
    for (std::size_t k = 0; k < s.size(); ++k) op.family.push_back(random_rel(rng, x, y));
    CHECK(controlled_lemma_holds(op));
    const TwoCell c = controlled(op);
    CHECK(c.dom() == private_wire(s, x));
    CHECK(c.cod() == private_wire(s, y));
  }
  ControlledOp bad{FiniteSet(2), FiniteSet(2), FiniteSet(2), {Rel::identity(FiniteSet(2))}};
  CHECK_THROWS_AS(controlled(bad), PreconditionError);
  bad.family.push_back(Rel(FiniteSet(3), FiniteSet(2)));
  CHECK_THROWS_AS(controlled(bad), PreconditionError);
}
