#include "relcat/structures.hpp"

#include <algorithm>
#include <set>

#include "relcat/error.hpp"

namespace relcat {

namespace {

Rel single(std::size_t n, std::size_t m, std::size_t a, std::size_t b) {
  return Rel::make(FiniteSet(n), FiniteSet(m), {{a, b}});
}

// Rel of shape 1 -> n*n (or n*n -> 1) from a bitmask over n*n pairs.
Rel from_mask(std::size_t n, std::uint32_t mask, bool is_cup) {
  Rel r = is_cup ? Rel(FiniteSet::unit(), FiniteSet(n * n)) : Rel(FiniteSet(n * n), FiniteSet::unit());
  for (std::size_t i = 0; i < n * n; ++i) {
    if ((mask >> i) & 1u) {
      if (is_cup) {
        r.set(0, i);
      } else {
        r.set(i, 0);
      }
    }
  }
  return r;
}

std::optional<Permutation> as_permutation(const Rel& cup, std::size_t n) {
  std::vector<std::size_t> map(n, n);
  for (auto [zero, pair] : cup.pairs()) {
    const std::size_t x = pair / n;
    const std::size_t y = pair % n;
    if (map[x] != n) return std::nullopt;
    map[x] = y;
  }
  try {
    return Permutation(FiniteSet(n), map);
  } catch (const ConstructionError&) {
    return std::nullopt;
  }
}

AxiomResult check(std::string name, const TwoCell& lhs, const TwoCell& rhs) {
  const EqualityReport rep = equal(lhs, rhs);
  return {std::move(name), rep.equal, rep.message};
}

AxiomResult check(std::string name, const Rel& lhs, const Rel& rhs) {
  return check(std::move(name), TwoCell::scalar(lhs), TwoCell::scalar(rhs));
}

TwoCell id(const OneCell& a) { return TwoCell::identity(a); }

}  // namespace

std::pair<Rel, Rel> snake_composites(const DualityPair& d) {
  const Rel id = Rel::identity(d.carrier);
  const Rel first = compose(product(id, d.cup), product(d.cap, id));
  const Rel second = compose(product(d.cup, id), product(id, d.cap));
  return {first, second};
}

bool snake_check(const DualityPair& d) {
  const Rel id = Rel::identity(d.carrier);
  const auto [first, second] = snake_composites(d);
  return first == id && second == id;
}

DualityPair canonical_cup(const FiniteSet& s) { return cup_from_permutation(Permutation::identity(s)); }

DualityPair cup_from_permutation(const Permutation& pi) {
  const FiniteSet& s = pi.carrier();
  const FiniteSet ss = FiniteSet::product(s, s);
  Rel cup(FiniteSet::unit(), ss);
  Rel cap(ss, FiniteSet::unit());
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    cup.set(0, x * n + pi(x));
    cap.set(pi(x) * n + x, 0);
  }
  DualityPair d{s, std::move(cup), std::move(cap)};
  if (!snake_check(d)) throw std::logic_error("cup_from_permutation: zig-zag check failed");
  return d;
}

DualityPair duality_from_cup(const FiniteSet& s, const Rel& cup) {
  const std::size_t n = s.size();
  if (cup.src().size() != 1 || cup.dst().size() != n * n) {
    throw ConstructionError("cup must be a relation 1 -> S x S with |S| = " + std::to_string(n));
  }
  std::vector<std::size_t> map(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (!cup.test(0, x * n + y)) continue;
      if (map[x] != n) throw ConstructionError("key generation is not the graph of a permutation");
      map[x] = y;
    }
  }
  if (std::find(map.begin(), map.end(), n) != map.end()) {
    throw ConstructionError("key generation is not the graph of a permutation");
  }
  return cup_from_permutation(Permutation(s, std::move(map)));
}

std::vector<Permutation> classify_cups(const FiniteSet& s) {
  const std::size_t n = s.size();
  if (n > kClassifyCap) {
    throw PreconditionError("classify_cups: size " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(kClassifyCap));
  }
  const std::uint32_t masks = std::uint32_t{1} << (n * n);
  std::set<std::uint32_t> valid_cups;

  if (n <= 3) {
    // Plain brute force over every (cup, cap) pair.
    for (std::uint32_t cm = 0; cm < masks; ++cm) {
      const Rel cup = from_mask(n, cm, true);
      for (std::uint32_t km = 0; km < masks; ++km) {
        DualityPair d{s, cup, from_mask(n, km, false)};
        if (snake_check(d)) {
          valid_cups.insert(cm);
          break;
        }
      }
    }
  } else {
    // The first zig-zag at s only reads cap row s, the second only cap
    // column s; enumerate rows passing the first, then test the second.
    for (std::uint32_t cm = 0; cm < masks; ++cm) {
      std::vector<std::vector<std::uint32_t>> rows(n);
      bool feasible = true;
      for (std::size_t a = 0; a < n && feasible; ++a) {
        for (std::uint32_t row = 0; row < (1u << n); ++row) {
          // first zig-zag from a: outputs y with cup(x,y) and cap(a,x)
          std::uint32_t out = 0;
          for (std::size_t x = 0; x < n; ++x) {
            if (!((row >> x) & 1u)) continue;
            for (std::size_t y = 0; y < n; ++y) {
              if ((cm >> (x * n + y)) & 1u) out |= 1u << y;
            }
          }
          if (out == (1u << a)) rows[a].push_back(row);
        }
        feasible = !rows[a].empty();
      }
      if (!feasible) continue;
      std::vector<std::size_t> pick(n, 0);
      bool found = false;
      while (!found) {
        std::uint32_t km = 0;
        for (std::size_t a = 0; a < n; ++a) km |= rows[a][pick[a]] << (a * n);
        if (snake_check(DualityPair{s, from_mask(n, cm, true), from_mask(n, km, false)})) {
          found = true;
          break;
        }
        std::size_t i = 0;
        while (i < n && ++pick[i] == rows[i].size()) pick[i++] = 0;
        if (i == n) break;
      }
      if (found) valid_cups.insert(cm);
    }
  }

  std::vector<Permutation> out;
  for (auto cm : valid_cups) {
    auto p = as_permutation(from_mask(n, cm, true), n);
    if (!p) throw std::logic_error("classify_cups: a valid cup is not a permutation graph");
    out.emplace_back(s, p->map());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rel deletion(const FiniteSet& s) { return Rel::full(s, FiniteSet::unit()); }
Rel creation(const FiniteSet& s) { return Rel::full(FiniteSet::unit(), s); }

Rel duplicate(const FiniteSet& s) {
  Rel r(s, FiniteSet::product(s, s));
  for (std::size_t x = 0; x < s.size(); ++x) r.set(x, x * s.size() + x);
  return r;
}

Rel swap_rel(const FiniteSet& x, const FiniteSet& y) {
  Rel r(FiniteSet::product(x, y), FiniteSet::product(y, x));
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < y.size(); ++b) r.set(a * y.size() + b, b * x.size() + a);
  }
  return r;
}

bool twist_delete_check(const FiniteSet& s) {
  const DualityPair d = canonical_cup(s);
  const Rel id = Rel::identity(s);
  const Rel one = compose(d.cup, product(deletion(s), id));
  const Rel two = compose(d.cup, product(id, deletion(s)));
  return one == creation(s) && two == creation(s);
}

bool twist_create_check(const FiniteSet& s) {
  const DualityPair d = canonical_cup(s);
  const Rel id = Rel::identity(s);
  const Rel one = compose(product(creation(s), id), d.cap);
  const Rel two = compose(product(id, creation(s)), d.cap);
  return one == deletion(s) && two == deletion(s);
}

OneCell left_edge(const FiniteSet& s) {
  return OneCell(s, FiniteSet::unit(), std::vector<FiniteSet>(s.size(), FiniteSet::unit()));
}

OneCell right_edge(const FiniteSet& s) {
  return OneCell(FiniteSet::unit(), s, std::vector<FiniteSet>(s.size(), FiniteSet::unit()));
}

OneCell region(const FiniteSet& s) {
  const OneCell r = hcompose(left_edge(s), right_edge(s));
  return OneCell::scalar(s).renamed(r.name());
}

OneCell pub(const FiniteSet& s) { return OneCell::identity(s); }

OneCell private_wire(const FiniteSet& s, const FiniteSet& x) {
  std::vector<FiniteSet> fibers;
  fibers.reserve(s.size() * s.size());
  for (std::size_t t = 0; t < s.size(); ++t) {
    for (std::size_t u = 0; u < s.size(); ++u) fibers.push_back(t == u ? x : FiniteSet::empty());
  }
  return OneCell(s, s, std::move(fibers));
}

TwoCell swap(const OneCell& a, const OneCell& b) {
  if (!a.is_scalar() || !b.is_scalar()) {
    throw PreconditionError("swap needs scalar 1-cells, got " + a.describe() + " and " + b.describe());
  }
  const OneCell dom = hcompose(a, b);
  const OneCell cod = hcompose(b, a);
  return TwoCell(dom, cod, {swap_rel(a.fiber(0, 0), b.fiber(0, 0)).relabel(dom.fiber(0, 0), cod.fiber(0, 0))});
}

TwoCell dup(const OneCell& x) {
  if (!x.is_scalar()) throw PreconditionError("dup needs a scalar 1-cell, got " + x.describe());
  const OneCell cod = hcompose(x, x);
  return TwoCell(x, cod, {duplicate(x.fiber(0, 0)).relabel(x.fiber(0, 0), cod.fiber(0, 0))});
}

RegionStructure region_structure(const FiniteSet& s) {
  RegionStructure rs;
  rs.carrier = s;
  rs.left = left_edge(s);
  rs.right = right_edge(s);
  const OneCell idS = pub(s);
  const OneCell rl = hcompose(rs.right, rs.left);
  std::vector<Rel> comps;
  for (std::size_t t = 0; t < s.size(); ++t) {
    for (std::size_t u = 0; u < s.size(); ++u) {
      comps.push_back(t == u ? single(1, 1, 0, 0) : Rel(FiniteSet(0), FiniteSet(1)));
    }
  }
  rs.copy = TwoCell(idS, rl, std::move(comps));
  rs.compare = converse(rs.copy);
  const OneCell reg = hcompose(rs.left, rs.right);
  const OneCell unit = OneCell::identity(FiniteSet::unit());
  rs.delete_region = TwoCell(reg, unit, {deletion(reg.fiber(0, 0))});
  rs.create_region = converse(rs.delete_region);
  rs.publish = TwoCell(OneCell::scalar(s), reg, {Rel::identity(s).relabel(s, reg.fiber(0, 0))});
  rs.sample = converse(rs.publish);
  return rs;
}

ClosedFrobenius closed_form(const RegionStructure& rs) {
  const TwoCell idl = id(rs.left);
  const TwoCell idr = id(rs.right);
  const TwoCell delta = hcompose(hcompose(idl, rs.copy), idr);
  const TwoCell mu = hcompose(hcompose(idl, rs.compare), idr);
  ClosedFrobenius f;
  f.carrier = rs.carrier;
  f.copy = delta.scalar_rel().relabel(rs.carrier, FiniteSet::product(rs.carrier, rs.carrier));
  f.compare = mu.scalar_rel().relabel(FiniteSet::product(rs.carrier, rs.carrier), rs.carrier);
  f.del = rs.delete_region.scalar_rel().relabel(rs.carrier, FiniteSet::unit());
  f.create = rs.create_region.scalar_rel().relabel(FiniteSet::unit(), rs.carrier);
  return f;
}

std::vector<AxiomResult> frobenius_check(const RegionStructure& rs) {
  const TwoCell idl = id(rs.left);
  const TwoCell idr = id(rs.right);
  std::vector<AxiomResult> out;
  auto guarded = [&](std::string name, auto&& build) {
    try {
      auto [lhs, rhs] = build();
      out.push_back(check(std::move(name), lhs, rhs));
    } catch (const Error& e) {
      out.push_back({std::move(name), false, e.what()});
    }
  };
  guarded("copy-delete unit (left edge)", [&] {
    return std::pair{vcompose(hcompose(idl, rs.copy), hcompose(rs.delete_region, idl)), idl};
  });
  guarded("copy-delete unit (right edge)", [&] {
    return std::pair{vcompose(hcompose(rs.copy, idr), hcompose(idr, rs.delete_region)), idr};
  });
  guarded("create-compare counit (left edge)", [&] {
    return std::pair{vcompose(hcompose(rs.create_region, idl), hcompose(idl, rs.compare)), idl};
  });
  guarded("create-compare counit (right edge)", [&] {
    return std::pair{vcompose(hcompose(idr, rs.create_region), hcompose(rs.compare, idr)), idr};
  });
  guarded("copy then compare", [&] {
    return std::pair{vcompose(rs.copy, rs.compare), id(rs.copy.dom())};
  });
  try {
    for (auto& r : frobenius_check(closed_form(rs))) out.push_back(std::move(r));
  } catch (const Error& e) {
    out.push_back({"closed form", false, e.what()});
  }
  return out;
}

std::vector<AxiomResult> frobenius_check(const ClosedFrobenius& f) {
  const FiniteSet& s = f.carrier;
  const Rel i = Rel::identity(s);
  const Rel sw = swap_rel(s, s);
  std::vector<AxiomResult> out;
  out.push_back(check("cocommutativity", compose(f.copy, sw), f.copy));
  out.push_back(check("commutativity", compose(sw, f.compare), f.compare));
  out.push_back(check("counit (closed, right)", compose(f.copy, product(i, f.del)), i));
  out.push_back(check("counit (closed, left)", compose(f.copy, product(f.del, i)), i));
  out.push_back(check("unit (closed, right)", compose(product(i, f.create), f.compare), i));
  out.push_back(check("unit (closed, left)", compose(product(f.create, i), f.compare), i));
  out.push_back(check("speciality (closed)", compose(f.copy, f.compare), i));
  out.push_back(check("coassociativity", compose(f.copy, product(f.copy, i)),
                      compose(f.copy, product(i, f.copy))));
  out.push_back(check("associativity", compose(product(f.compare, i), f.compare),
                      compose(product(i, f.compare), f.compare)));
  const Rel middle = compose(f.compare, f.copy);
  out.push_back(check("frobenius (left)", compose(product(f.copy, i), product(i, f.compare)), middle));
  out.push_back(check("frobenius (right)", compose(product(i, f.copy), product(f.compare, i)), middle));
  return out;
}

bool all_hold(const std::vector<AxiomResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.holds; });
}

TwoCell controlled(const ControlledOp& op) {
  const std::size_t n = op.public_carrier.size();
  if (op.family.size() != n) {
    throw PreconditionError("controlled: family has " + std::to_string(op.family.size()) +
                            " members for a public set of size " + std::to_string(n));
  }
  const OneCell dom = private_wire(op.public_carrier, op.in_private);
  const OneCell cod = private_wire(op.public_carrier, op.out_private);
  std::vector<Rel> comps;
  comps.reserve(n * n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < n; ++s) {
      if (t != s) {
        comps.emplace_back(FiniteSet::empty(), FiniteSet::empty());
        continue;
      }
      const Rel& r = op.family[s];
      if (r.src().size() != op.in_private.size() || r.dst().size() != op.out_private.size()) {
        throw PreconditionError("controlled: member " + std::to_string(s) + " has shape " +
                                std::to_string(r.src().size()) + "->" + std::to_string(r.dst().size()) +
                                ", expected " + std::to_string(op.in_private.size()) + "->" +
                                std::to_string(op.out_private.size()));
      }
      comps.push_back(r.relabel(op.in_private, op.out_private));
    }
  }
  return TwoCell(dom, cod, std::move(comps));
}

TwoCell controlled_in_region(const ControlledOp& op) {
  const FiniteSet& s = op.public_carrier;
  return hcompose(hcompose(id(left_edge(s)), controlled(op)), id(right_edge(s)));
}

bool controlled_lemma_holds(const ControlledOp& op) {
  const RegionStructure rs = region_structure(op.public_carrier);
  const TwoCell c = controlled(op);
  const TwoCell rl = id(hcompose(rs.right, rs.left));
  const TwoCell lhs = vcompose(vcompose(hcompose(id(c.dom()), rs.copy), hcompose(c, rl)),
                               hcompose(id(c.cod()), rs.compare));
  return equal(lhs, c).equal;
}

}  // namespace relcat
