#include "relcat/protocols.hpp"

#include <algorithm>
#include <functional>
#include <initializer_list>

#include "relcat/error.hpp"

namespace relcat {

namespace {

TwoCell id(const OneCell& a) { return TwoCell::identity(a); }
OneCell sc(const FiniteSet& x) { return OneCell::scalar(x); }

// Left-associated horizontal composite of two or more cells.
TwoCell hs(std::initializer_list<TwoCell> cells) {
  auto it = cells.begin();
  TwoCell acc = *it++;
  for (; it != cells.end(); ++it) acc = hcompose(acc, *it);
  return acc;
}

OneCell hs1(std::initializer_list<OneCell> cells) {
  auto it = cells.begin();
  OneCell acc = *it++;
  for (; it != cells.end(); ++it) acc = hcompose(acc, *it);
  return acc;
}

TwoCell vs(std::initializer_list<TwoCell> cells) {
  auto it = cells.begin();
  TwoCell acc = *it++;
  for (; it != cells.end(); ++it) acc = vcompose(acc, *it);
  return acc;
}

const OneCell& unit_cell() {
  static const OneCell u = OneCell::identity(FiniteSet::unit());
  return u;
}

}  // namespace

ProtocolInstance make_instance(FiniteSet P, FiniteSet K, FiniteSet C, Rel E, std::vector<Rel> D,
                               DualityPair eta) {
  if (E.src().size() != P.size() * K.size() || E.dst().size() != C.size()) {
    throw ConstructionError("E must have shape " + std::to_string(P.size() * K.size()) + "->" +
                            std::to_string(C.size()));
  }
  if (D.size() != C.size()) {
    throw ConstructionError("D needs one relation per ciphertext, got " + std::to_string(D.size()));
  }
  for (const auto& r : D) {
    if (r.src().size() != K.size() || r.dst().size() != P.size()) {
      throw ConstructionError("each D fiber must have shape " + std::to_string(K.size()) + "->" +
                              std::to_string(P.size()));
    }
  }
  if (eta.carrier.size() != K.size()) throw ConstructionError("key generation is on the wrong set");
  if (!snake_check(eta)) throw ConstructionError("key generation fails the zig-zag equations");
  ProtocolInstance inst;
  inst.E = E.relabel(FiniteSet::product(P, K), C);
  inst.D = ControlledOp{C, K, P, std::move(D)};
  inst.P = std::move(P);
  inst.K = std::move(K);
  inst.C = std::move(C);
  inst.eta = std::move(eta);
  return inst;
}

ProtocolInstance single_bit_instance() {
  const FiniteSet two(2);
  Rel E = Rel::from_matrix(FiniteSet(4), two, {"1001", "0110"});
  std::vector<Rel> D = {Rel::from_matrix(two, two, {"10", "01"}),
                        Rel::from_matrix(two, two, {"01", "10"})};
  DualityPair eta{two, Rel::from_matrix(FiniteSet(1), FiniteSet(4), {"1", "0", "0", "1"}),
                  Rel::from_matrix(FiniteSet(4), FiniteSet(1), {"1001"})};
  return make_instance(two, two, two, std::move(E), std::move(D), std::move(eta));
}

ProtocolInstance group_instance(int n) {
  if (n < 1) throw PreconditionError("group_instance: n must be at least 1, got " + std::to_string(n));
  const auto un = static_cast<std::size_t>(n);
  const FiniteSet zn(un);
  std::vector<std::size_t> add(un * un);
  for (std::size_t p = 0; p < un; ++p) {
    for (std::size_t k = 0; k < un; ++k) add[p * un + k] = (p + k) % un;
  }
  std::vector<Rel> D;
  for (std::size_t c = 0; c < un; ++c) {
    std::vector<std::size_t> sub(un);
    for (std::size_t k = 0; k < un; ++k) sub[k] = (c + un - k) % un;
    D.push_back(Rel::graph(zn, zn, sub));
  }
  return make_instance(zn, zn, zn, Rel::graph(FiniteSet(un * un), zn, add), std::move(D),
                       canonical_cup(zn));
}

EquationVerdict verdict_from(std::string name, const EqualityReport& rep) {
  EquationVerdict v{std::move(name), rep.equal, std::nullopt};
  if (!rep.equal) v.witness = rep.message;
  return v;
}

TwoCell encryption_cell(const ProtocolInstance& inst) {
  const RegionStructure rs = region_structure(inst.C);
  const TwoCell e(hcompose(sc(inst.P), sc(inst.K)), sc(inst.C), {inst.E});
  return vcompose(e, rs.publish);
}

TwoCell cup_cell(const DualityPair& d) {
  return TwoCell(unit_cell(), hcompose(sc(d.carrier), sc(d.carrier)), {d.cup});
}

TwoCell cap_cell(const DualityPair& d) {
  return TwoCell(hcompose(sc(d.carrier), sc(d.carrier)), unit_cell(), {d.cap});
}

TwoCell delete_cell(const FiniteSet& x) { return TwoCell(sc(x), unit_cell(), {deletion(x)}); }
TwoCell create_cell(const FiniteSet& x) { return TwoCell(unit_cell(), sc(x), {creation(x)}); }

Sides correctness_sides(const ProtocolInstance& inst) {
  const RegionStructure rs = region_structure(inst.C);
  const TwoCell lhs = vs({hcompose(id(sc(inst.P)), cup_cell(inst.eta)),
                          hcompose(encryption_cell(inst), id(sc(inst.K))),
                          hs({id(rs.left), controlled(inst.D), id(rs.right)})});
  const TwoCell rhs = hcompose(rs.create_region, id(sc(inst.P)));
  return {lhs, rhs};
}

Sides correctness_sides_unsimplified(const ProtocolInstance& inst) {
  const RegionStructure rs = region_structure(inst.C);
  const TwoCell lhs = vs({tensor(id(sc(inst.P)), cup_cell(inst.eta)),
                          tensor(encryption_cell(inst), id(sc(inst.K))),
                          hcompose(id(rs.left), hcompose(controlled(inst.D), id(rs.right)))});
  const TwoCell rhs = vcompose(hcompose(id(sc(inst.P)), rs.create_region),
                               swap(sc(inst.P), hcompose(rs.left, rs.right)));
  return {lhs, rhs};
}

const char* security_name(Security s) {
  switch (s) {
    case Security::S1: return "S1";
    case Security::S2: return "S2";
    case Security::S3: return "S3";
    case Security::S4: return "S4";
  }
  return "?";
}

Sides security_sides(const ProtocolInstance& inst, Security which) {
  const RegionStructure rs = region_structure(inst.C);
  const TwoCell enc = encryption_cell(inst);
  const TwoCell reg = id(hcompose(rs.left, rs.right));
  switch (which) {
    case Security::S1:
      return {vcompose(hcompose(id(sc(inst.P)), cup_cell(inst.eta)), hcompose(enc, delete_cell(inst.K))),
              vcompose(delete_cell(inst.P), rs.create_region)};
    case Security::S2:
      return {vcompose(hcompose(id(sc(inst.P)), create_cell(inst.K)), enc),
              vcompose(delete_cell(inst.P), rs.create_region)};
    case Security::S3:
      return {vcompose(hcompose(create_cell(inst.P), id(sc(inst.K))), enc),
              vcompose(delete_cell(inst.K), rs.create_region)};
    case Security::S4:
      return {vcompose(hcompose(reg, create_cell(inst.K)), controlled_in_region(inst.D)),
              hcompose(reg, create_cell(inst.P))};
  }
  throw PreconditionError("unknown security property");
}

namespace {

EquationVerdict guarded(std::string name, const std::function<Sides()>& build) {
  try {
    const Sides s = build();
    return verdict_from(std::move(name), equal(s.lhs, s.rhs));
  } catch (const Error& e) {
    return EquationVerdict{std::move(name), false, std::string("type error: ") + e.what()};
  }
}

}  // namespace

EquationVerdict check_correctness(const ProtocolInstance& inst) {
  return guarded("correctness", [&] { return correctness_sides(inst); });
}

EquationVerdict check_correctness_unsimplified(const ProtocolInstance& inst) {
  return guarded("correctness (as drawn)", [&] { return correctness_sides_unsimplified(inst); });
}

EquationVerdict check_security(const ProtocolInstance& inst, Security which) {
  return guarded(security_name(which), [&] { return security_sides(inst, which); });
}

DInverse derive_D_inverse(const ProtocolInstance& inst) {
  const EquationVerdict corr = check_correctness(inst);
  if (!corr.holds) {
    throw PreconditionError("derive_D_inverse: correctness fails (" + corr.witness.value_or("") + ")");
  }
  const RegionStructure rs = region_structure(inst.C);
  const TwoCell reg = id(hcompose(rs.left, rs.right));
  const TwoCell compare_closed = hs({id(rs.left), rs.compare, id(rs.right)});
  const TwoCell closed = vs({hs({reg, id(sc(inst.P)), cup_cell(inst.eta)}),
                             hs({reg, encryption_cell(inst), id(sc(inst.K))}),
                             hcompose(compare_closed, id(sc(inst.K)))});

  // Read off the diagonal blocks; anything off the diagonal would mean the
  // public value was changed.
  const Rel& m = closed.scalar_rel();
  const std::size_t np = inst.P.size();
  const std::size_t nk = inst.K.size();
  ControlledOp inv{inst.C, inst.P, inst.K, {}};
  std::optional<std::string> problem;
  for (std::size_t c = 0; c < inst.C.size(); ++c) {
    Rel r(inst.P, inst.K);
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t c2 = 0; c2 < inst.C.size(); ++c2) {
        for (std::size_t k = 0; k < nk; ++k) {
          if (!m.test(c * np + p, c2 * nk + k)) continue;
          if (c2 == c) {
            r.set(p, k);
          } else if (!problem) {
            problem = "inverse changes the public value " + std::to_string(c) + " to " +
                      std::to_string(c2);
          }
        }
      }
    }
    inv.family.push_back(std::move(r));
  }

  EquationVerdict v{"D inverse", true, std::nullopt};
  auto fail = [&](std::string why) {
    if (v.holds) {
      v.holds = false;
      v.witness = std::move(why);
    }
  };
  if (problem) fail(*problem);
  for (std::size_t c = 0; c < inst.D.family.size(); ++c) {
    if (!predicates(inst.D.family[c]).is_bijection) {
      fail("D fiber for ciphertext " + std::to_string(c) + " is not a bijection");
    }
  }
  const TwoCell d = controlled(inst.D);
  const TwoCell dinv = controlled(inv);
  const EqualityReport left = equal(vcompose(d, dinv), id(d.dom()));
  if (!left.equal) fail("D;D^-1 is not the identity: " + left.message);
  const EqualityReport right = equal(vcompose(dinv, d), id(d.cod()));
  if (!right.equal) fail("D^-1;D is not the identity: " + right.message);
  const EqualityReport same = equal(controlled_in_region(inv), closed);
  if (!same.equal) fail("diagonal read-off does not rebuild the bent cell: " + same.message);
  return {closed, std::move(inv), std::move(v)};
}

std::optional<Rel> relational_inverse(const Rel& r) {
  // r;f = id confines f(b) to the preimages of b, all of which must coincide,
  // and f;r = id needs f(b) nonempty. So f(b) is forced to be the unique
  // preimage of b, and only that candidate is checked.
  Rel f(r.dst(), r.src());
  for (std::size_t b = 0; b < r.dst().size(); ++b) {
    std::optional<std::size_t> pre;
    for (std::size_t a = 0; a < r.src().size(); ++a) {
      if (!r.test(a, b)) continue;
      if (pre) return std::nullopt;
      pre = a;
    }
    if (!pre) return std::nullopt;
    f.set(b, *pre);
  }
  if (compose(r, f) == Rel::identity(r.src()) && compose(f, r) == Rel::identity(r.dst())) return f;
  return std::nullopt;
}

NoninvertibilityVerdict check_E_noninvertible(const ProtocolInstance& inst) {
  NoninvertibilityVerdict out;
  out.exempt = inst.P.size() <= 1;
  out.has_inverse = relational_inverse(inst.E).has_value();
  out.verdict.name = "E not invertible";
  out.verdict.holds = out.exempt || !out.has_inverse;
  if (!out.verdict.holds) out.verdict.witness = "E has a two-sided relational inverse";
  return out;
}

EquationVerdict reconstruct_E(const ProtocolInstance& inst, const ControlledOp& dinv) {
  return guarded("E from D inverse", [&] {
    const RegionStructure rs = region_structure(inst.C);
    const TwoCell lhs = vs({hs({rs.create_region, id(sc(inst.P)), id(sc(inst.K))}),
                            hcompose(controlled_in_region(dinv), id(sc(inst.K))),
                            hcompose(id(hcompose(rs.left, rs.right)), cap_cell(inst.eta))});
    return Sides{lhs, encryption_cell(inst)};
  });
}

EquationVerdict reconstruct_E(const ProtocolInstance& inst) {
  return reconstruct_E(inst, derive_D_inverse(inst).inverse);
}

ImplicationReport check_implications(const ProtocolInstance& inst) {
  ImplicationReport r;
  r.s1 = check_security(inst, Security::S1).holds;
  r.s2 = check_security(inst, Security::S2).holds;
  r.s3 = check_security(inst, Security::S3).holds;
  r.s4 = check_security(inst, Security::S4).holds;
  r.vacuous = !r.s1;
  r.holds = !r.s1 || (r.s2 && r.s3 && r.s4);
  return r;
}

Sides secret_sharing_sides(const SecretSharingInstance& ss, int which) {
  const FiniteSet& c = ss.message_set;
  const RegionStructure rs = region_structure(c);
  const FiniteSet& k = ss.share_pad.carrier;
  const TwoCell idr = id(rs.right);
  const TwoCell shared = vcompose(hcompose(idr, cup_cell(ss.share_pad)),
                                  hs({controlled(ss.D_share), idr, id(sc(k))}));
  switch (which) {
    case 0:
      return {vcompose(shared, hcompose(idr, ss.E_combine)), hcompose(rs.copy, idr)};
    case 1:
      return {vcompose(hcompose(idr, cup_cell(ss.share_pad)),
                       hs({controlled(ss.D_share), idr, delete_cell(k)})),
              hcompose(idr, create_cell(ss.D_share.out_private))};
    case 2:
      return {vcompose(shared, hs({idr, delete_cell(ss.D_share.out_private), id(sc(k))})),
              hcompose(idr, create_cell(k))};
    default:
      throw PreconditionError("secret sharing equation index out of range");
  }
}

SecretSharingResult secret_sharing_from_otp(const ProtocolInstance& inst) {
  const EquationVerdict corr = check_correctness(inst);
  if (!corr.holds) {
    throw PreconditionError("secret_sharing_from_otp: correctness fails (" + corr.witness.value_or("") + ")");
  }
  SecretSharingResult out;
  out.instance = SecretSharingInstance{inst.C, inst.eta, inst.D, encryption_cell(inst)};
  out.correctness = guarded("secret sharing", [&] { return secret_sharing_sides(out.instance, 0); });
  out.erase_second = guarded("share erasure (pad copy deleted)",
                             [&] { return secret_sharing_sides(out.instance, 1); });
  out.erase_first = guarded("share erasure (share deleted)",
                            [&] { return secret_sharing_sides(out.instance, 2); });
  return out;
}

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

DHInstance dh_instance(unsigned q, bool include_identity) {
  if (!is_prime(q)) throw PreconditionError("dh_instance: " + std::to_string(q) + " is not prime");
  if (q > kDHPrimeCap) {
    throw PreconditionError("dh_instance: q = " + std::to_string(q) + " exceeds the cap of " +
                            std::to_string(kDHPrimeCap));
  }
  DHInstance dh;
  dh.q = q;
  std::vector<std::string> labels;
  for (unsigned i = 0; i < q; ++i) labels.push_back("g^" + std::to_string(i));
  dh.elements = FiniteSet(std::move(labels));
  dh.exponents = FiniteSet(q);
  dh.D_exp = ControlledOp{dh.elements, dh.exponents, dh.elements, {}};
  for (unsigned p = 0; p < q; ++p) {
    std::vector<std::size_t> pow(q);
    for (unsigned x = 0; x < q; ++x) pow[x] = (p * x) % q;  // (g^p)^x = g^(px)
    dh.D_exp.family.push_back(Rel::graph(dh.exponents, dh.elements, pow));
  }
  for (unsigned p = include_identity ? 0 : 1; p < q; ++p) dh.base_set.push_back(p);
  return dh;
}

DHSides dh_sides(const DHInstance& dh, bool erase) {
  const FiniteSet& g = dh.elements;
  const FiniteSet& zq = dh.exponents;
  std::vector<std::string> base_labels;
  for (auto b : dh.base_set) base_labels.push_back(g.label(b));
  const FiniteSet bases(std::move(base_labels));

  ControlledOp db{bases, zq, g, {}};
  for (auto b : dh.base_set) db.family.push_back(dh.D_exp.family[b]);
  const TwoCell d_base = controlled(db);

  const RegionStructure rb = region_structure(bases);
  const RegionStructure rg = region_structure(g);
  const OneCell G = sc(g);
  const OneCell Z = sc(zq);
  const OneCell reg = hcompose(rg.left, rg.right);
  const TwoCell dg = controlled_in_region(dh.D_exp);
  const TwoCell dupz = dup(Z);
  const TwoCell mk = create_cell(zq);

  // The exchange between the parties, on scalars: G.Z.Z.G => G.G, or
  // => reg.reg.G.G when the published values are kept.
  TwoCell inner = vs({hs({rg.publish, id(Z), id(Z), rg.publish}),
                      hs({swap(reg, Z), id(Z), id(reg)}),
                      hs({id(Z), dg, id(reg)})});
  if (erase) {
    inner = vs({inner, hs({id(Z), rg.delete_region, id(G), id(reg)}),
                hcompose(id(Z), swap(G, reg)),
                hcompose(swap(Z, reg), id(G)),
                hcompose(dg, id(G)),
                hs({rg.delete_region, id(G), id(G)})});
  } else {
    inner = vs({inner, hs({id(Z), id(reg), swap(G, reg)}),
                hcompose(swap(Z, hcompose(reg, reg)), id(G)),
                hs({id(reg), dg, id(G)})});
  }

  auto in_b = [&](const OneCell& x) { return private_wire(bases, x.fiber(0, 0)); };
  const TwoCell pubb = id(pub(bases));

  // Keys created inside the ambient region; the base is copied last.
  const TwoCell lhs = vs({tensor(pubb, hcompose(mk, mk)),
                          tensor(pubb, hcompose(dupz, dupz)),
                          hcompose(d_base, id(in_b(hs1({Z, Z, Z})))),
                          hcompose(id(in_b(hs1({G, Z, Z}))), d_base),
                          tensor(pubb, inner),
                          hcompose(id(in_b(inner.cod())), rb.copy)});

  // The same picture with the base copied first. Both exponentiations by
  // the base happen at the right edge of the base region; the second
  // exponent is carried there and back by crossing the other wires.
  const TwoCell idr = id(rb.right);
  const TwoCell idl = id(rb.left);
  const TwoCell at_edge = hcompose(d_base, idr);
  const OneCell gzz = hs1({G, Z, Z});
  const TwoCell lhs_drawn = vs({rb.copy,
                                hs({idr, hcompose(mk, mk), idl}),
                                hs({idr, hcompose(dupz, dupz), idl}),
                                hs({at_edge, id(hs1({Z, Z, Z})), idl}),
                                hs({idr, swap(gzz, Z), idl}),
                                hs({at_edge, id(gzz), idl}),
                                hs({idr, swap(G, gzz), idl}),
                                hs({idr, inner, idl})});

  TwoCell keys = cup_cell(canonical_cup(g));
  if (!erase) keys = hs({rg.create_region, rg.create_region, keys});
  const TwoCell rhs = vcompose(rb.copy, hs({idr, keys, idl}));
  return {lhs, lhs_drawn, rhs};
}

EquationVerdict check_dh(const DHInstance& dh, bool erase) {
  EquationVerdict v{erase ? "Diffie-Hellman" : "Diffie-Hellman (published values kept)", true,
                    std::nullopt};
  try {
    const DHSides s = dh_sides(dh, erase);
    const EqualityReport agree = equal(s.lhs, s.lhs_drawn);
    if (!agree.equal) {
      v.holds = false;
      v.witness = "the two transcriptions of the left side disagree: " + agree.message;
      return v;
    }
    for (std::size_t i = 0; i < dh.base_set.size(); ++i) {
      const Rel& l = s.lhs.component(i, i);
      const Rel& r = s.rhs.component(i, i);
      if (!(l == r)) {
        const std::size_t b = dh.base_set[i];
        v.holds = false;
        v.witness = "base " + dh.elements.label(b) + (b == 0 ? " (identity)" : "") +
                    ": reachable key pairs differ (" + std::to_string(l.count()) + " vs " +
                    std::to_string(r.count()) + ")";
        return v;
      }
    }
    const EqualityReport whole = equal(s.lhs, s.rhs);
    if (!whole.equal) {
      v.holds = false;
      v.witness = whole.message;
    }
  } catch (const Error& e) {
    v.holds = false;
    v.witness = std::string("type error: ") + e.what();
  }
  return v;
}

}  // namespace relcat
