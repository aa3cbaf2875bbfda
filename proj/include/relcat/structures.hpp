#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "relcat/cells.hpp"
#include "relcat/finite_set.hpp"
#include "relcat/permutation.hpp"
#include "relcat/rel.hpp"

namespace relcat {

// ---- scalar generators ----------------------------------------------------

/// Unit and counit exhibiting a finite set as its own dual.
struct DualityPair {
  FiniteSet carrier;
  Rel cup;  // 1 -> S x S
  Rel cap;  // S x S -> 1
};

/// Both zig-zag composites equal the identity on the carrier.
bool snake_check(const DualityPair& d);
/// The two zig-zag composites, (id x cup);(cap x id) and (cup x id);(id x cap).
std::pair<Rel, Rel> snake_composites(const DualityPair& d);

DualityPair canonical_cup(const FiniteSet& s);
/// cup = {(s, pi(s))}; cap is the unique counit completing the zig-zags,
/// {(pi(b), b)}, which is the converse of the cup only when pi is an involution.
DualityPair cup_from_permutation(const Permutation& pi);
/// The duality whose cup is `cup` : 1 -> S x S. Throws ConstructionError
/// unless the cup is the graph of a permutation.
DualityPair duality_from_cup(const FiniteSet& s, const Rel& cup);

/// Brute force over all cup and cap relations; returns the permutation behind
/// every valid cup, in increasing order. Size is capped at 4.
std::vector<Permutation> classify_cups(const FiniteSet& s);
constexpr std::size_t kClassifyCap = 4;

/// The total relation S -> 1 (the only one with empty kernel) and its converse.
Rel deletion(const FiniteSet& s);
Rel creation(const FiniteSet& s);
/// x -> (x, x).
Rel duplicate(const FiniteSet& s);
/// (x, y) -> (y, x) as X x Y -> Y x X.
Rel swap_rel(const FiniteSet& x, const FiniteSet& y);

/// Bending the canonical cup and deleting one leg leaves a random key on the
/// other: cup;(delete x id) == create and cup;(id x delete) == create.
bool twist_delete_check(const FiniteSet& s);
/// Dual statement: (create x id);cap == delete and (id x create);cap == delete.
bool twist_create_check(const FiniteSet& s);

// ---- 1-cells for public regions -------------------------------------------

/// Left edge of a region over S: S -> 1, all fibers singletons.
OneCell left_edge(const FiniteSet& s);
/// Right edge: 1 -> S, all fibers singletons.
OneCell right_edge(const FiniteSet& s);
/// The scalar 1-cell left.right, whose fiber is S.
OneCell region(const FiniteSet& s);
/// Public wire of type S: the identity 1-cell on S.
OneCell pub(const FiniteSet& s);
/// A private wire of type X inside a region over S: pub(S) * X.
OneCell private_wire(const FiniteSet& s, const FiniteSet& x);

/// Symmetry a.b => b.a for scalar 1-cells a and b.
TwoCell swap(const OneCell& a, const OneCell& b);
/// x => x.x for a scalar 1-cell.
TwoCell dup(const OneCell& x);

struct RegionStructure {
  FiniteSet carrier;
  OneCell left;            // S -> 1
  OneCell right;           // 1 -> S
  TwoCell copy;            // id_S => right.left
  TwoCell compare;         // right.left => id_S
  TwoCell delete_region;   // left.right => id_1
  TwoCell create_region;   // id_1 => left.right
  TwoCell publish;         // S (scalar) => left.right
  TwoCell sample;          // left.right => S (scalar)
};

RegionStructure region_structure(const FiniteSet& s);

/// Scalar (closed) form of a region's copy/compare/delete/create, as
/// relations on the region's fiber.
struct ClosedFrobenius {
  FiniteSet carrier;
  Rel copy;     // S -> S x S
  Rel compare;  // S x S -> S
  Rel del;      // S -> 1
  Rel create;   // 1 -> S
};

ClosedFrobenius closed_form(const RegionStructure& rs);

struct AxiomResult {
  std::string name;
  bool holds = false;
  std::string detail;  // first difference when the axiom fails
};

/// Open checks on the boundary 1-cells plus closed checks on the region
/// fiber: unit and counit laws, symmetry, speciality (copy;compare = id),
/// (co)associativity and the Frobenius law.
std::vector<AxiomResult> frobenius_check(const RegionStructure& rs);
std::vector<AxiomResult> frobenius_check(const ClosedFrobenius& f);
bool all_hold(const std::vector<AxiomResult>& results);

// ---- controlled computation -----------------------------------------------

struct ControlledOp {
  FiniteSet public_carrier;
  FiniteSet in_private;
  FiniteSet out_private;
  std::vector<Rel> family;  // one relation in_private -> out_private per public value
};

/// private_wire(S, X) => private_wire(S, Y) with family[s] on the diagonal.
/// Throws PreconditionError on a malformed family.
TwoCell controlled(const ControlledOp& op);
/// The controlled cell inside a closed region: id(left).C.id(right).
TwoCell controlled_in_region(const ControlledOp& op);
/// Copy the public value, run C beside the copy, compare: equals C.
bool controlled_lemma_holds(const ControlledOp& op);

}  // namespace relcat
