#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "relcat/cells.hpp"
#include "relcat/structures.hpp"

namespace relcat {

/// Encrypted communication: plaintexts P, keys K, ciphertexts C.
struct ProtocolInstance {
  FiniteSet P;
  FiniteSet K;
  FiniteSet C;
  Rel E;            // P x K -> C
  ControlledOp D;   // public C, private K -> P
  DualityPair eta;  // key generation on K
};

/// Validates shapes; throws ConstructionError otherwise.
ProtocolInstance make_instance(FiniteSet P, FiniteSet K, FiniteSet C, Rel E, std::vector<Rel> D,
                               DualityPair eta);
/// The single-bit instance: E is addition mod 2, D = (identity, flip).
ProtocolInstance single_bit_instance();
/// Z_n: E(p, k) = p + k, D_c(k) = c - k.
ProtocolInstance group_instance(int n);

struct EquationVerdict {
  std::string name;
  bool holds = false;
  std::optional<std::string> witness;  // present iff holds is false
};

EquationVerdict verdict_from(std::string name, const EqualityReport& rep);

// ---- 2-cells used by the equations ----------------------------------------

/// E followed by publication of the ciphertext: P.K => region(C).
TwoCell encryption_cell(const ProtocolInstance& inst);
TwoCell cup_cell(const DualityPair& d);
TwoCell cap_cell(const DualityPair& d);
TwoCell delete_cell(const FiniteSet& x);
TwoCell create_cell(const FiniteSet& x);

struct Sides {
  TwoCell lhs;
  TwoCell rhs;
};

/// Correctness with the region drawn as a closed bubble (the simplified form).
Sides correctness_sides(const ProtocolInstance& inst);
/// Correctness as originally drawn: tensor placements, a different
/// bracketing and an explicit crossing of the message wire.
Sides correctness_sides_unsimplified(const ProtocolInstance& inst);

enum class Security { S1, S2, S3, S4 };
const char* security_name(Security s);
Sides security_sides(const ProtocolInstance& inst, Security which);

EquationVerdict check_correctness(const ProtocolInstance& inst);
EquationVerdict check_correctness_unsimplified(const ProtocolInstance& inst);
EquationVerdict check_security(const ProtocolInstance& inst, Security which);

struct DInverse {
  TwoCell closed;       // region(C).P => region(C).K, built from E
  ControlledOp inverse; // its diagonal blocks
  EquationVerdict verdict;
};

/// Builds D^-1 from E by bending its legs, then checks it is a two-sided
/// inverse of D and that every fiber of D is a bijection.
/// Throws PreconditionError when correctness fails.
DInverse derive_D_inverse(const ProtocolInstance& inst);

/// A two-sided relational inverse of r. Any inverse is forced to be the
/// converse of a bijection, so one candidate is checked.
std::optional<Rel> relational_inverse(const Rel& r);

struct NoninvertibilityVerdict {
  EquationVerdict verdict;
  bool exempt = false;      // |P| <= 1, where the statement makes no claim
  bool has_inverse = false;
};

NoninvertibilityVerdict check_E_noninvertible(const ProtocolInstance& inst);

/// E rebuilt from D^-1 and the key cap. The overload taking `dinv` lets tests
/// feed a tampered inverse.
EquationVerdict reconstruct_E(const ProtocolInstance& inst, const ControlledOp& dinv);
EquationVerdict reconstruct_E(const ProtocolInstance& inst);

struct ImplicationReport {
  bool s1 = false;
  bool s2 = false;
  bool s3 = false;
  bool s4 = false;
  bool vacuous = false;  // S1 fails, so nothing is claimed
  bool holds = false;
};

ImplicationReport check_implications(const ProtocolInstance& inst);

// ---- secret sharing -------------------------------------------------------

struct SecretSharingInstance {
  FiniteSet message_set;
  DualityPair share_pad;
  ControlledOp D_share;
  TwoCell E_combine;
};

struct SecretSharingResult {
  SecretSharingInstance instance;
  EquationVerdict correctness;
  EquationVerdict erase_second;  // delete the pad copy, the share is random
  EquationVerdict erase_first;   // delete the share, the pad copy is random
};

Sides secret_sharing_sides(const SecretSharingInstance& ss, int which);
/// Throws PreconditionError when the source instance is not correct.
SecretSharingResult secret_sharing_from_otp(const ProtocolInstance& inst);

// ---- Diffie-Hellman -------------------------------------------------------

struct DHInstance {
  unsigned q = 0;
  FiniteSet elements;   // g^i, i = 0..q-1; 0 is the identity
  FiniteSet exponents;  // Z_q
  ControlledOp D_exp;   // public element p, private x -> p^x
  std::vector<std::size_t> base_set;
};

constexpr unsigned kDHPrimeCap = 7;

bool is_prime(unsigned n);
/// Throws PreconditionError for non-prime q or q above the cap.
DHInstance dh_instance(unsigned q, bool include_identity = false);

struct DHSides {
  TwoCell lhs;          // built as drawn, bases copied last
  TwoCell lhs_drawn;    // same diagram with the copy of the base done first
  TwoCell rhs;
};

/// With erase = false the published intermediate values are kept and the
/// right side creates two matching regions for them.
DHSides dh_sides(const DHInstance& dh, bool erase = true);
/// Compares per base; the witness names the first failing base.
EquationVerdict check_dh(const DHInstance& dh, bool erase = true);

}  // namespace relcat
