#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relcat/error.hpp"
#include "relcat/protocols.hpp"

namespace relcat {

enum class Constraint { Correctness, S1, S2, S3, S4 };
constexpr std::size_t kConstraintCount = 5;

const char* constraint_name(Constraint c);
/// Accepts "correctness", "S1".."S4" (case-insensitive); throws
/// PreconditionError otherwise.
Constraint parse_constraint(const std::string& s);

struct SearchSpec {
  std::size_t P = 1;
  std::size_t K = 1;
  std::size_t C = 1;
  std::vector<Constraint> constraints;
  bool dedup = false;
};

struct SolutionRecord {
  ProtocolInstance instance;
  std::string bits;                           // E, D, eta matrices read row-major
  std::array<bool, kConstraintCount> verdicts{};  // indexed by Constraint
  std::string canonical_bits;                 // least member of the relabelling orbit
};

constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 30;

/// RELCAT_BUDGET when set to a positive integer, the default otherwise.
std::uint64_t budget_from_env();

/// Number of (E, D, eta) triples; saturates at UINT64_MAX.
std::uint64_t candidate_count(const SearchSpec& spec);
/// Candidates times equation checks per candidate; saturates.
std::uint64_t estimated_cost(const SearchSpec& spec);

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t cost, std::uint64_t budget);
  std::uint64_t cost() const { return cost_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t cost_;
  std::uint64_t budget_;
};

struct SearchOptions {
  int threads = 0;  // 0: OpenMP default
  std::uint64_t budget = kDefaultBudget;
};

/// Bit string of a triple in the record layout.
std::string triple_bits(const ProtocolInstance& inst);
/// Inverse of triple_bits; the instance must still satisfy the zig-zag laws
/// for its cup. Throws ConstructionError on malformed input.
ProtocolInstance instance_from_bits(std::size_t P, std::size_t K, std::size_t C,
                                    const std::string& bits);

/// Verdict of one equation on an instance, through the cells evaluator.
bool evaluate(const ProtocolInstance& inst, Constraint c);

/// All triples satisfying the constraints, in lexicographic order of their
/// bit strings, deduplicated when spec.dedup is set.
/// Throws BudgetExceeded when the estimated cost is over budget.
std::vector<SolutionRecord> enumerate(const SearchSpec& spec, const SearchOptions& opt = {});

namespace kernels {
/// Sharded by the first row of E; shards run in parallel and are merged in
/// shard order.
std::vector<SolutionRecord> enumerate_parallel(const SearchSpec& spec, int threads = 0);
/// Reference implementation, a single loop in lexicographic order.
std::vector<SolutionRecord> enumerate_serial(const SearchSpec& spec);
}  // namespace kernels

/// Least bit string over simultaneous relabellings of P, K and C.
std::string canonical_bits(const ProtocolInstance& inst);
/// One record per orbit, carrying the canonical member, in order of the
/// canonical bit strings.
std::vector<SolutionRecord> dedup(const std::vector<SolutionRecord>& records);

struct Counterexample {
  std::string bits;
  std::string claim;
  std::string detail;
};

struct TheoremReport {
  SearchSpec spec;
  bool sampled = false;
  std::uint64_t examined = 0;          // candidates looked at
  std::uint64_t correct = 0;           // of those, satisfying correctness
  std::uint64_t with_s1 = 0;           // correct and S1
  std::uint64_t s1_failing = 0;        // correct but not S1: implication not claimed
  std::uint64_t exempt = 0;            // |P| <= 1, no non-invertibility claim
  std::vector<Counterexample> counterexamples;
  bool holds() const { return counterexamples.empty(); }
};

struct TheoremOptions {
  int threads = 0;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t samples = 100000;  // used when the exhaustive run is over budget
  std::uint64_t seed = 1;
};

/// Over every correct triple: every D fiber is a bijection, E can be rebuilt
/// from the derived inverse, E has no relational inverse unless |P| <= 1,
/// and S1 implies S2, S3 and S4. Falls back to sampling when exhaustive
/// enumeration is over budget.
TheoremReport verify_theorems(const SearchSpec& spec, const TheoremOptions& opt = {});

/// The claims above for one instance, appended to `report`.
void check_theorems(const ProtocolInstance& inst, TheoremReport& report);

}  // namespace relcat
