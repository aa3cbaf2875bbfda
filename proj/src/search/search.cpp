#include "relcat/search.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace relcat {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSat / a) return kSat;
  return a * b;
}

std::uint64_t sat_pow2(std::size_t n) { return n >= 64 ? kSat : std::uint64_t{1} << n; }

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f = sat_mul(f, i);
  return f;
}

void append_bits(std::string& out, const Rel& r) {
  for (const auto& row : r.matrix_rows()) out += row;
}

// Matrix with `rows` x `cols` cells read from bits[pos..].
Rel rel_from(const FiniteSet& src, const FiniteSet& dst, const std::string& bits, std::size_t& pos) {
  std::vector<std::string> rows;
  for (std::size_t r = 0; r < dst.size(); ++r) {
    rows.push_back(bits.substr(pos, src.size()));
    pos += src.size();
  }
  return Rel::from_matrix(src, dst, rows);
}

// Bits of `code` as a most-significant-first matrix.
Rel rel_from_code(const FiniteSet& src, const FiniteSet& dst, std::uint64_t code) {
  Rel r(src, dst);
  const std::size_t n = src.size() * dst.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((code >> (n - 1 - i)) & 1u) r.set(i % src.size(), i / src.size());
  }
  return r;
}

// Everything about a spec that does not change between candidates.
struct Space {
  FiniteSet P, K, C, PK;
  std::size_t e_bits = 0;
  std::size_t d_bits = 0;  // per ciphertext
  std::vector<DualityPair> cups;  // in lexicographic order of the cup matrix
};

Space make_space(const SearchSpec& spec) {
  if (spec.P == 0 || spec.K == 0 || spec.C == 0) {
    throw PreconditionError("search sizes must be at least 1");
  }
  Space sp;
  sp.P = FiniteSet(spec.P);
  sp.K = FiniteSet(spec.K);
  sp.C = FiniteSet(spec.C);
  sp.PK = FiniteSet::product(sp.P, sp.K);
  sp.e_bits = spec.P * spec.K * spec.C;
  sp.d_bits = spec.P * spec.K;
  for (const auto& pi : all_permutations(sp.K)) sp.cups.push_back(cup_from_permutation(pi));
  std::sort(sp.cups.begin(), sp.cups.end(),
            [](const DualityPair& a, const DualityPair& b) { return lex_less(a.cup, b.cup); });
  return sp;
}

ProtocolInstance candidate(const Space& sp, std::uint64_t e, std::uint64_t d, std::size_t cup) {
  std::vector<Rel> family;
  const std::size_t nc = sp.C.size();
  for (std::size_t c = 0; c < nc; ++c) {
    const std::uint64_t code = (d >> ((nc - 1 - c) * sp.d_bits)) & ((std::uint64_t{1} << sp.d_bits) - 1);
    family.push_back(rel_from_code(sp.K, sp.P, code));
  }
  return make_instance(sp.P, sp.K, sp.C, rel_from_code(sp.PK, sp.C, e), std::move(family),
                       sp.cups[cup]);
}

// Requested constraints first, so a failing candidate stops early; verdicts
// of the remaining ones are only computed for solutions.
std::optional<SolutionRecord> try_candidate(const SearchSpec& spec, ProtocolInstance inst) {
  std::array<std::optional<bool>, kConstraintCount> v;
  for (Constraint c : spec.constraints) {
    auto& slot = v[static_cast<std::size_t>(c)];
    if (!slot) slot = evaluate(inst, c);
    if (!*slot) return std::nullopt;
  }
  SolutionRecord rec;
  for (std::size_t i = 0; i < kConstraintCount; ++i) {
    rec.verdicts[i] = v[i] ? *v[i] : evaluate(inst, static_cast<Constraint>(i));
  }
  rec.bits = triple_bits(inst);
  rec.canonical_bits = canonical_bits(inst);
  rec.instance = std::move(inst);
  return rec;
}

// Candidates whose E has first row `row` (or all of them when `row` is
// empty), in lexicographic order.
void run_shard(const SearchSpec& spec, const Space& sp, std::optional<std::uint64_t> row,
               std::vector<SolutionRecord>& out) {
  const std::size_t low_bits = sp.e_bits - sp.PK.size();
  std::uint64_t e_begin = 0;
  std::uint64_t e_end = std::uint64_t{1} << sp.e_bits;
  if (row) {
    e_begin = *row << low_bits;
    e_end = (*row + 1) << low_bits;
  }
  const std::uint64_t d_end = std::uint64_t{1} << (sp.d_bits * sp.C.size());
  for (std::uint64_t e = e_begin; e < e_end; ++e) {
    for (std::uint64_t d = 0; d < d_end; ++d) {
      for (std::size_t cup = 0; cup < sp.cups.size(); ++cup) {
        if (auto rec = try_candidate(spec, candidate(sp, e, d, cup))) out.push_back(std::move(*rec));
      }
    }
  }
}

void check_budget(const SearchSpec& spec, std::uint64_t budget) {
  const std::uint64_t cost = estimated_cost(spec);
  if (cost > budget) throw BudgetExceeded(cost, budget);
  // Codes are packed into 64-bit integers.
  if (spec.P * spec.K * spec.C >= 63) throw BudgetExceeded(cost, budget);
}

}  // namespace

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::Correctness: return "correctness";
    case Constraint::S1: return "S1";
    case Constraint::S2: return "S2";
    case Constraint::S3: return "S3";
    case Constraint::S4: return "S4";
  }
  return "?";
}

Constraint parse_constraint(const std::string& s) {
  std::string l;
  for (char ch : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (l == "correctness") return Constraint::Correctness;
  if (l == "s1") return Constraint::S1;
  if (l == "s2") return Constraint::S2;
  if (l == "s3") return Constraint::S3;
  if (l == "s4") return Constraint::S4;
  throw PreconditionError("unknown constraint '" + s + "' (expected correctness, S1, S2, S3 or S4)");
}

std::uint64_t budget_from_env() {
  const char* env = std::getenv("RELCAT_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultBudget;
  char* end = nullptr;
  // strtoull wraps negative input instead of rejecting it.
  const unsigned long long v = !std::isdigit(static_cast<unsigned char>(*env)) ? 0 : std::strtoull(env, &end, 10);
  if (v == 0 || end == env || *end != '\0') {
    throw PreconditionError(std::string("RELCAT_BUDGET must be a positive integer, got '") + env + "'");
  }
  return v;
}

std::uint64_t candidate_count(const SearchSpec& spec) {
  const std::size_t cells = spec.P * spec.K * spec.C;
  return sat_mul(sat_mul(sat_pow2(cells), sat_pow2(cells)), factorial(spec.K));
}

std::uint64_t estimated_cost(const SearchSpec& spec) {
  const std::uint64_t checks = std::max<std::size_t>(1, spec.constraints.size());
  return sat_mul(candidate_count(spec), checks);
}

BudgetExceeded::BudgetExceeded(std::uint64_t cost, std::uint64_t budget)
    : Error("search refused: estimated cost " +
            (cost == kSat ? std::string("over 2^64") : std::to_string(cost)) +
            " equation checks exceeds the budget of " + std::to_string(budget) +
            " (set RELCAT_BUDGET to raise it)"),
      cost_(cost),
      budget_(budget) {}

std::string triple_bits(const ProtocolInstance& inst) {
  std::string s;
  append_bits(s, inst.E);
  for (const auto& r : inst.D.family) append_bits(s, r);
  append_bits(s, inst.eta.cup);
  return s;
}

ProtocolInstance instance_from_bits(std::size_t P, std::size_t K, std::size_t C,
                                    const std::string& bits) {
  const std::size_t need = 2 * P * K * C + K * K;
  if (bits.size() != need || bits.find_first_not_of("01") != std::string::npos) {
    throw ConstructionError("triple bit string must be " + std::to_string(need) + " characters of 0/1");
  }
  const FiniteSet p(P), k(K), c(C);
  std::size_t pos = 0;
  Rel E = rel_from(FiniteSet::product(p, k), c, bits, pos);
  std::vector<Rel> D;
  for (std::size_t i = 0; i < C; ++i) D.push_back(rel_from(k, p, bits, pos));
  const Rel cup = rel_from(FiniteSet::unit(), FiniteSet::product(k, k), bits, pos);
  return make_instance(p, k, c, std::move(E), std::move(D), duality_from_cup(k, cup));
}

bool evaluate(const ProtocolInstance& inst, Constraint c) {
  switch (c) {
    case Constraint::Correctness: return check_correctness(inst).holds;
    case Constraint::S1: return check_security(inst, Security::S1).holds;
    case Constraint::S2: return check_security(inst, Security::S2).holds;
    case Constraint::S3: return check_security(inst, Security::S3).holds;
    case Constraint::S4: return check_security(inst, Security::S4).holds;
  }
  return false;
}

namespace kernels {

std::vector<SolutionRecord> enumerate_serial(const SearchSpec& spec) {
  const Space sp = make_space(spec);
  std::vector<SolutionRecord> out;
  run_shard(spec, sp, std::nullopt, out);
  return out;
}

std::vector<SolutionRecord> enumerate_parallel(const SearchSpec& spec, int threads) {
  const Space sp = make_space(spec);
  const std::uint64_t shards = std::uint64_t{1} << sp.PK.size();
  std::vector<std::vector<SolutionRecord>> parts(shards);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(shards); ++i) {
    run_shard(spec, sp, static_cast<std::uint64_t>(i), parts[static_cast<std::size_t>(i)]);
  }
  std::vector<SolutionRecord> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace kernels

std::vector<SolutionRecord> enumerate(const SearchSpec& spec, const SearchOptions& opt) {
  check_budget(spec, opt.budget);
  auto out = opt.threads == 1 ? kernels::enumerate_serial(spec)
                              : kernels::enumerate_parallel(spec, opt.threads);
  return spec.dedup ? dedup(out) : out;
}

std::string canonical_bits(const ProtocolInstance& inst) {
  const std::size_t np = inst.P.size(), nk = inst.K.size(), nc = inst.C.size();
  std::vector<std::size_t> sp(np), sk(nk), sc(nc);
  std::iota(sp.begin(), sp.end(), 0);
  std::string best;
  std::string cur;
  do {
    std::iota(sk.begin(), sk.end(), 0);
    do {
      std::iota(sc.begin(), sc.end(), 0);
      do {
        // Relabel and read the bits straight off, in the record layout.
        std::string e(nc * np * nk, '0');
        std::string d(nc * np * nk, '0');
        std::string eta(nk * nk, '0');
        for (std::size_t c = 0; c < nc; ++c) {
          for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t k = 0; k < nk; ++k) {
              const std::size_t at = (sc[c] * np + sp[p]) * nk + sk[k];
              if (inst.E.test(p * nk + k, c)) e[at] = '1';
              if (inst.D.family[c].test(k, p)) d[at] = '1';
            }
          }
        }
        for (std::size_t k = 0; k < nk; ++k) {
          for (std::size_t k2 = 0; k2 < nk; ++k2) {
            if (inst.eta.cup.test(0, k * nk + k2)) eta[sk[k] * nk + sk[k2]] = '1';
          }
        }
        cur = e + d + eta;
        if (best.empty() || cur < best) best = cur;
      } while (std::next_permutation(sc.begin(), sc.end()));
    } while (std::next_permutation(sk.begin(), sk.end()));
  } while (std::next_permutation(sp.begin(), sp.end()));
  return best;
}

std::vector<SolutionRecord> dedup(const std::vector<SolutionRecord>& records) {
  std::map<std::string, SolutionRecord> reps;
  for (const auto& r : records) {
    if (reps.count(r.canonical_bits)) continue;
    SolutionRecord c = r;
    if (r.bits != r.canonical_bits) {
      c.instance = instance_from_bits(r.instance.P.size(), r.instance.K.size(),
                                      r.instance.C.size(), r.canonical_bits);
      c.bits = r.canonical_bits;
    }
    reps.emplace(r.canonical_bits, std::move(c));
  }
  std::vector<SolutionRecord> out;
  for (auto& [k, v] : reps) out.push_back(std::move(v));
  return out;
}

void check_theorems(const ProtocolInstance& inst, TheoremReport& report) {
  ++report.examined;
  if (!check_correctness(inst).holds) return;
  ++report.correct;
  const std::string bits = triple_bits(inst);
  auto fail = [&](std::string claim, std::string detail) {
    report.counterexamples.push_back({bits, std::move(claim), std::move(detail)});
  };

  for (std::size_t c = 0; c < inst.D.family.size(); ++c) {
    if (!predicates(inst.D.family[c]).is_bijection) {
      fail("decryption invertible", "D fiber for ciphertext " + std::to_string(c) + " is not a bijection");
    }
  }
  try {
    const DInverse di = derive_D_inverse(inst);
    if (!di.verdict.holds) fail("decryption invertible", di.verdict.witness.value_or(""));
    const EquationVerdict rec = reconstruct_E(inst, di.inverse);
    if (!rec.holds) fail("E from D inverse", rec.witness.value_or(""));
  } catch (const Error& e) {
    fail("decryption invertible", e.what());
  }
  const NoninvertibilityVerdict ni = check_E_noninvertible(inst);
  if (ni.exempt) ++report.exempt;
  if (!ni.verdict.holds) fail("E not invertible", ni.verdict.witness.value_or(""));

  const ImplicationReport imp = check_implications(inst);
  if (imp.s1) {
    ++report.with_s1;
  } else {
    ++report.s1_failing;
  }
  if (!imp.holds) {
    std::string which;
    if (!imp.s2) which += " S2";
    if (!imp.s3) which += " S3";
    if (!imp.s4) which += " S4";
    fail("S1 implies S2, S3, S4", "S1 holds but" + which + " fail");
  }
}

namespace {

// Half uniform draws, half draws built around a working instance with a few
// bits flipped; uniform draws alone almost never hit a correct triple once
// the sizes grow.
ProtocolInstance sample_candidate(const Space& sp, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> pick_cup(0, sp.cups.size() - 1);
  const DualityPair& eta = sp.cups[pick_cup(rng)];
  const std::size_t np = sp.P.size(), nk = sp.K.size(), nc = sp.C.size();
  std::vector<Rel> family;
  Rel E(sp.PK, sp.C);
  if (coin(rng)) {
    for (std::size_t c = 0; c < nc; ++c) {
      Rel r(sp.K, sp.P);
      for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t p = 0; p < np; ++p) r.set(k, p, coin(rng));
      }
      family.push_back(std::move(r));
    }
    for (std::size_t a = 0; a < np * nk; ++a) {
      for (std::size_t c = 0; c < nc; ++c) E.set(a, c, coin(rng));
    }
  } else {
    // D fibers: random functions (bijections when the sizes allow), E read
    // off through the cup so that decryption undoes encryption.
    std::vector<std::size_t> key_partner(nk);
    for (std::size_t k = 0; k < nk; ++k) key_partner[k] = eta.cup.image(0).at(k) % nk;
    for (std::size_t c = 0; c < nc; ++c) {
      std::vector<std::size_t> f(nk);
      if (nk == np) {
        std::iota(f.begin(), f.end(), 0);
        std::shuffle(f.begin(), f.end(), rng);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, np - 1);
        for (auto& x : f) x = pick(rng);
      }
      family.push_back(Rel::graph(sp.K, sp.P, f));
      for (std::size_t k = 0; k < nk; ++k) E.set(f[key_partner[k]] * nk + k, c);
    }
    const double flip = 1.0 / static_cast<double>(2 * np * nk * nc);
    std::bernoulli_distribution flip_bit(flip);
    for (std::size_t a = 0; a < np * nk; ++a) {
      for (std::size_t c = 0; c < nc; ++c) {
        if (flip_bit(rng)) E.set(a, c, !E.test(a, c));
      }
    }
    for (auto& r : family) {
      for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t p = 0; p < np; ++p) {
          if (flip_bit(rng)) r.set(k, p, !r.test(k, p));
        }
      }
    }
  }
  return make_instance(sp.P, sp.K, sp.C, std::move(E), std::move(family), eta);
}

void merge(TheoremReport& into, const TheoremReport& part) {
  into.examined += part.examined;
  into.correct += part.correct;
  into.with_s1 += part.with_s1;
  into.s1_failing += part.s1_failing;
  into.exempt += part.exempt;
  into.counterexamples.insert(into.counterexamples.end(), part.counterexamples.begin(),
                              part.counterexamples.end());
}

}  // namespace

TheoremReport verify_theorems(const SearchSpec& spec, const TheoremOptions& opt) {
  TheoremReport report;
  report.spec = spec;
  SearchSpec correct_only = spec;
  correct_only.constraints = {Constraint::Correctness};
  correct_only.dedup = false;
  const Space sp = make_space(spec);
  const int nt = opt.threads > 0 ? opt.threads : omp_get_max_threads();

  bool exhaustive = true;
  try {
    check_budget(correct_only, opt.budget);
  } catch (const BudgetExceeded&) {
    exhaustive = false;
  }

  if (exhaustive) {
    const auto sols = opt.threads == 1 ? kernels::enumerate_serial(correct_only)
                                       : kernels::enumerate_parallel(correct_only, opt.threads);
    report.examined = candidate_count(correct_only);
    std::vector<TheoremReport> parts(sols.size());
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(sols.size()); ++i) {
      check_theorems(sols[static_cast<std::size_t>(i)].instance, parts[static_cast<std::size_t>(i)]);
    }
    for (const auto& p : parts) {
      TheoremReport q = p;
      q.examined = 0;
      merge(report, q);
    }
    return report;
  }

  // Draw serially so the stream only depends on the seed, then check in
  // parallel and merge in draw order.
  report.sampled = true;
  std::mt19937_64 rng(opt.seed);
  std::vector<ProtocolInstance> draws;
  draws.reserve(opt.samples);
  for (std::uint64_t i = 0; i < opt.samples; ++i) draws.push_back(sample_candidate(sp, rng));
  std::vector<TheoremReport> parts(draws.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(nt)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(draws.size()); ++i) {
    check_theorems(draws[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(i)]);
  }
  for (const auto& p : parts) merge(report, p);
  return report;
}

}  // namespace relcat
