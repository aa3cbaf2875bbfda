#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "relcat/dsl.hpp"
#include "relcat/protocols.hpp"
#include "relcat/search.hpp"

namespace relcat::cli {

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

// Group sizes above this make the bubble checks slow without adding anything.
constexpr int kGroupCap = 8;

struct Config {
  int threads = 0;
  std::uint64_t seed = 1;
  std::string format = "human";
  bool timings = false;
  bool json() const { return format == "json"; }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json verdict_json(const EquationVerdict& v) {
  ordered_json j;
  j["holds"] = v.holds;
  j["witness"] = v.witness ? ordered_json(*v.witness) : ordered_json(nullptr);
  return j;
}

void human_verdict(std::ostream& out, const std::string& key, const EquationVerdict& v,
                   const std::string& note = {}) {
  out << (v.holds ? "PASS " : "FAIL ") << key;
  if (!note.empty()) out << " (" << note << ")";
  if (v.witness) out << ": " << *v.witness;
  out << "\n";
}

ordered_json matrix_json(const Rel& r) { return r.matrix_rows(); }

ordered_json instance_json(const ProtocolInstance& inst) {
  ordered_json j;
  j["sizes"] = {inst.P.size(), inst.K.size(), inst.C.size()};
  j["bits"] = triple_bits(inst);
  j["E"] = matrix_json(inst.E);
  ordered_json d = ordered_json::array();
  for (const auto& r : inst.D.family) d.push_back(matrix_json(r));
  j["D"] = d;
  j["eta"] = matrix_json(inst.eta.cup);
  return j;
}

// ---- check ----------------------------------------------------------------

int cmd_check(const Config& cfg, const std::string& path, std::ostream& out) {
  const std::string text = read_file(path);
  const dsl::FileRun run = dsl::run_checks(text);
  std::size_t equal = 0;
  for (const auto& r : run.reports) equal += r.verdict == dsl::CheckReport::Verdict::Equal;
  if (cfg.json()) {
    ordered_json j;
    j["command"] = "check";
    j["file"] = path;
    ordered_json checks = ordered_json::array();
    for (const auto& r : run.reports) {
      ordered_json c;
      c["name"] = r.name;
      c["line"] = r.loc.line;
      c["verdict"] = dsl::verdict_name(r.verdict);
      c["message"] = r.message;
      checks.push_back(c);
    }
    j["checks"] = checks;
    j["equal"] = equal;
    j["total"] = run.reports.size();
    j["passed"] = run.exit_code == kPass;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& r : run.reports) {
      const char* tag = r.verdict == dsl::CheckReport::Verdict::Equal     ? "PASS "
                        : r.verdict == dsl::CheckReport::Verdict::Unequal ? "FAIL "
                                                                          : "TYPE ";
      out << tag << path << ":" << r.loc.line << " " << r.name;
      if (r.verdict != dsl::CheckReport::Verdict::Equal) out << ": " << r.message;
      out << "\n";
    }
    out << equal << "/" << run.reports.size() << " checks equal\n";
  }
  return run.exit_code;
}

// ---- verify-otp -----------------------------------------------------------

ProtocolInstance instance_from_file(const std::string& path) {
  const dsl::Program prog = dsl::elaborate(dsl::parse(read_file(path)));
  const auto D = prog.controlled_gen("D");
  const auto E = prog.scalar_gen("E");
  const auto eta = prog.scalar_gen("eta");
  if (!D || !E || !eta) {
    throw UsageError(path + ": needs plain generators E and eta and a controlled generator D");
  }
  const FiniteSet& P = D->out_private;
  const FiniteSet& K = D->in_private;
  const FiniteSet& C = D->public_carrier;
  return make_instance(P, K, C, E->relabel(FiniteSet::product(P, K), C), D->family,
                       duality_from_cup(K, eta->relabel(FiniteSet::unit(), FiniteSet::product(K, K))));
}

int cmd_verify_otp(const Config& cfg, int group, const std::string& file, std::ostream& out) {
  if (group != 0 && !file.empty()) throw UsageError("give either --group or --file, not both");
  if (group == 0 && file.empty()) throw UsageError("verify-otp needs --group n or --file path");
  if (group != 0 && (group < 1 || group > kGroupCap)) {
    throw UsageError("--group must be between 1 and " + std::to_string(kGroupCap));
  }
  const auto t0 = Clock::now();
  const ProtocolInstance inst = group != 0 ? group_instance(group) : instance_from_file(file);

  std::vector<std::pair<std::string, EquationVerdict>> rows;
  std::vector<std::string> notes;
  auto add = [&](std::string key, EquationVerdict v, std::string note = {}) {
    rows.emplace_back(std::move(key), std::move(v));
    notes.push_back(std::move(note));
  };
  const EquationVerdict corr = check_correctness(inst);
  add("correctness", corr);
  add("correctness_drawn", check_correctness_unsimplified(inst));
  for (Security s : {Security::S1, Security::S2, Security::S3, Security::S4}) {
    add(security_name(s), check_security(inst, s));
  }
  if (corr.holds) {
    const DInverse di = derive_D_inverse(inst);
    add("D_inverse", di.verdict);
    add("E_reconstruction", reconstruct_E(inst, di.inverse));
  } else {
    const EquationVerdict skip{"", false, "not evaluated: correctness fails"};
    add("D_inverse", skip);
    add("E_reconstruction", skip);
  }
  const NoninvertibilityVerdict ni = check_E_noninvertible(inst);
  add("E_noninvertible", ni.verdict, ni.exempt ? "exempt: trivial message space" : "");
  const ImplicationReport imp = check_implications(inst);
  EquationVerdict impv{"", imp.holds, std::nullopt};
  if (!imp.holds) impv.witness = "S1 holds but S2, S3 or S4 fails";
  add("S1_implies_S2_S3_S4", impv, imp.vacuous ? "vacuous: S1 fails" : "");

  bool passed = true;
  for (const auto& [k, v] : rows) passed = passed && v.holds;
  if (cfg.json()) {
    ordered_json j;
    j["command"] = "verify-otp";
    j["source"] = group != 0 ? ordered_json{{"group", group}} : ordered_json{{"file", file}};
    j["instance"] = instance_json(inst);
    ordered_json checks;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ordered_json v = verdict_json(rows[i].second);
      if (rows[i].first == "E_noninvertible") {
        v["exempt"] = ni.exempt;
        v["has_inverse"] = ni.has_inverse;
      }
      if (rows[i].first == "S1_implies_S2_S3_S4") v["vacuous"] = imp.vacuous;
      checks[rows[i].first] = v;
    }
    j["checks"] = checks;
    j["passed"] = passed;
    if (cfg.timings) j["elapsed_ms"] = ms_since(t0);
    out << j.dump(2) << "\n";
  } else {
    out << "instance " << inst.P.size() << "," << inst.K.size() << "," << inst.C.size() << " bits "
        << triple_bits(inst) << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) human_verdict(out, rows[i].first, rows[i].second, notes[i]);
    out << (passed ? "all checks pass" : "some checks fail") << "\n";
  }
  return passed ? kPass : kFail;
}

// ---- verify-dh ------------------------------------------------------------

int cmd_verify_dh(const Config& cfg, unsigned q, bool include_identity, std::ostream& out) {
  if (!is_prime(q) || q > kDHPrimeCap) {
    throw UsageError("--prime must be a prime no larger than " + std::to_string(kDHPrimeCap) + ", got " +
                     std::to_string(q));
  }
  const auto t0 = Clock::now();
  const DHInstance dh = dh_instance(q, include_identity);
  const EquationVerdict v = check_dh(dh);
  if (cfg.json()) {
    ordered_json j;
    j["command"] = "verify-dh";
    j["q"] = q;
    j["include_identity"] = include_identity;
    ordered_json bases = ordered_json::array();
    for (std::size_t b : dh.base_set) bases.push_back(dh.elements.label(b));
    j["bases"] = bases;
    j["checks"] = {{"key_agreement", verdict_json(v)}};
    j["passed"] = v.holds;
    if (cfg.timings) j["elapsed_ms"] = ms_since(t0);
    out << j.dump(2) << "\n";
  } else {
    out << "q = " << q << ", " << dh.base_set.size() << " bases" << (include_identity ? " (identity included)" : "")
        << "\n";
    human_verdict(out, "key_agreement", v);
  }
  return v.holds ? kPass : kFail;
}

// ---- enumerate ------------------------------------------------------------

SearchSpec parse_sizes(const std::string& s) {
  std::vector<std::size_t> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    long n = 0;
    try {
      n = std::stol(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || part.empty() || n < 1) throw UsageError("--sizes must be three positive integers p,k,c");
    v.push_back(static_cast<std::size_t>(n));
  }
  if (v.size() != 3) throw UsageError("--sizes must be three positive integers p,k,c");
  SearchSpec spec;
  spec.P = v[0];
  spec.K = v[1];
  spec.C = v[2];
  return spec;
}

std::vector<Constraint> parse_constraints(const std::string& s) {
  std::vector<Constraint> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      const Constraint c = parse_constraint(part);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

ordered_json spec_json(const SearchSpec& spec) {
  ordered_json c = ordered_json::array();
  for (Constraint x : spec.constraints) c.push_back(constraint_name(x));
  return {{"sizes", {spec.P, spec.K, spec.C}}, {"constraints", c}, {"dedup", spec.dedup}};
}

int refuse(const Config& cfg, const BudgetExceeded& e, std::ostream& out, std::ostream& err) {
  if (cfg.json()) {
    ordered_json j;
    j["type"] = "refusal";
    j["estimated_cost"] = e.cost();
    j["budget"] = e.budget();
    out << j.dump() << "\n";
  }
  err << "relcat: " << e.what() << "\n";
  return kUsage;
}

int cmd_enumerate(const Config& cfg, SearchSpec spec, std::uint64_t budget, std::ostream& out,
                  std::ostream& err) {
  const auto t0 = Clock::now();
  std::vector<SolutionRecord> recs;
  try {
    recs = enumerate(spec, SearchOptions{cfg.threads, budget});
  } catch (const BudgetExceeded& e) {
    return refuse(cfg, e, out, err);
  }
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const SolutionRecord& r = recs[i];
    if (cfg.json()) {
      ordered_json j;
      j["type"] = "solution";
      j["index"] = i;
      const ordered_json inst = instance_json(r.instance);
      for (auto it = inst.begin(); it != inst.end(); ++it) j[it.key()] = it.value();
      ordered_json verdicts;
      for (std::size_t c = 0; c < kConstraintCount; ++c) {
        verdicts[constraint_name(static_cast<Constraint>(c))] = r.verdicts[c];
      }
      j["verdicts"] = verdicts;
      j["canonical"] = r.canonical_bits;
      out << j.dump() << "\n";
    } else {
      out << "#" << i << " " << r.bits;
      for (std::size_t c = 0; c < kConstraintCount; ++c) {
        out << " " << constraint_name(static_cast<Constraint>(c)) << "=" << (r.verdicts[c] ? "yes" : "no");
      }
      out << "\n";
    }
  }
  if (cfg.json()) {
    ordered_json j;
    j["type"] = "summary";
    const ordered_json sj = spec_json(spec);
    for (auto it = sj.begin(); it != sj.end(); ++it) j[it.key()] = it.value();
    j["candidates"] = candidate_count(spec);
    j["estimated_cost"] = estimated_cost(spec);
    j["solutions"] = recs.size();
    if (cfg.timings) j["elapsed_ms"] = ms_since(t0);
    out << j.dump() << "\n";
  } else {
    out << recs.size() << (spec.dedup ? " solutions up to relabelling" : " solutions") << " among "
        << candidate_count(spec) << " candidates\n";
  }
  return kPass;
}

// ---- theorems -------------------------------------------------------------

int cmd_theorems(const Config& cfg, SearchSpec spec, std::uint64_t budget, std::uint64_t samples,
                 std::ostream& out) {
  const auto t0 = Clock::now();
  TheoremOptions opt;
  opt.threads = cfg.threads;
  opt.budget = budget;
  opt.samples = samples;
  opt.seed = cfg.seed;
  const TheoremReport rep = verify_theorems(spec, opt);
  if (cfg.json()) {
    ordered_json j;
    j["command"] = "theorems";
    j["sizes"] = {spec.P, spec.K, spec.C};
    j["mode"] = rep.sampled ? "sampled" : "exhaustive";
    j["seed"] = cfg.seed;
    j["examined"] = rep.examined;
    j["correct"] = rep.correct;
    j["with_s1"] = rep.with_s1;
    j["s1_failing"] = rep.s1_failing;
    j["exempt"] = rep.exempt;
    ordered_json cx = ordered_json::array();
    for (const auto& c : rep.counterexamples) {
      cx.push_back({{"bits", c.bits}, {"claim", c.claim}, {"detail", c.detail}});
    }
    j["counterexamples"] = cx;
    j["passed"] = rep.holds();
    if (cfg.timings) j["elapsed_ms"] = ms_since(t0);
    out << j.dump(2) << "\n";
  } else {
    out << "sizes " << spec.P << "," << spec.K << "," << spec.C << " "
        << (rep.sampled ? "sampled" : "exhaustive") << ": " << rep.examined << " candidates, " << rep.correct
        << " correct, " << rep.with_s1 << " also S1, " << rep.s1_failing << " without S1, " << rep.exempt
        << " exempt\n";
    for (const auto& c : rep.counterexamples) out << "COUNTEREXAMPLE " << c.bits << " " << c.claim << ": " << c.detail << "\n";
    out << (rep.holds() ? "no counterexamples" : std::to_string(rep.counterexamples.size()) + " counterexamples")
        << "\n";
    if (cfg.timings) out << "elapsed " << static_cast<long>(ms_since(t0)) << " ms\n";
  }
  return rep.holds() ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verifier and synthesizer for relational protocol diagrams", "relcat"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--threads", cfg.threads, "Worker threads (0: all cores, 1: serial)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "Seed for sampled runs");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"human", "json"}));
  app.add_flag("--timings", cfg.timings, "Report elapsed time (makes output run-dependent)");

  std::string check_file;
  auto* check = app.add_subcommand("check", "Run the check statements of a spec file");
  check->add_option("FILE", check_file, "Spec file")->required();

  int group = 0;
  std::string otp_file;
  auto* otp = app.add_subcommand("verify-otp", "Verify an encryption instance");
  otp->add_option("--group", group, "Use the group Z_n instance");
  otp->add_option("--file", otp_file, "Spec file declaring E, D and eta");

  unsigned prime = 0;
  bool include_identity = false;
  auto* dh = app.add_subcommand("verify-dh", "Verify key agreement over a cyclic group");
  dh->add_option("--prime", prime, "Group order q")->required();
  dh->add_flag("--include-identity", include_identity, "Allow the identity as a base");

  std::string sizes = "2,2,2";
  std::string constraints = "correctness";
  bool dedup_flag = false;
  auto* en = app.add_subcommand("enumerate", "Enumerate instances satisfying constraints");
  en->add_option("--sizes", sizes, "p,k,c")->required();
  en->add_option("--constraints", constraints, "Comma-separated: correctness,S1,S2,S3,S4");
  en->add_flag("--dedup", dedup_flag, "One record per relabelling orbit");

  std::string th_sizes = "2,2,2";
  std::uint64_t samples = TheoremOptions{}.samples;
  auto* th = app.add_subcommand("theorems", "Check the encryption theorems over all correct instances");
  th->add_option("--sizes", th_sizes, "p,k,c");
  th->add_option("--samples", samples, "Samples when exhaustive search is over budget")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "relcat: " << e.what() << "\n" << "run 'relcat --help' for usage\n";
    return kUsage;
  }

  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  try {
    if (*check) return cmd_check(cfg, check_file, out);
    if (*otp) return cmd_verify_otp(cfg, group, otp_file, out);
    if (*dh) return cmd_verify_dh(cfg, prime, include_identity, out);
    const std::uint64_t budget = budget_from_env();
    if (*en) {
      SearchSpec spec = parse_sizes(sizes);
      spec.constraints = parse_constraints(constraints);
      spec.dedup = dedup_flag;
      return cmd_enumerate(cfg, spec, budget, out, err);
    }
    if (*th) return cmd_theorems(cfg, parse_sizes(th_sizes), budget, samples, out);
  } catch (const dsl::ParseError& e) {
    err << "relcat: parse error at " << e.what() << "\n";
    return kUsage;
  } catch (const dsl::ElabError& e) {
    err << "relcat: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "relcat: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "relcat: " << e.what() << "\n";
    return kUsage;
  } catch (const ConstructionError& e) {
    err << "relcat: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace relcat::cli
