#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "relcat/dsl.hpp"
#include "relcat/protocols.hpp"
#include "relcat/search.hpp"
#include "support.hpp"

using namespace relcat;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> spec_files() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(RELCAT_SPECS_DIR)) {
    if (e.path().extension() == ".rcat") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string spec_text(const std::string& name) { return slurp(fs::path(RELCAT_SPECS_DIR) / (name + ".rcat")); }

bool expects_unequal(const std::string& text) { return text.rfind("# expect: unequal", 0) == 0; }

dsl::ParseError parse_error(const std::string& text) {
  try {
    dsl::parse(text);
  } catch (const dsl::ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return dsl::ParseError({}, "");
}

dsl::ElabError elab_error(const std::string& text) {
  try {
    dsl::elaborate(dsl::parse(text));
  } catch (const dsl::ElabError& e) {
    return e;
  }
  FAIL("no elaboration error for: " << text);
  return dsl::ElabError({}, "");
}

ProtocolInstance instance_of(const dsl::Program& prog) {
  const auto D = prog.controlled_gen("D");
  const auto E = prog.scalar_gen("E");
  const auto eta = prog.scalar_gen("eta");
  REQUIRE(D.has_value());
  REQUIRE(E.has_value());
  REQUIRE(eta.has_value());
  const FiniteSet& K = D->in_private;
  return make_instance(D->out_private, K, D->public_carrier,
                       E->relabel(FiniteSet::product(D->out_private, K), D->public_carrier), D->family,
                       duality_from_cup(K, eta->relabel(FiniteSet::unit(), FiniteSet::product(K, K))));
}

bool all_equal(const dsl::FileRun& run) {
  for (const auto& r : run.reports) {
    if (r.verdict != dsl::CheckReport::Verdict::Equal) return false;
  }
  return !run.reports.empty();
}

}  // namespace

TEST_CASE("every spec round-trips through the printer") {
  const auto files = spec_files();
  CHECK(files.size() >= 20);
  for (const auto& p : files) {
    INFO(p.filename().string());
    const dsl::SourceFile f = dsl::parse(slurp(p));
    const std::string printed = dsl::print(f);
    const dsl::SourceFile g = dsl::parse(printed);
    CHECK(g == f);
    CHECK(dsl::print(g) == printed);
  }
}

TEST_CASE("terms and types print with minimal parentheses") {
  for (const char* t : {"a ; b ; c", "a . b * c", "(a ; b) . c", "id(P) . eta ; E . id(K)", "publish(C)"}) {
    INFO(t);
    const dsl::Term term = dsl::parse_term(t);
    CHECK(dsl::parse_term(dsl::print(term)) == term);
  }
  CHECK(dsl::print(dsl::parse_term("((a))")) == "a");
  CHECK(dsl::parse_term("a ; b ; c") == dsl::parse_term("(a ; b) ; c"));
  CHECK_FALSE(dsl::parse_term("a ; b . c") == dsl::parse_term("(a ; b) . c"));
}

TEST_CASE("parse errors carry a location and the expected tokens") {
  {
    const auto e = parse_error("def = ;\n");
    CHECK(e.loc().line == 1);
    CHECK(e.loc().col == 5);
    CHECK(std::find(e.expected().begin(), e.expected().end(), "identifier") != e.expected().end());
  }
  {
    const auto e = parse_error("set P = 2 @\n");
    CHECK(e.loc().line == 1);
    CHECK(e.loc().col == 11);
  }
  {
    const auto e = parse_error("set P = 2\ndef x = id(P\n");
    CHECK(e.loc().line == 3);
    CHECK(std::find(e.expected().begin(), e.expected().end(), "')'") != e.expected().end());
  }
  CHECK_THROWS_AS(dsl::parse_term("a ;"), dsl::ParseError);
  CHECK(dsl::to_string(dsl::Loc{4, 7}) == "4:7");
}

TEST_CASE("elaboration errors name the problem and where it is") {
  auto has = [](const dsl::ElabError& e, const std::string& s) {
    return std::string(e.what()).find(s) != std::string::npos;
  };
  {
    const auto e = elab_error("set P = 2\nset P = 3\n");
    CHECK(e.loc().line == 2);
    CHECK(has(e, "already declared"));
  }
  {
    const auto e = elab_error("set P = 2\ndef x = id(Q)\n");
    CHECK(e.loc().line == 2);
    CHECK(has(e, "'Q'"));
  }
  {
    const auto e = elab_error("set P = 2\nset K = 3\ndef x = id(P) ; id(K)\n");
    CHECK(e.loc().line == 3);
    CHECK(has(e, "cannot compose"));
  }
  CHECK(has(elab_error("set P = 2\ngen E : P -> P = {0 -> 5}\n"), "out of range"));
  CHECK(has(elab_error("set P = 2\ndef x = id(P)\ncheck x == y\n"), "'y'"));
}

TEST_CASE("run_checks exit codes") {
  CHECK(dsl::run_checks(spec_text("otp_correctness")).exit_code == 0);
  const dsl::FileRun broken = dsl::run_checks(spec_text("otp_broken_decryption"));
  CHECK(broken.exit_code == 1);
  REQUIRE(broken.reports.size() == 1);
  CHECK(broken.reports[0].verdict == dsl::CheckReport::Verdict::Unequal);
  CHECK(broken.reports[0].difference.has_value());
  CHECK_FALSE(broken.reports[0].message.empty());
  const dsl::FileRun mistyped = dsl::run_checks("set P = 2\nset K = 3\ndef x = id(P)\ndef y = id(K)\ncheck x == y\n");
  CHECK(mistyped.exit_code == 2);
  CHECK(mistyped.reports[0].verdict == dsl::CheckReport::Verdict::TypeError);
  CHECK(std::string(dsl::verdict_name(dsl::CheckReport::Verdict::Equal)) == "equal");
}

TEST_CASE("every spec reaches the verdict its header announces") {
  for (const auto& p : spec_files()) {
    INFO(p.filename().string());
    const std::string text = slurp(p);
    CHECK(dsl::run_checks(text).exit_code == (expects_unequal(text) ? 1 : 0));
  }
}

TEST_CASE("protocol specs agree with the programmatic checkers on the same instance") {
  const std::map<std::string, std::function<bool(const ProtocolInstance&)>> verdicts = {
      {"otp_correctness", [](const auto& i) { return check_correctness(i).holds; }},
      {"otp_correctness_drawn", [](const auto& i) { return check_correctness_unsimplified(i).holds; }},
      {"otp_broken_decryption", [](const auto& i) { return check_correctness(i).holds; }},
      {"otp_security_s1", [](const auto& i) { return check_security(i, Security::S1).holds; }},
      {"otp_security_s2", [](const auto& i) { return check_security(i, Security::S2).holds; }},
      {"otp_security_s3", [](const auto& i) { return check_security(i, Security::S3).holds; }},
      {"otp_security_s4", [](const auto& i) { return check_security(i, Security::S4).holds; }},
      {"group3_correctness", [](const auto& i) { return check_correctness(i).holds; }},
      {"group3_security",
       [](const auto& i) {
         return check_security(i, Security::S1).holds && check_security(i, Security::S2).holds &&
                check_security(i, Security::S3).holds;
       }},
      {"secret_sharing",
       [](const auto& i) {
         const SecretSharingResult r = secret_sharing_from_otp(i);
         return r.correctness.holds && r.erase_first.holds && r.erase_second.holds;
       }},
  };
  for (const auto& [name, verdict] : verdicts) {
    INFO(name);
    const std::string text = spec_text(name);
    const dsl::Program prog = dsl::elaborate(dsl::parse(text));
    const ProtocolInstance inst = instance_of(prog);
    const bool dsl_holds = all_equal(dsl::run_checks(text));
    CHECK(dsl_holds == verdict(inst));
    CHECK(dsl_holds == !expects_unequal(text));
  }
  const ProtocolInstance pad = instance_of(dsl::elaborate(dsl::parse(spec_text("otp_correctness"))));
  CHECK(triple_bits(pad) == triple_bits(single_bit_instance()));
  const ProtocolInstance g3 = instance_of(dsl::elaborate(dsl::parse(spec_text("group3_correctness"))));
  CHECK(triple_bits(g3) == triple_bits(group_instance(3)));
}

TEST_CASE("structure and key-exchange specs agree with the programmatic checkers") {
  CHECK(all_equal(dsl::run_checks(spec_text("dh_q3"))) == check_dh(dh_instance(3)).holds);
  CHECK(all_equal(dsl::run_checks(spec_text("dh_q5"))) == check_dh(dh_instance(5)).holds);
  CHECK(all_equal(dsl::run_checks(spec_text("dh_q5_identity"))) == check_dh(dh_instance(5, true)).holds);
  CHECK_FALSE(check_dh(dh_instance(5, true)).holds);
  CHECK(all_equal(dsl::run_checks(spec_text("snake_left"))) == snake_check(canonical_cup(FiniteSet(3))));
  CHECK(all_equal(dsl::run_checks(spec_text("snake_right"))) == snake_check(canonical_cup(FiniteSet(3))));
  CHECK(all_equal(dsl::run_checks(spec_text("twist_delete"))) == twist_delete_check(FiniteSet(3)));
  const bool frob = all_hold(frobenius_check(region_structure(FiniteSet(3))));
  for (const char* f : {"frobenius_counit", "frobenius_unit", "frobenius_special"}) {
    INFO(f);
    CHECK(all_equal(dsl::run_checks(spec_text(f))) == frob);
  }
  CHECK(all_equal(dsl::run_checks(spec_text("frobenius_closed"))) ==
        all_hold(frobenius_check(region_structure(FiniteSet(2)))));
  const dsl::Program cc = dsl::elaborate(dsl::parse(spec_text("controlled_copy")));
  const auto op = cc.controlled_gen("D");
  REQUIRE(op.has_value());
  CHECK(all_equal(dsl::run_checks(spec_text("controlled_copy"))) == controlled_lemma_holds(*op));
}

TEST_CASE("generator lookups distinguish plain and controlled generators") {
  const dsl::Program prog = dsl::elaborate(dsl::parse(spec_text("otp_correctness")));
  CHECK(prog.scalar_gen("E").has_value());
  CHECK_FALSE(prog.scalar_gen("D").has_value());
  CHECK(prog.controlled_gen("D").has_value());
  CHECK_FALSE(prog.controlled_gen("E").has_value());
  CHECK_FALSE(prog.scalar_gen("nothing").has_value());
  CHECK(prog.has_def("lhs"));
  CHECK(prog.checks().size() == 1);
  const TwoCell lhs = prog.evaluate("lhs");
  const dsl::TypedTerm t = prog.infer(dsl::parse_term("lhs"));
  CHECK(lhs.dom() == t.dom);
  CHECK(lhs.cod() == t.cod);
}
