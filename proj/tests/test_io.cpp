#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "epi/essential.hpp"
#include "epi/fundamental.hpp"
#include "epi/io.hpp"
#include "fixtures.hpp"

using namespace epi;

namespace {

InputDocument parse_str(const std::string& text) {
  std::istringstream in(text);
  return parse_input(in);
}

ParseError parse_failure(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_input(in);
  } catch (const ParseError& e) {
    return e;
  }
  REQUIRE_MESSAGE(false, "expected a parse error");
  return {};
}

struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
  FILE* p = ::popen((cmd + " 2>&1").c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = ::pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/epicheck_io_" + name + ".txt";
  std::ofstream f(path);
  REQUIRE(f.good());
  f << text;
  return path;
}

const std::string kBin = EPICHECK_BIN;

}  // namespace

TEST_CASE("input parsing accepts directives, comments, and literal forms") {
  const auto doc = parse_str(
      "# leading comment\n"
      "mode fundamental\n"
      "option witness on\n"
      "option early_exit_rank4 off\n"
      "\n"
      "instance second one\t# trailing comment\n"
      "pair 0.25 -.5 1/3 -7\n"
      "pair 1 2 3 4\r\n"
      "instance\n"
      "\tpair\t5\t6\t7\t8\n");
  REQUIRE(doc.instances.size() == 2);
  CHECK(doc.mode == CheckMode::Fundamental);
  CHECK(doc.witness == true);
  CHECK(doc.early_exit_rank4 == false);

  const InputInstance& a = doc.instances[0];
  CHECK(a.name == "second one");
  CHECK(a.line == 6);
  REQUIRE(a.corrs.size() == 2);
  CHECK(a.corrs[0].x1 == Rational(1, 4));
  CHECK(a.corrs[0].x2 == Rational(-1, 2));
  CHECK(a.corrs[0].y1 == Rational(1, 3));
  CHECK(a.corrs[0].y2 == Rational(-7));
  CHECK(a.corrs[1].y2 == Rational(4));

  const InputInstance& b = doc.instances[1];
  CHECK(b.name.empty());
  CHECK(b.line == 9);
  REQUIRE(b.corrs.size() == 1);
  CHECK(b.corrs[0].x1 == Rational(5));
}

TEST_CASE("a bare pair opens an unnamed instance") {
  const auto doc = parse_str("pair 1 2 3 4\npair 5 6 7 8\n");
  REQUIRE(doc.instances.size() == 1);
  CHECK(doc.instances[0].name.empty());
  CHECK(doc.instances[0].line == 1);
  CHECK(doc.instances[0].corrs.size() == 2);
  CHECK(!doc.mode.has_value());
  CHECK(!doc.witness.has_value());
  CHECK(!doc.early_exit_rank4.has_value());
}

TEST_CASE("repeated mode and option directives keep the last value") {
  const auto doc = parse_str(
      "mode essential\nmode both\noption witness on\noption witness off\n"
      "pair 1 2 3 4\n");
  CHECK(doc.mode == CheckMode::Both);
  CHECK(doc.witness == false);
}

TEST_CASE("parse errors carry 1-based line and column positions") {
  SUBCASE("wrong pair arity") {
    const auto e = parse_failure("# c\npair 1 2 3\n");
    CHECK(e.line == 2);
    CHECK(e.col == 1);
    CHECK(e.message.find("four values") != std::string::npos);
  }
  SUBCASE("bad rational literal") {
    const auto e = parse_failure("pair 1 2 3 4e5\n");
    CHECK(e.line == 1);
    CHECK(e.col == 12);
    CHECK(e.message.find("4e5") != std::string::npos);
  }
  SUBCASE("unknown mode") {
    const auto e = parse_failure("pair 1 2 3 4\nmode wrong\n");
    CHECK(e.line == 2);
    CHECK(e.col == 6);
  }
  SUBCASE("unknown option name") {
    const auto e = parse_failure("option speed fast\npair 1 2 3 4\n");
    CHECK(e.line == 1);
    CHECK(e.col == 8);
  }
  SUBCASE("option needs on or off") {
    const auto e = parse_failure("option witness yes\npair 1 2 3 4\n");
    CHECK(e.line == 1);
    CHECK(e.col == 16);
  }
  SUBCASE("unknown directive") {
    const auto e = parse_failure("point 1 2 3 4\n");
    CHECK(e.line == 1);
    CHECK(e.col == 1);
    CHECK(e.message.find("point") != std::string::npos);
  }
  SUBCASE("empty input") {
    const auto e = parse_failure("");
    CHECK(e.line == 1);
    CHECK(e.col == 1);
  }
  SUBCASE("comments only") {
    const auto e = parse_failure("# nothing\n# here\n");
    CHECK(e.line == 2);
  }
  SUBCASE("trailing instance without pairs") {
    const auto e =
        parse_failure("instance full\npair 1 2 3 4\ninstance empty\n");
    CHECK(e.line == 3);
    CHECK(e.message.find("empty") != std::string::npos);
  }
  SUBCASE("leading instance without pairs") {
    const auto e = parse_failure("instance lonely\ninstance full\npair 1 2 3 4\n");
    CHECK(e.line == 1);
    CHECK(e.message.find("lonely") != std::string::npos);
  }
}

TEST_CASE("check mode names round-trip") {
  for (const CheckMode m :
       {CheckMode::Fundamental, CheckMode::Essential, CheckMode::Both}) {
    const auto back = parse_check_mode(to_string(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(!parse_check_mode("Fundamental").has_value());
  CHECK(!parse_check_mode("").has_value());
}

TEST_CASE("decimal rendering rounds in the requested direction") {
  CHECK(to_decimal(Rational(1, 3), 5, -1) == "0.33333");
  CHECK(to_decimal(Rational(1, 3), 5, +1) == "0.33334");
  CHECK(to_decimal(Rational(-1, 3), 5, -1) == "-0.33334");
  CHECK(to_decimal(Rational(-1, 3), 5, +1) == "-0.33333");
  CHECK(to_decimal(Rational(2, 3), 2, -1) == "0.66");
  CHECK(to_decimal(Rational(2, 3), 2, +1) == "0.67");

  // Terminating values print exactly under both roundings, trailing zeros
  // trimmed.
  CHECK(to_decimal(Rational(1, 4), 5, -1) == "0.25");
  CHECK(to_decimal(Rational(1, 4), 5, +1) == "0.25");
  CHECK(to_decimal(Rational(-7, 2), 3, -1) == "-3.5");
  CHECK(to_decimal(Rational(-7, 2), 3, +1) == "-3.5");
  CHECK(to_decimal(Rational(42), 6, -1) == "42");
  CHECK(to_decimal(Rational(0), 6, +1) == "0");

  // Values below the resolution collapse toward the requested side.
  const Rational tiny(Integer(1), pow10(6));
  CHECK(to_decimal(tiny, 5, -1) == "0");
  CHECK(to_decimal(tiny, 5, +1) == "0.00001");
  CHECK(to_decimal(-tiny, 5, -1) == "-0.00001");
  CHECK(to_decimal(-tiny, 5, +1) == "0");
}

TEST_CASE("format_input round-trips through the parser") {
  std::vector<Correspondence> corrs = {
      {Rational(1, 4), Rational(-1, 2), Rational(1, 3), Rational(-7)},
      {Rational(0), Rational(5), Rational(22, 7), Rational(1)},
  };
  const std::string text = format_input(corrs, "first line\nsecond line");
  CHECK(text.find("# first line\n") != std::string::npos);
  CHECK(text.find("# second line\n") != std::string::npos);

  const auto doc = parse_str(text);
  REQUIRE(doc.instances.size() == 1);
  REQUIRE(doc.instances[0].corrs.size() == 2);
  for (size_t i = 0; i < corrs.size(); ++i) {
    CHECK(doc.instances[0].corrs[i].x1 == corrs[i].x1);
    CHECK(doc.instances[0].corrs[i].x2 == corrs[i].x2);
    CHECK(doc.instances[0].corrs[i].y1 == corrs[i].y1);
    CHECK(doc.instances[0].corrs[i].y2 == corrs[i].y2);
  }
}

TEST_CASE("text report is byte-stable with timing off") {
  const auto doc = parse_str("instance tiny\npair 1 2 3 4\n");
  CliOverrides o;
  o.witness = true;
  o.include_timing = false;
  const std::string expected =
      "instance 1 (tiny): m=1 rank(Z)=1\n"
      "  fundamental: exists=true reason=DetNotCube\n"
      "    witness exact: [1 1 1; 3 3 3; 3 3 -69]\n"
      "  essential: complex=yes real=yes trace=rank1\n"
      "    witness exact: [0 0 1; 0 0 -1; -1 1 0]\n";
  CHECK(run_checks(doc, o) == expected);
  CHECK(run_checks(doc, o) == run_checks(doc, o));
}

TEST_CASE("document options apply and command-line overrides win") {
  const auto doc =
      parse_str("mode fundamental\noption witness on\npair 1 2 3 4\n");

  CliOverrides plain;
  plain.include_timing = false;
  const std::string from_doc = run_checks(doc, plain);
  CHECK(from_doc.find("fundamental:") != std::string::npos);
  CHECK(from_doc.find("essential:") == std::string::npos);
  CHECK(from_doc.find("witness exact") != std::string::npos);

  CliOverrides flip;
  flip.include_timing = false;
  flip.mode = CheckMode::Essential;
  flip.witness = false;
  const std::string overridden = run_checks(doc, flip);
  CHECK(overridden.find("fundamental:") == std::string::npos);
  CHECK(overridden.find("essential:") != std::string::npos);
  CHECK(overridden.find("witness") == std::string::npos);
}

TEST_CASE("timing lines appear exactly when requested") {
  const auto doc = parse_str("pair 1 2 3 4\n");
  CliOverrides with;
  CHECK(run_checks(doc, with).find("time:") != std::string::npos);
  CliOverrides without;
  without.include_timing = false;
  CHECK(run_checks(doc, without).find("time:") == std::string::npos);

  with.json = true;
  without.json = true;
  CHECK(run_checks(doc, with).find("time_ms") != std::string::npos);
  CHECK(run_checks(doc, without).find("time_ms") == std::string::npos);
}

TEST_CASE("early-exit option switches the reported reason on low rank") {
  // Two repeated pairs: rank(Z) = 2.
  const auto doc = parse_str("pair 1 2 3 4\npair 1 2 3 4\npair 5 6 7 8\n");
  CliOverrides off;
  off.include_timing = false;
  off.mode = CheckMode::Fundamental;
  CHECK(run_checks(doc, off).find("reason=DetNotCube") != std::string::npos);

  CliOverrides on = off;
  on.early_exit_rank4 = true;
  CHECK(run_checks(doc, on).find("reason=RankLE4") != std::string::npos);

  // The document can request it too.
  const auto doc2 = parse_str(
      "option early_exit_rank4 on\npair 1 2 3 4\npair 1 2 3 4\npair 5 6 7 8\n");
  CHECK(run_checks(doc2, off).find("reason=RankLE4") != std::string::npos);
}

TEST_CASE("json report carries the same verdicts in structured form") {
  const auto doc = parse_str(
      "instance named thing\npair 1 2 3 4\ninstance\npair 0 0 0 0\n");
  CliOverrides o;
  o.json = true;
  o.witness = true;
  o.include_timing = false;
  const auto j = nlohmann::json::parse(run_checks(doc, o));

  CHECK(j.at("schema") == "epicheck/1");
  CHECK(j.at("mode") == "both");
  REQUIRE(j.at("instances").size() == 2);

  const auto& a = j.at("instances").at(0);
  CHECK(a.at("index") == 1);
  CHECK(a.at("name") == "named thing");
  CHECK(a.at("m") == 1);
  CHECK(a.at("rank_z") == 1);
  CHECK(a.at("fundamental").at("exists") == true);
  CHECK(a.at("fundamental").at("reason") == "DetNotCube");
  CHECK(a.at("essential").at("complex") == "yes");
  CHECK(a.at("essential").at("real") == "yes");
  CHECK(a.at("essential").at("trace") == "rank1");
  CHECK(!a.contains("time_ms"));

  const auto& w = a.at("fundamental").at("witness");
  CHECK(w.at("exact") == true);
  REQUIRE(w.at("rows").size() == 3);
  REQUIRE(w.at("rows").at(0).size() == 3);
  CHECK(w.at("rows").at(0).at(0) == "1");
  CHECK(!w.contains("radius"));

  const auto& b = j.at("instances").at(1);
  CHECK(!b.contains("name"));
  CHECK(b.at("index") == 2);
}

TEST_CASE("interval witnesses serialise as decimals with a padded radius") {
  // Three correspondences whose only compatible rotations are irrational, so
  // the essential witness is an enclosure rather than an exact matrix.
  const auto doc = parse_str(
      "mode essential\npair 1 1 1 0\npair 1 -1 0 2\npair 2 0 1 1\n");
  CliOverrides o;
  o.json = true;
  o.witness = true;
  o.include_timing = false;
  const auto j = nlohmann::json::parse(run_checks(doc, o));
  const auto& e = j.at("instances").at(0).at("essential");
  CHECK(e.at("real") == "yes");
  const auto& w = e.at("witness");
  REQUIRE(w.at("exact") == false);

  // The advertised radius is an exact rational, also bounded in decimal, and
  // stays within the library's 10^-40 guarantee plus the print padding.
  const auto radius = Rational::parse(w.at("radius").get<std::string>());
  REQUIRE(radius.has_value());
  CHECK(radius->sign() > 0);
  CHECK(*radius <= Rational(Integer(11), pow10(41)));

  const auto rdec = w.at("radius_decimal").get<std::string>();
  const auto rd = Rational::parse(rdec);
  REQUIRE(rd.has_value());
  CHECK(*radius <= *rd);  // decimal form rounds up

  // Entries are plain decimals with at most 50 fractional digits, each within
  // one print-unit of the exact midpoint (rounded down), so the padded radius
  // really covers the true witness.
  for (const auto& row : w.at("rows")) {
    REQUIRE(row.size() == 3);
    for (const auto& cell : row) {
      const std::string s = cell.get<std::string>();
      const auto q = Rational::parse(s);
      REQUIRE(q.has_value());
      const auto dot = s.find('.');
      if (dot != std::string::npos) CHECK(s.size() - dot - 1 <= 50);
    }
  }

  // The text rendering advertises the same bound.
  CliOverrides t = o;
  t.json = false;
  const std::string text = run_checks(doc, t);
  CHECK(text.find("witness interval (each entry within 10^-40)") !=
        std::string::npos);
}

TEST_CASE("reports agree with direct library calls on a generated scene") {
  const auto doc = parse_str("pair 2 3 5 7\npair 1 0 2 1\npair 4 4 1 3\n"
                             "pair 0 1 1 1\npair 3 2 0 5\n");
  CliOverrides o;
  o.json = true;
  o.include_timing = false;
  const auto j = nlohmann::json::parse(run_checks(doc, o));

  const DataMatrices d = build_data_matrices(doc.instances[0].corrs);
  const FundamentalVerdict fv = exists_fundamental(d.Z);
  const EssentialVerdict ev = exists_essential(d.Z);

  const auto& inst = j.at("instances").at(0);
  CHECK(inst.at("rank_z") == fv.rank_z);
  CHECK(inst.at("fundamental").at("exists") == fv.exists);
  CHECK(inst.at("fundamental").at("reason") == to_string(fv.reason));
  CHECK(inst.at("essential").at("complex") == to_string(ev.complex_exists));
  CHECK(inst.at("essential").at("real") == to_string(ev.real_exists));
  CHECK(inst.at("essential").at("trace") == ev.trace);
}

TEST_CASE("command line: check succeeds with exit 0 and stable text") {
  const auto path = write_temp("ok", "instance tiny\npair 1 2 3 4\n");
  const auto r =
      run_cmd(kBin + " check --witness --no-timing " + path);
  CHECK(r.code == 0);
  CHECK(r.out.find("instance 1 (tiny): m=1 rank(Z)=1") != std::string::npos);
  CHECK(r.out.find("witness exact: [1 1 1; 3 3 3; 3 3 -69]") !=
        std::string::npos);
}

TEST_CASE("command line: parse errors report file:line:col and exit 2") {
  const auto path = write_temp("bad", "# c\npair 1 2 3\n");
  const auto r = run_cmd(kBin + " check " + path);
  CHECK(r.code == 2);
  CHECK(r.out.find(path + ":2:1: pair needs exactly four values") !=
        std::string::npos);
}

TEST_CASE("command line: missing file, bad mode, and bad usage exit 2") {
  CHECK(run_cmd(kBin + " check /nonexistent_epicheck_input").code == 2);
  const auto path = write_temp("mode", "pair 1 2 3 4\n");
  CHECK(run_cmd(kBin + " check --mode sideways " + path).code == 2);
  CHECK(run_cmd(kBin).code == 2);
  CHECK(run_cmd(kBin + " frobnicate").code == 2);
  CHECK(run_cmd(kBin + " gen --m 5").code == 2);  // no generator selected
  CHECK(run_cmd(kBin + " gen --degenerate bogus --m 5").code == 2);
  CHECK(run_cmd(kBin +
                " gen --degenerate rank_deficient --m 4 --target-rank 8")
            .code == 2);
  CHECK(run_cmd(kBin + " --help").code == 0);
}

TEST_CASE("command line: generated scenes check clean end to end") {
  const auto gen = run_cmd(kBin + " gen --scene --m 7 --seed 42 --calibrated");
  REQUIRE(gen.code == 0);
  CHECK(gen.out.find("# scene m=7 seed=42 calibrated") != std::string::npos);

  const auto path = write_temp("scene", gen.out);
  const auto chk = run_cmd(kBin + " check --no-timing " + path);
  REQUIRE(chk.code == 0);
  CHECK(chk.out.find("fundamental: exists=true") != std::string::npos);
  CHECK(chk.out.find("essential: complex=yes real=yes") != std::string::npos);

  // Same seed, same bytes.
  const auto again =
      run_cmd(kBin + " gen --scene --m 7 --seed 42 --calibrated");
  CHECK(again.out == gen.out);
}

TEST_CASE("command line: degenerate generators honour their parameters") {
  const auto gen = run_cmd(
      kBin + " gen --degenerate collinear_split --m 6 --seed 3 --tau 0 1 2");
  REQUIRE(gen.code == 0);
  const auto doc = parse_str(gen.out);
  REQUIRE(doc.instances.size() == 1);
  CHECK(doc.instances[0].corrs.size() == 6);

  // The x-points named by tau really are collinear.
  const DataMatrices d = build_data_matrices(doc.instances[0].corrs);
  RatMatrix sel(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sel.at(i, j) = d.X.at(i, j);
  CHECK(rank(sel) <= 2);

  const auto rd = run_cmd(
      kBin + " gen --degenerate rank_deficient --m 9 --seed 4 --target-rank 3");
  REQUIRE(rd.code == 0);
  const auto doc2 = parse_str(rd.out);
  const DataMatrices d2 = build_data_matrices(doc2.instances[0].corrs);
  CHECK(rank(d2.Z) == 3);
}

TEST_CASE("command line: --out writes the same bytes as stdout") {
  const std::string out_path = "/tmp/epicheck_io_outfile.txt";
  std::remove(out_path.c_str());
  const auto direct = run_cmd(kBin + " gen --scene --m 5 --seed 8");
  REQUIRE(direct.code == 0);
  const auto filed =
      run_cmd(kBin + " gen --scene --m 5 --seed 8 -o " + out_path);
  REQUIRE(filed.code == 0);
  std::ifstream f(out_path);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == direct.out);
}

TEST_CASE("command line: json output parses and matches the text verdict") {
  const auto path = write_temp("json", "pair 1 2 3 4\npair 5 6 7 8\n");
  const auto r = run_cmd(kBin + " check --json --no-timing " + path);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("schema") == "epicheck/1");
  CHECK(j.at("instances").at(0).at("m") == 2);
}
