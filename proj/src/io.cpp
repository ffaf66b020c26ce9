#include "epi/io.hpp"

#include <chrono>
#include <cstdio>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "epi/essential.hpp"
#include "epi/fundamental.hpp"
#include "epi/witness.hpp"

namespace epi {

const char* to_string(CheckMode m) {
  switch (m) {
    case CheckMode::Fundamental: return "fundamental";
    case CheckMode::Essential: return "essential";
    case CheckMode::Both: return "both";
  }
  return "?";
}

std::optional<CheckMode> parse_check_mode(const std::string& s) {
  if (s == "fundamental") return CheckMode::Fundamental;
  if (s == "essential") return CheckMode::Essential;
  if (s == "both") return CheckMode::Both;
  return std::nullopt;
}

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based column of the first character
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;  // comment until end of line
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r' && line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

[[noreturn]] void fail(int line, int col, std::string msg) {
  throw ParseError{line, col, std::move(msg)};
}

Rational parse_rational_token(int line, const Token& t) {
  const auto q = Rational::parse(t.text);
  if (!q.has_value())
    fail(line, t.col, "expected a rational literal (\"p/q\", integer, or "
                      "finite decimal), got '" + t.text + "'");
  return *q;
}

bool parse_on_off(int line, const Token& t) {
  if (t.text == "on") return true;
  if (t.text == "off") return false;
  fail(line, t.col, "expected 'on' or 'off', got '" + t.text + "'");
}

}  // namespace

InputDocument parse_input(std::istream& in) {
  InputDocument doc;
  std::string line;
  int lineno = 0;
  bool instance_open = false;

  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const Token& head = toks.front();

    if (head.text == "instance") {
      InputInstance inst;
      inst.line = lineno;
      for (size_t k = 1; k < toks.size(); ++k) {
        if (k > 1) inst.name += ' ';
        inst.name += toks[k].text;
      }
      doc.instances.push_back(std::move(inst));
      instance_open = true;
    } else if (head.text == "pair") {
      if (toks.size() != 5)
        fail(lineno, head.col,
             "pair needs exactly four values: x1 x2 y1 y2");
      if (!instance_open) {
        InputInstance inst;
        inst.line = lineno;
        doc.instances.push_back(std::move(inst));
        instance_open = true;
      }
      Correspondence c;
      c.x1 = parse_rational_token(lineno, toks[1]);
      c.x2 = parse_rational_token(lineno, toks[2]);
      c.y1 = parse_rational_token(lineno, toks[3]);
      c.y2 = parse_rational_token(lineno, toks[4]);
      doc.instances.back().corrs.push_back(c);
    } else if (head.text == "mode") {
      if (toks.size() != 2)
        fail(lineno, head.col, "mode needs exactly one value");
      const auto m = parse_check_mode(toks[1].text);
      if (!m.has_value())
        fail(lineno, toks[1].col,
             "unknown mode '" + toks[1].text +
                 "' (expected fundamental, essential, or both)");
      doc.mode = m;
    } else if (head.text == "option") {
      if (toks.size() != 3)
        fail(lineno, head.col, "option needs a name and 'on' or 'off'");
      if (toks[1].text != "witness" && toks[1].text != "early_exit_rank4")
        fail(lineno, toks[1].col,
             "unknown option '" + toks[1].text +
                 "' (expected witness or early_exit_rank4)");
      const bool value = parse_on_off(lineno, toks[2]);
      if (toks[1].text == "witness")
        doc.witness = value;
      else
        doc.early_exit_rank4 = value;
    } else {
      fail(lineno, head.col,
           "unknown directive '" + head.text +
               "' (expected instance, pair, mode, or option)");
    }
  }

  if (doc.instances.empty())
    fail(lineno > 0 ? lineno : 1, 1, "no correspondences in input");
  for (const auto& inst : doc.instances)
    if (inst.corrs.empty())
      fail(inst.line, 1,
           "instance" + (inst.name.empty() ? "" : " '" + inst.name + "'") +
               " has no correspondences");
  return doc;
}

std::string to_decimal(const Rational& q, unsigned digits, int dir) {
  const Integer scale = pow10(digits);
  const Integer num = Integer(q.num()) * scale;
  const Integer den = q.den();
  Integer n;
  if (dir > 0)
    mpz_cdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  else
    mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());

  const bool neg = sgn(n) < 0;
  const Integer a = ::abs(n);
  const Integer ip = a / scale;
  std::string frac = Integer(a % scale).get_str();
  frac.insert(frac.begin(), digits - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();

  std::string out = neg ? "-" : "";
  out += ip.get_str();
  if (!frac.empty()) out += "." + frac;
  if (out == "-0") out = "0";
  return out;
}

std::string format_input(const std::vector<Correspondence>& corrs,
                         const std::string& header_comment) {
  std::string out;
  if (!header_comment.empty()) {
    std::istringstream hs(header_comment);
    std::string hline;
    while (std::getline(hs, hline)) out += "# " + hline + "\n";
  }
  for (const auto& c : corrs)
    out += "pair " + c.x1.str() + " " + c.x2.str() + " " + c.y1.str() + " " +
           c.y2.str() + "\n";
  return out;
}

namespace {

using json = nlohmann::ordered_json;

/// Decimal places used when an interval witness is rendered. The midpoint
/// entries are truncated toward minus infinity at this many places, so the
/// printed radius is padded by two units in the last place to keep the
/// printed box a true enclosure.
constexpr unsigned kIntervalDigits = 50;

Rational padded_radius(const Rational& radius) {
  return radius + Rational(Integer(2), pow10(kIntervalDigits));
}

/// Largest k <= 99 with radius <= 10^-k, as a short display string.
std::string radius_exponent_bound(const Rational& radius) {
  unsigned k = 0;
  while (k < 99 && radius <= Rational(Integer(1), pow10(k + 1))) ++k;
  return "10^-" + std::to_string(k);
}

std::string witness_text(const WitnessMatrix& w, const std::string& indent) {
  std::string out;
  if (w.exact()) {
    out += indent + "witness exact: [";
    for (int i = 0; i < 3; ++i) {
      if (i) out += "; ";
      for (int j = 0; j < 3; ++j) {
        if (j) out += " ";
        out += w.value.at(i, j).str();
      }
    }
    out += "]\n";
    return out;
  }
  const Rational pad = padded_radius(w.radius);
  out += indent + "witness interval (each entry within " +
         radius_exponent_bound(pad) + "): [";
  for (int i = 0; i < 3; ++i) {
    if (i) out += "; ";
    for (int j = 0; j < 3; ++j) {
      if (j) out += " ";
      out += to_decimal(w.value.at(i, j), kIntervalDigits, -1);
    }
  }
  out += "]\n";
  return out;
}

json witness_json(const WitnessMatrix& w) {
  json out;
  out["exact"] = w.exact();
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j)
      row.push_back(w.exact() ? w.value.at(i, j).str()
                              : to_decimal(w.value.at(i, j), kIntervalDigits, -1));
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  if (!w.exact()) {
    const Rational pad = padded_radius(w.radius);
    out["radius"] = pad.str();
    out["radius_decimal"] = to_decimal(pad, kIntervalDigits + 10, 1);
  }
  return out;
}

const char* tri_text(Tri t) { return to_string(t); }

}  // namespace

std::string run_checks(const InputDocument& doc, const CliOverrides& o) {
  const CheckMode mode = o.mode ? *o.mode : doc.mode.value_or(CheckMode::Both);
  const bool witness =
      o.witness ? *o.witness : doc.witness.value_or(false);
  FundamentalOptions fopts;
  fopts.early_exit_rank4 = o.early_exit_rank4 ? *o.early_exit_rank4
                                              : doc.early_exit_rank4.value_or(false);

  const bool run_f = mode != CheckMode::Essential;
  const bool run_e = mode != CheckMode::Fundamental;

  std::string text;
  json jdoc;
  jdoc["schema"] = "epicheck/1";
  jdoc["mode"] = to_string(mode);
  json jinstances = json::array();

  for (size_t idx = 0; idx < doc.instances.size(); ++idx) {
    const InputInstance& inst = doc.instances[idx];
    const auto t0 = std::chrono::steady_clock::now();
    const DataMatrices d = build_data_matrices(inst.corrs);

    std::optional<FundamentalVerdict> fv;
    std::optional<EssentialVerdict> ev;
    if (run_f) fv = exists_fundamental(d.Z, fopts);
    if (run_e) ev = exists_essential(d.Z);
    const int rank_z = fv ? fv->rank_z : ev->rank_z;
    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();

    if (o.json) {
      json ji;
      ji["index"] = idx + 1;
      if (!inst.name.empty()) ji["name"] = inst.name;
      ji["m"] = inst.corrs.size();
      ji["rank_z"] = rank_z;
      if (fv) {
        json jf;
        jf["exists"] = fv->exists;
        jf["reason"] = to_string(fv->reason);
        if (witness && fv->witness) jf["witness"] = witness_json(*fv->witness);
        ji["fundamental"] = std::move(jf);
      }
      if (ev) {
        json je;
        je["complex"] = tri_text(ev->complex_exists);
        je["real"] = tri_text(ev->real_exists);
        je["trace"] = ev->trace;
        if (witness && ev->witness) je["witness"] = witness_json(*ev->witness);
        ji["essential"] = std::move(je);
      }
      if (o.include_timing) ji["time_ms"] = ms;
      jinstances.push_back(std::move(ji));
    } else {
      text += "instance " + std::to_string(idx + 1);
      if (!inst.name.empty()) text += " (" + inst.name + ")";
      text += ": m=" + std::to_string(inst.corrs.size()) +
              " rank(Z)=" + std::to_string(rank_z) + "\n";
      if (fv) {
        text += std::string("  fundamental: exists=") +
                (fv->exists ? "true" : "false") +
                " reason=" + to_string(fv->reason) + "\n";
        if (witness && fv->witness) text += witness_text(*fv->witness, "    ");
      }
      if (ev) {
        text += std::string("  essential: complex=") +
                tri_text(ev->complex_exists) +
                " real=" + tri_text(ev->real_exists) + " trace=" + ev->trace +
                "\n";
        if (witness && ev->witness) text += witness_text(*ev->witness, "    ");
      }
      if (o.include_timing) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "  time: %.1f ms\n", ms);
        text += buf;
      }
    }
  }

  if (o.json) {
    jdoc["instances"] = std::move(jinstances);
    return jdoc.dump(2) + "\n";
  }
  return text;
}

}  // namespace epi
