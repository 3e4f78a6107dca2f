#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "prelax/io.hpp"

namespace prelax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw JsonError((where.empty() ? std::string("/") : where) + ": " + msg);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0 || v > std::numeric_limits<int>::max()) fail(where, "exponent out of range");
  return static_cast<int>(v);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

/// null or "inf"/"-inf" encode infinite bounds.
double bound(const Json& j, double infinite, const std::string& where) {
  if (j.is_null()) return infinite;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(where, "unknown bound \"" + s + "\"");
  }
  return number(j, where);
}

Json bound_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json exponent_list(const std::vector<Exponent>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(to_json(e));
  return out;
}

std::vector<Exponent> exponent_list_from(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of exponent vectors");
  std::vector<Exponent> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(exponent_from_json(j[i], n, at(where, i)));
  return out;
}

Json pattern_meta(const Pattern& p) {
  Json m = {{"kind", to_string(p.kind)}};
  if (p.shift) m["shift"] = to_json(*p.shift);
  if (const auto* g = p.gamma()) m["gamma"] = {{"columns", exponent_list(g->columns)}, {"half_degree", g->half_degree}};
  if (const auto* c = p.circuit()) {
    m["circuit"] = {{"beta", to_json(c->beta)}, {"gammas", exponent_list(c->gammas)}, {"lambda", c->lambda}};
  }
  if (const auto* s = p.sos_block()) m["sos_block"] = {{"basis", exponent_list(s->basis)}, {"multiplier", to_json(s->multiplier)}};
  return m;
}

void apply_meta(Pattern& p, const Json& m, std::size_t n, const std::string& where) {
  if (!m.is_object()) fail(where, "expected an object");
  if (m.contains("kind")) {
    try {
      p.kind = pattern_kind_from_string(m["kind"].get<std::string>());
    } catch (const std::exception& e) {
      fail(at(where, "kind"), e.what());
    }
  }
  if (m.contains("shift")) p.shift = exponent_from_json(m["shift"], n, at(where, "shift"));
  if (m.contains("gamma")) {
    const auto w = at(where, "gamma");
    GammaInfo g;
    g.columns = exponent_list_from(require_field(m["gamma"], "columns", w), n, at(w, "columns"));
    g.half_degree = static_cast<int>(number(require_field(m["gamma"], "half_degree", w), at(w, "half_degree")));
    p.info = g;
  }
  if (m.contains("circuit")) {
    const auto w = at(where, "circuit");
    const Json& c = m["circuit"];
    CircuitInfo info;
    info.beta = exponent_from_json(require_field(c, "beta", w), n, at(w, "beta"));
    info.gammas = exponent_list_from(require_field(c, "gammas", w), n, at(w, "gammas"));
    const Json& l = require_field(c, "lambda", w);
    if (!l.is_array() || l.size() != info.gammas.size()) fail(at(w, "lambda"), "expected one weight per vertex");
    for (std::size_t i = 0; i < l.size(); ++i) info.lambda.push_back(number(l[i], at(at(w, "lambda"), i)));
    p.info = info;
  }
  if (m.contains("sos_block")) {
    const auto w = at(where, "sos_block");
    SosBlockInfo s;
    s.basis = exponent_list_from(require_field(m["sos_block"], "basis", w), n, at(w, "basis"));
    s.multiplier = exponent_from_json(require_field(m["sos_block"], "multiplier", w), n, at(w, "multiplier"));
    p.info = s;
  }
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw JsonError(std::string("syntax error: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return parse_json(read_text_file(path));
  } catch (const JsonError& e) {
    throw JsonError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

const Json& require_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

Json to_json(const Exponent& e) { return e.entries(); }

Json to_json(const Polynomial& f) {
  Json terms = Json::array();
  for (const auto& [a, c] : f.terms()) {
    Json t = a.entries();
    t.push_back(c);
    terms.push_back(std::move(t));
  }
  return {{"n", f.dim()}, {"terms", std::move(terms)}};
}

Json to_json(const Box& box) {
  Json l = Json::array(), u = Json::array();
  for (std::size_t i = 0; i < box.dim(); ++i) {
    l.push_back(bound_json(box.lower()[i]));
    u.push_back(bound_json(box.upper()[i]));
  }
  return {{"l", std::move(l)}, {"u", std::move(u)}};
}

Json to_json(const PatternFamily& fam, const std::string& kind) {
  Json patterns = Json::array(), meta = Json::array();
  for (const auto& p : fam.patterns) {
    patterns.push_back(exponent_list({p.exponents.begin(), p.exponents.end()}));
    meta.push_back(pattern_meta(p));
  }
  return {{"kind", kind}, {"patterns", std::move(patterns)}, {"meta", {{"n", fam.dim}, {"patterns", std::move(meta)}}}};
}

Json to_json(const Instance& inst) {
  Json j = {{"id", inst.id}, {"tag", inst.tag}, {"seed", inst.seed}, {"polynomial", to_json(inst.f)}, {"box", to_json(inst.box)}};
  if (inst.family) j["family"] = to_json(*inst.family);
  return j;
}

Exponent exponent_from_json(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an exponent vector");
  if (j.size() != n) fail(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  std::vector<int> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(integer(j[i], at(where, i)));
  return Exponent(std::move(e));
}

Polynomial polynomial_from_json(const Json& j, const std::string& where) {
  const Json& jn = require_field(j, "n", where);
  if (!jn.is_number_integer() || jn.get<long long>() < 0) fail(at(where, "n"), "expected a nonnegative integer");
  const auto n = jn.get<std::size_t>();
  const Json& terms = require_field(j, "terms", where);
  if (!terms.is_array()) fail(at(where, "terms"), "expected an array");
  Polynomial f(n);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto w = at(at(where, "terms"), k);
    const Json& t = terms[k];
    if (!t.is_array() || t.size() != n + 1) fail(w, "expected " + std::to_string(n) + " exponents and a coefficient");
    std::vector<int> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(integer(t[i], at(w, i)));
    f.add_term(Exponent(std::move(e)), number(t[n], at(w, n)));
  }
  return f;
}

Box box_from_json(const Json& j, std::size_t n, const std::string& where) {
  const Json& l = require_field(j, "l", where);
  const Json& u = require_field(j, "u", where);
  if (!l.is_array() || l.size() != n) fail(at(where, "l"), "expected " + std::to_string(n) + " bounds");
  if (!u.is_array() || u.size() != n) fail(at(where, "u"), "expected " + std::to_string(n) + " bounds");
  std::vector<double> lo, hi;
  for (std::size_t i = 0; i < n; ++i) {
    lo.push_back(bound(l[i], -kInf, at(at(where, "l"), i)));
    hi.push_back(bound(u[i], kInf, at(at(where, "u"), i)));
  }
  try {
    return Box(lo, hi);
  } catch (const InvalidArgument& e) {
    fail(where, e.what());
  }
}

PatternFamily family_from_json(const Json& j, const std::string& where) {
  const Json& patterns = require_field(j, "patterns", where);
  if (!patterns.is_array()) fail(at(where, "patterns"), "expected an array of patterns");
  const Json* meta = j.contains("meta") ? &j["meta"] : nullptr;
  std::size_t n = 0;
  if (meta && meta->contains("n")) {
    n = static_cast<std::size_t>(integer((*meta)["n"], at(at(where, "meta"), "n")));
  } else if (!patterns.empty() && patterns[0].is_array() && !patterns[0].empty() && patterns[0][0].is_array()) {
    n = patterns[0][0].size();
  } else {
    fail(at(where, "meta"), "missing field \"n\" and no pattern to infer it from");
  }
  const Json* per = meta && meta->contains("patterns") ? &(*meta)["patterns"] : nullptr;
  if (per && (!per->is_array() || per->size() != patterns.size())) {
    fail(at(at(where, "meta"), "patterns"), "expected one entry per pattern");
  }
  PatternFamily fam;
  fam.dim = n;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const auto w = at(at(where, "patterns"), k);
    const auto list = exponent_list_from(patterns[k], n, w);
    if (list.empty()) fail(w, "empty pattern");
    Pattern p;
    p.exponents = ExponentSet(list.begin(), list.end());
    if (per) apply_meta(p, (*per)[k], n, at(at(at(where, "meta"), "patterns"), k));
    fam.patterns.push_back(std::move(p));
  }
  return fam;
}

Instance instance_from_json(const Json& j) {
  Instance inst;
  if (j.contains("id")) inst.id = j["id"].get<std::string>();
  if (j.contains("tag")) inst.tag = j["tag"].get<std::string>();
  if (j.contains("seed")) inst.seed = j["seed"].get<std::uint64_t>();
  inst.f = polynomial_from_json(require_field(j, "polynomial", ""), "/polynomial");
  inst.box = j.contains("box") ? box_from_json(j["box"], inst.f.dim(), "/box") : Box::unit(inst.f.dim());
  if (j.contains("family")) {
    inst.family = family_from_json(j["family"], "/family");
    if (inst.family->dim != inst.f.dim()) fail("/family", "dimension differs from the polynomial");
  }
  return inst;
}

}  // namespace prelax
