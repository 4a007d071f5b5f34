#include "pathgain/poly.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <sstream>

#include "pathgain/error.hpp"
#include "pathgain/io.hpp"

namespace pathgain {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) raise(ErrorKind::InvalidArgument, "coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) raise(ErrorKind::InvalidArgument, "coefficient overflow");
  return r;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial_before(a, b); }
};

using Accumulator = std::map<Monomial, std::int64_t, MonoLess>;

Poly collect(const Accumulator& acc) {
  std::vector<Term> terms;
  for (const auto& [mono, c] : acc) {
    if (c != 0) terms.push_back(Term{c, mono});
  }
  return Poly::from_terms(std::move(terms));
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool valid_name(const std::string& name) {
  static const std::regex pattern(R"([A-Za-z0-9_().,\-]+)");
  return std::regex_match(name, pattern);
}

}  // namespace

bool monomial_before(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

Poly Poly::constant(std::int64_t c) {
  Poly p;
  if (c != 0) p.terms_.push_back(Term{c, {}});
  return p;
}

Poly Poly::variable(int v) {
  Poly p;
  p.terms_.push_back(Term{1, {v}});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  Accumulator acc;
  for (auto& t : terms) {
    std::sort(t.mono.begin(), t.mono.end());
    auto& slot = acc[t.mono];
    slot = checked_add(slot, t.coeff);
  }
  Poly p;
  for (auto& [mono, c] : acc) {
    if (c != 0) p.terms_.push_back(Term{c, mono});
  }
  return p;
}

std::int64_t Poly::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.empty()) return terms_.back().coeff;
  return 0;
}

int Poly::degree() const noexcept {
  return terms_.empty() ? 0 : static_cast<int>(terms_.front().mono.size());
}

std::set<int> Poly::variables() const {
  std::set<int> out;
  for (const auto& t : terms_) out.insert(t.mono.begin(), t.mono.end());
  return out;
}

bool Poly::contains(int v) const {
  for (const auto& t : terms_) {
    if (std::binary_search(t.mono.begin(), t.mono.end(), v)) return true;
  }
  return false;
}

std::int64_t Poly::linear_coeff(int v) const {
  for (const auto& t : terms_) {
    if (t.mono.size() == 1 && t.mono[0] == v) return t.coeff;
  }
  return 0;
}

Poly Poly::operator+(const Poly& o) const {
  Accumulator acc;
  for (const auto& t : terms_) acc[t.mono] = t.coeff;
  for (const auto& t : o.terms_) {
    auto& slot = acc[t.mono];
    slot = checked_add(slot, t.coeff);
  }
  return collect(acc);
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  Accumulator acc;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      auto& slot = acc[merge(a.mono, b.mono)];
      slot = checked_add(slot, checked_mul(a.coeff, b.coeff));
    }
  }
  return collect(acc);
}

Poly Poly::operator-() const { return scaled(-1); }

Poly Poly::scaled(std::int64_t c) const {
  if (c == 0) return Poly{};
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff = checked_mul(t.coeff, c);
  return p;
}

Poly Poly::substitute(int v, const Poly& expr) const {
  if (!contains(v)) return *this;
  Poly result;
  for (const auto& t : terms_) {
    Monomial rest;
    int power = 0;
    for (int x : t.mono) {
      if (x == v) {
        ++power;
      } else {
        rest.push_back(x);
      }
    }
    Poly piece = from_terms({Term{t.coeff, rest}});
    for (int n = 0; n < power; ++n) piece = piece * expr;
    result = result + piece;
  }
  return result;
}

Poly Poly::renamed(const std::function<int(int)>& map) const {
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    Term r{t.coeff, {}};
    for (int x : t.mono) r.mono.push_back(map(x));
    terms.push_back(std::move(r));
  }
  return from_terms(std::move(terms));
}

Poly Poly::reduced_mod(std::int64_t p) const {
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    std::int64_t r = ((t.coeff % p) + p) % p;
    if (r > p / 2) r -= p;
    if (r != 0) terms.push_back(Term{r, t.mono});
  }
  return from_terms(std::move(terms));
}

Poly Poly::canonical() const {
  if (!terms_.empty() && terms_.front().coeff < 0) return -*this;
  return *this;
}

std::uint32_t Poly::evaluate(const FieldSpec& field, const std::vector<std::uint32_t>& values) const {
  std::uint32_t sum = 0;
  for (const auto& t : terms_) {
    std::uint32_t x = field.from_int_raw(t.coeff);
    for (int v : t.mono) {
      if (x == 0) break;
      x = field.mul_raw(x, values.at(static_cast<std::size_t>(v)));
    }
    sum = field.add_raw(sum, x);
  }
  return sum;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0 = 0";
  std::ostringstream out;
  for (std::size_t n = 0; n < terms_.size(); ++n) {
    const auto& t = terms_[n];
    const std::int64_t mag = t.coeff < 0 ? -t.coeff : t.coeff;
    if (n == 0) {
      if (t.coeff < 0) out << "-";
    } else {
      out << (t.coeff < 0 ? " - " : " + ");
    }
    if (t.mono.empty()) {
      out << mag;
      continue;
    }
    if (mag != 1) out << mag << "*";
    for (std::size_t k = 0; k < t.mono.size();) {
      std::size_t run = k;
      while (run < t.mono.size() && t.mono[run] == t.mono[k]) ++run;
      if (k > 0) out << "*";
      out << names.at(static_cast<std::size_t>(t.mono[k]));
      if (run - k > 1) out << "^" << (run - k);
      k = run;
    }
  }
  out << " = 0";
  return out.str();
}

bool operator<(const Poly& a, const Poly& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& x = a.terms_[k];
    const auto& y = b.terms_[k];
    if (x.mono != y.mono) return monomial_before(x.mono, y.mono);
    if (x.coeff != y.coeff) return x.coeff < y.coeff;
  }
  return a.terms_.size() < b.terms_.size();
}

Variable Variable::path_gain(int i, int j, int k) {
  Variable v;
  v.name = "g" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
  v.kind = VarKind::PathGain;
  v.source = i;
  v.tree = j;
  v.k = k;
  return v;
}

Variable Variable::edge_gain(const std::string& from, const std::string& to) {
  Variable v;
  v.name = "al(" + from + "," + to + ")";
  v.kind = VarKind::EdgeGain;
  v.from = from;
  v.to = to;
  return v;
}

Variable Variable::named(const std::string& name) {
  Variable v;
  v.name = name;
  return v;
}

Variable variable_from_name(const std::string& name) {
  static const std::regex path(R"(g(\d+)_(\d+)_(\d+))");
  static const std::regex edge(R"(al\(([A-Za-z0-9_.\-]+),([A-Za-z0-9_.\-]+)\))");
  std::smatch m;
  if (std::regex_match(name, m, path)) {
    return Variable::path_gain(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]));
  }
  if (std::regex_match(name, m, edge)) return Variable::edge_gain(m[1], m[2]);
  return Variable::named(name);
}

int PolySystem::add_variable(const Variable& var) {
  if (!valid_name(var.name)) raise(ErrorKind::ParseError, "invalid variable name '" + var.name + "'");
  auto [it, inserted] = by_name_.emplace(var.name, static_cast<int>(variables_.size()));
  if (!inserted) raise(ErrorKind::ParseError, "variable '" + var.name + "' declared twice");
  variables_.push_back(var);
  return it->second;
}

std::optional<int> PolySystem::find_variable(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> PolySystem::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

bool PolySystem::add_equation(const Poly& poly, const std::string& tag) {
  for (int v : poly.variables()) {
    if (v < 0 || v >= static_cast<int>(variables_.size())) {
      raise(ErrorKind::InvalidArgument, "equation references unknown variable " + std::to_string(v));
    }
  }
  Poly c = poly.canonical();
  if (c.is_zero() || !seen_.insert(c).second) return false;
  equations_.push_back(Equation{std::move(c), tag});
  return true;
}

int PolySystem::max_degree() const {
  int d = 0;
  for (const auto& e : equations_) d = std::max(d, e.poly.degree());
  return d;
}

std::size_t PolySystem::count_degree(int d) const {
  return static_cast<std::size_t>(std::count_if(equations_.begin(), equations_.end(),
                                                [d](const Equation& e) { return e.poly.degree() == d; }));
}

std::set<int> PolySystem::active_variables() const {
  std::set<int> out;
  for (const auto& e : equations_) {
    for (const auto& t : e.poly.terms()) out.insert(t.mono.begin(), t.mono.end());
  }
  return out;
}

PolySystem PolySystem::pruned() const {
  const auto active = active_variables();
  std::vector<int> remap(variables_.size(), -1);
  PolySystem out;
  for (int v : active) remap[static_cast<std::size_t>(v)] = out.add_variable(variables_[static_cast<std::size_t>(v)]);
  for (const auto& e : equations_) {
    out.add_equation(e.poly.renamed([&remap](int v) { return remap[static_cast<std::size_t>(v)]; }), e.tag);
  }
  return out;
}

bool PolySystem::satisfied_by(const FieldSpec& field, const std::vector<std::uint32_t>& values) const {
  return std::all_of(equations_.begin(), equations_.end(),
                     [&](const Equation& e) { return e.poly.evaluate(field, values) == 0; });
}

std::string PolySystem::to_text() const {
  const auto n = names();
  std::string out;
  for (const auto& e : equations_) out += e.poly.to_string(n) + "\n";
  return out;
}

nlohmann::ordered_json poly_to_json(const Poly& poly, const std::vector<std::string>& names) {
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : poly.terms()) {
    nlohmann::ordered_json jt;
    jt["coeff"] = t.coeff;
    auto vars = nlohmann::ordered_json::array();
    for (int v : t.mono) vars.push_back(names.at(static_cast<std::size_t>(v)));
    jt["vars"] = std::move(vars);
    terms.push_back(std::move(jt));
  }
  return terms;
}

Poly poly_from_json(const nlohmann::json& doc, const PolySystem& system) {
  std::vector<Term> terms;
  for (const auto& jt : doc) {
    Term t{jt.at("coeff").get<std::int64_t>(), {}};
    for (const auto& name : jt.at("vars")) {
      const auto v = system.find_variable(name.get<std::string>());
      if (!v) raise(ErrorKind::ParseError, "undeclared variable '" + name.get<std::string>() + "'");
      t.mono.push_back(*v);
    }
    terms.push_back(std::move(t));
  }
  return Poly::from_terms(std::move(terms));
}

nlohmann::ordered_json system_to_json(const PolySystem& system) {
  nlohmann::ordered_json doc;
  const auto names = system.names();
  doc["variables"] = names;
  auto eqs = nlohmann::ordered_json::array();
  for (const auto& e : system.equations()) {
    nlohmann::ordered_json je;
    je["terms"] = poly_to_json(e.poly, names);
    je["tag"] = e.tag;
    eqs.push_back(std::move(je));
  }
  doc["equations"] = std::move(eqs);
  return doc;
}

PolySystem system_from_json(const nlohmann::json& doc) {
  try {
    PolySystem system;
    for (const auto& name : doc.at("variables")) system.add_variable(variable_from_name(name.get<std::string>()));
    for (const auto& je : doc.at("equations")) {
      system.add_equation(poly_from_json(je.at("terms"), system), je.value("tag", std::string("input")));
    }
    return system;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, std::string("system: ") + e.what());
  }
}

PolySystem system_load(const std::filesystem::path& path) { return system_from_json(read_json(path)); }

void system_save(const PolySystem& system, const std::filesystem::path& path) {
  write_json_atomic(path, system_to_json(system));
}

}  // namespace pathgain
