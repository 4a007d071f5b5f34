#include "pathgain/simplify.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "pathgain/error.hpp"
#include "pathgain/io.hpp"

namespace pathgain {

namespace {

std::int64_t magnitude(std::int64_t c) { return c < 0 ? -c : c; }

std::vector<int> occurrences(const std::vector<Equation>& eqs, std::size_t num_vars) {
  std::vector<int> occ(num_vars, 0);
  for (const auto& e : eqs) {
    for (int v : e.poly.variables()) ++occ[static_cast<std::size_t>(v)];
  }
  return occ;
}

void dedup(std::vector<Equation>& eqs) {
  std::set<Poly> seen;
  std::vector<Equation> out;
  out.reserve(eqs.size());
  for (auto& e : eqs) {
    e.poly = e.poly.canonical();
    if (e.poly.is_zero() || !seen.insert(e.poly).second) continue;
    out.push_back(std::move(e));
  }
  eqs = std::move(out);
}

/// var = expr where poly = c*var + rest and c = +-1.
Poly solve_for(const Poly& poly, int var) {
  const std::int64_t c = poly.linear_coeff(var);
  return (poly - Poly::variable(var).scaled(c)).scaled(-c);
}

struct Work {
  std::vector<Equation> eqs;
  std::size_t num_vars = 0;
  std::vector<SimplifyStep> steps;
  std::vector<std::int64_t> constants;

  bool drop_pass() {
    auto occ = occurrences(eqs, num_vars);
    bool changed = false;
    for (std::size_t k = 0; k < eqs.size();) {
      const Poly& p = eqs[k].poly;
      int chosen = -1;
      if (p.degree() == 1) {
        for (int v : p.variables()) {
          if (occ[static_cast<std::size_t>(v)] == 1 && magnitude(p.linear_coeff(v)) == 1) {
            chosen = v;
            break;
          }
        }
      }
      if (chosen < 0) {
        ++k;
        continue;
      }
      for (int v : p.variables()) --occ[static_cast<std::size_t>(v)];
      steps.push_back(SimplifyStep{SimplifyStep::Kind::Dropped, chosen, solve_for(p, chosen), eqs[k].tag});
      eqs.erase(eqs.begin() + static_cast<std::ptrdiff_t>(k));
      changed = true;
    }
    return changed;
  }

  void extract_constants() {
    std::vector<Equation> kept;
    for (auto& e : eqs) {
      if (e.poly.is_constant()) {
        if (!e.poly.is_zero()) constants.push_back(magnitude(e.poly.constant_value()));
      } else {
        kept.push_back(std::move(e));
      }
    }
    eqs = std::move(kept);
  }

  /// Replaces an equation by its difference with an earlier one carrying the
  /// same nonlinear part (up to sign), which leaves at most a linear remainder.
  bool combine_pass() {
    std::map<Poly, std::size_t> first;
    bool changed = false;
    for (std::size_t k = 0; k < eqs.size(); ++k) {
      if (eqs[k].poly.degree() < 2) continue;
      std::vector<Term> high;
      for (const auto& t : eqs[k].poly.terms()) {
        if (t.mono.size() >= 2) high.push_back(t);
      }
      const Poly q = Poly::from_terms(std::move(high));
      const Poly qc = q.canonical();
      const std::int64_t sign = q == qc ? 1 : -1;
      auto [it, inserted] = first.emplace(qc, k);
      if (inserted) continue;
      const Poly& other = eqs[it->second].poly;
      const std::int64_t other_sign = other.terms().front().coeff == qc.terms().front().coeff ? 1 : -1;
      eqs[k].poly = (eqs[k].poly - other.scaled(sign * other_sign)).canonical();
      changed = true;
    }
    if (changed) dedup(eqs);
    return changed;
  }

  bool pivot() {
    const auto occ = occurrences(eqs, num_vars);
    int best = -1;
    for (const auto& e : eqs) {
      if (e.poly.degree() != 1) continue;
      for (const auto& t : e.poly.terms()) {
        if (t.mono.size() != 1 || magnitude(t.coeff) != 1) continue;
        const int v = t.mono[0];
        if (best < 0 || occ[static_cast<std::size_t>(v)] < occ[static_cast<std::size_t>(best)] ||
            (occ[static_cast<std::size_t>(v)] == occ[static_cast<std::size_t>(best)] && v < best)) {
          best = v;
        }
      }
    }
    if (best < 0) return false;
    auto it = std::find_if(eqs.begin(), eqs.end(), [best](const Equation& e) {
      return e.poly.degree() == 1 && magnitude(e.poly.linear_coeff(best)) == 1;
    });
    const Poly expr = solve_for(it->poly, best);
    steps.push_back(SimplifyStep{SimplifyStep::Kind::Eliminated, best, expr, it->tag});
    eqs.erase(it);
    for (auto& e : eqs) {
      if (e.poly.contains(best)) e.poly = e.poly.substitute(best, expr);
    }
    dedup(eqs);
    return true;
  }

  void run() {
    dedup(eqs);
    while (true) {
      while (drop_pass()) {
      }
      extract_constants();
      if (combine_pass()) continue;
      if (!pivot()) break;
    }
    extract_constants();
  }
};

struct PrimeSet {
  bool all = true;
  std::set<std::uint64_t> primes;

  static PrimeSet everything() { return {}; }
  static PrimeSet empty() { return {false, {}}; }
  static PrimeSet only(std::uint64_t p) { return {false, {p}}; }

  PrimeSet intersect(const PrimeSet& o) const {
    if (all) return o;
    if (o.all) return *this;
    PrimeSet r = empty();
    for (auto p : primes) {
      if (o.primes.count(p)) r.primes.insert(p);
    }
    return r;
  }

  PrimeSet unite(const PrimeSet& o) const {
    if (all || o.all) return everything();
    PrimeSet r = *this;
    r.primes.insert(o.primes.begin(), o.primes.end());
    return r;
  }

  CharVerdict verdict() const {
    if (all) return CharVerdict::none();
    if (primes.empty()) return CharVerdict::unsolvable();
    std::uint64_t n = 1;
    for (auto p : primes) n *= p;
    return CharVerdict::dividing(n);
  }
};

PrimeSet prime_set_from_constants(const std::vector<std::int64_t>& constants) {
  if (constants.empty()) return PrimeSet::everything();
  std::int64_t g = 0;
  for (auto c : constants) g = std::gcd(g, c);
  PrimeSet r = PrimeSet::empty();
  for (auto p : prime_divisors(static_cast<std::uint64_t>(g))) r.primes.insert(p);
  return r;
}

struct SingleTerm {
  std::int64_t coeff = 0;
  Monomial mono;
  bool from_pair = false;
};

constexpr std::size_t kPairLimit = 300;

std::optional<SingleTerm> find_single_term(const std::vector<Equation>& eqs) {
  for (const auto& e : eqs) {
    const auto& t = e.poly.terms();
    if (t.size() == 1 && !t[0].mono.empty()) return SingleTerm{t[0].coeff, t[0].mono, false};
  }
  if (eqs.size() > kPairLimit) return std::nullopt;
  for (std::size_t a = 0; a < eqs.size(); ++a) {
    for (std::size_t b = a + 1; b < eqs.size(); ++b) {
      if (eqs[a].poly.terms().size() != eqs[b].poly.terms().size()) continue;
      for (const Poly& p : {eqs[a].poly + eqs[b].poly, eqs[a].poly - eqs[b].poly}) {
        const auto& t = p.terms();
        if (t.size() == 1 && !t[0].mono.empty()) return SingleTerm{t[0].coeff, t[0].mono, true};
      }
    }
  }
  return std::nullopt;
}

struct BranchContext {
  int width = 0;
  int calls = 0;
  bool exceeded = false;
  std::vector<std::string>* log = nullptr;
  const std::vector<std::string>* names = nullptr;
};

std::string monomial_text(std::int64_t c, const Monomial& mono, const std::vector<std::string>& names) {
  return Poly::from_terms({Term{c, mono}}).to_string(names);
}

PrimeSet analyze(std::vector<Equation> eqs, std::size_t num_vars, int depth, std::uint64_t restrict_p,
                 BranchContext& ctx) {
  ++ctx.calls;
  Work w;
  w.eqs = std::move(eqs);
  w.num_vars = num_vars;
  PrimeSet here;
  if (restrict_p == 0) {
    w.run();
    here = prime_set_from_constants(w.constants);
  } else {
    const auto p = static_cast<std::int64_t>(restrict_p);
    bool contradiction = false;
    while (true) {
      w.run();
      for (auto c : w.constants) contradiction = contradiction || c % p != 0;
      w.constants.clear();
      bool changed = false;
      for (auto& e : w.eqs) {
        Poly r = e.poly.reduced_mod(p);
        if (!(r == e.poly)) {
          e.poly = std::move(r);
          changed = true;
        }
      }
      if (!changed || contradiction) break;
    }
    here = contradiction ? PrimeSet::empty() : PrimeSet::only(restrict_p);
  }
  if (!here.all && here.primes.empty()) return here;

  const auto split = find_single_term(w.eqs);
  if (!split) return here;
  if (depth <= 0 || ctx.calls >= ctx.width) {
    ctx.exceeded = true;
    return here;
  }

  PrimeSet branches = PrimeSet::empty();
  std::string line = std::string(static_cast<std::size_t>(4 - std::min(depth, 4)) * 2, ' ') + "split on " +
                     monomial_text(split->coeff, split->mono, *ctx.names) +
                     (split->from_pair ? " (sum/difference of two equations)" : "") + ":";
  std::vector<int> vars(split->mono.begin(), split->mono.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  const std::size_t log_at = ctx.log->size();
  for (int v : vars) {
    std::vector<Equation> sub = w.eqs;
    for (auto& e : sub) e.poly = e.poly.substitute(v, Poly{});
    const PrimeSet r = analyze(std::move(sub), num_vars, depth - 1, restrict_p, ctx);
    line += " " + (*ctx.names)[static_cast<std::size_t>(v)] + "=0 -> " + r.verdict().to_string() + ";";
    branches = branches.unite(r);
  }
  if (restrict_p == 0) {
    for (auto p : prime_divisors(static_cast<std::uint64_t>(magnitude(split->coeff)))) {
      std::vector<Equation> sub = w.eqs;
      for (auto& e : sub) e.poly = e.poly.reduced_mod(static_cast<std::int64_t>(p));
      const PrimeSet r = analyze(std::move(sub), num_vars, depth - 1, p, ctx).intersect(PrimeSet::only(p));
      line += " char " + std::to_string(p) + " -> " + r.verdict().to_string() + ";";
      branches = branches.unite(r);
    }
  }
  ctx.log->insert(ctx.log->begin() + static_cast<std::ptrdiff_t>(log_at), line);
  return here.intersect(branches);
}

SimplifyStep::Kind kind_from(const std::string& s) {
  if (s == "eliminated") return SimplifyStep::Kind::Eliminated;
  if (s == "dropped") return SimplifyStep::Kind::Dropped;
  raise(ErrorKind::ParseError, "unknown step kind '" + s + "'");
}

}  // namespace

CharVerdict CharVerdict::dividing(std::uint64_t n) {
  if (n < 2) raise(ErrorKind::InvalidArgument, "chars-dividing needs n >= 2");
  return {Kind::OnlyCharsDividing, n};
}

CharVerdict CharVerdict::from_constants(const std::vector<std::int64_t>& constants) {
  return prime_set_from_constants(constants).verdict();
}

bool CharVerdict::admits(std::uint64_t characteristic) const {
  switch (kind) {
    case Kind::NoConstraint: return true;
    case Kind::Unsolvable: return false;
    case Kind::OnlyCharsDividing: return characteristic != 0 && n % characteristic == 0;
  }
  return false;
}

std::string CharVerdict::to_string() const {
  switch (kind) {
    case Kind::NoConstraint: return "no-constraint";
    case Kind::Unsolvable: return "unsolvable";
    case Kind::OnlyCharsDividing: return "chars-dividing:" + std::to_string(n);
  }
  return "";
}

CharVerdict CharVerdict::parse(const std::string& text) {
  if (text == "no-constraint") return none();
  if (text == "unsolvable") return unsolvable();
  const std::string prefix = "chars-dividing:";
  if (text.starts_with(prefix)) {
    try {
      return dividing(std::stoull(text.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  raise(ErrorKind::ParseError, "bad verdict '" + text + "'");
}

std::vector<SimplifyStep> SimplifyResult::trace() const {
  std::vector<SimplifyStep> out;
  for (const auto& s : steps) {
    if (s.kind == SimplifyStep::Kind::Eliminated) out.push_back(s);
  }
  return out;
}

std::vector<SimplifyStep> SimplifyResult::dropped() const {
  std::vector<SimplifyStep> out;
  for (const auto& s : steps) {
    if (s.kind == SimplifyStep::Kind::Dropped) out.push_back(s);
  }
  return out;
}

DropResult drop_unused(const PolySystem& system) {
  Work w;
  w.eqs = system.equations();
  w.num_vars = system.num_variables();
  while (w.drop_pass()) {
  }
  std::vector<bool> gone(system.num_variables(), false);
  for (const auto& s : w.steps) gone[static_cast<std::size_t>(s.var)] = true;
  DropResult out;
  std::vector<int> remap(system.num_variables(), -1);
  for (std::size_t v = 0; v < system.num_variables(); ++v) {
    if (!gone[v]) remap[v] = out.system.add_variable(system.variables()[v]);
  }
  for (const auto& e : w.eqs) {
    out.system.add_equation(e.poly.renamed([&remap](int v) { return remap[static_cast<std::size_t>(v)]; }), e.tag);
  }
  out.dropped = std::move(w.steps);
  return out;
}

SimplifyResult linear_eliminate(const PolySystem& system) {
  Work w;
  w.eqs = system.equations();
  w.num_vars = system.num_variables();
  w.run();

  SimplifyResult r;
  r.original = system;
  std::vector<bool> gone(system.num_variables(), false);
  for (const auto& s : w.steps) gone[static_cast<std::size_t>(s.var)] = true;
  std::vector<int> remap(system.num_variables(), -1);
  for (std::size_t v = 0; v < system.num_variables(); ++v) {
    if (gone[v]) continue;
    remap[v] = r.reduced.add_variable(system.variables()[v]);
    r.reduced_to_original.push_back(static_cast<int>(v));
  }
  for (const auto& e : w.eqs) {
    r.reduced.add_equation(e.poly.renamed([&remap](int v) { return remap[static_cast<std::size_t>(v)]; }), e.tag);
  }
  r.steps = std::move(w.steps);
  r.constants = std::move(w.constants);
  r.verdict = CharVerdict::from_constants(r.constants);
  return r;
}

void branch_analyze(SimplifyResult& result, const BranchOptions& options) {
  std::vector<Equation> eqs = result.reduced.equations();
  for (auto c : result.constants) eqs.push_back(Equation{Poly::constant(c), "constant"});
  const auto names = result.reduced.names();
  BranchContext ctx;
  ctx.width = options.width;
  ctx.log = &result.branch_log;
  ctx.names = &names;
  result.branch_log.clear();
  const PrimeSet coarse = prime_set_from_constants(result.constants);
  const PrimeSet refined = analyze(std::move(eqs), result.reduced.num_variables(), options.depth, 0, ctx);
  result.verdict = coarse.intersect(refined).verdict();
  result.branch_budget_exceeded = ctx.exceeded;
}

SimplifyResult simplify(const PolySystem& system, const BranchOptions& options) {
  SimplifyResult r = linear_eliminate(system);
  branch_analyze(r, options);
  return r;
}

std::vector<std::uint32_t> lift_solution(const SimplifyResult& result, const FieldSpec& field,
                                         const std::vector<std::uint32_t>& reduced_values) {
  if (!result.verdict.admits(field.characteristic())) {
    raise(ErrorKind::InadmissibleCharacteristic,
          "characteristic " + std::to_string(field.characteristic()) + " excluded by " + result.verdict.to_string());
  }
  if (reduced_values.size() != result.reduced.num_variables()) {
    raise(ErrorKind::InvalidArgument, "expected " + std::to_string(result.reduced.num_variables()) + " values");
  }
  std::vector<std::uint32_t> values(result.original.num_variables(), 0);
  for (std::size_t k = 0; k < reduced_values.size(); ++k) {
    values[static_cast<std::size_t>(result.reduced_to_original[k])] = reduced_values[k];
  }
  for (auto it = result.steps.rbegin(); it != result.steps.rend(); ++it) {
    values[static_cast<std::size_t>(it->var)] = it->expr.evaluate(field, values);
  }
  if (!result.original.satisfied_by(field, values)) {
    raise(ErrorKind::LiftInconsistency, "lifted assignment violates the original system");
  }
  return values;
}

nlohmann::ordered_json simplify_result_to_json(const SimplifyResult& result) {
  nlohmann::ordered_json doc;
  doc["verdict"] = result.verdict.to_string();
  doc["reduced"] = system_to_json(result.reduced);
  const auto names = result.original.names();
  auto trace = nlohmann::ordered_json::array();
  auto dropped = nlohmann::ordered_json::array();
  for (const auto& s : result.steps) {
    nlohmann::ordered_json js;
    js["var"] = names[static_cast<std::size_t>(s.var)];
    js["expr"] = poly_to_json(s.expr, names);
    js["kind"] = s.kind == SimplifyStep::Kind::Eliminated ? "eliminated" : "dropped";
    js["tag"] = s.tag;
    trace.push_back(std::move(js));
    if (s.kind == SimplifyStep::Kind::Dropped) dropped.push_back(names[static_cast<std::size_t>(s.var)]);
  }
  doc["trace"] = std::move(trace);
  doc["dropped"] = std::move(dropped);
  doc["constants"] = result.constants;
  doc["branch_log"] = result.branch_log;
  doc["branch_budget_exceeded"] = result.branch_budget_exceeded;
  doc["original"] = system_to_json(result.original);
  return doc;
}

SimplifyResult simplify_result_from_json(const nlohmann::json& doc) {
  try {
    SimplifyResult r;
    r.original = system_from_json(doc.at("original"));
    r.reduced = system_from_json(doc.at("reduced"));
    for (const auto& v : r.reduced.variables()) {
      const auto idx = r.original.find_variable(v.name);
      if (!idx) raise(ErrorKind::ParseError, "reduced variable '" + v.name + "' not in the original system");
      r.reduced_to_original.push_back(*idx);
    }
    for (const auto& js : doc.at("trace")) {
      const auto var = r.original.find_variable(js.at("var").get<std::string>());
      if (!var) raise(ErrorKind::ParseError, "trace variable not in the original system");
      r.steps.push_back(SimplifyStep{kind_from(js.at("kind").get<std::string>()), *var,
                                     poly_from_json(js.at("expr"), r.original), js.value("tag", std::string())});
    }
    r.constants = doc.at("constants").get<std::vector<std::int64_t>>();
    r.verdict = CharVerdict::parse(doc.at("verdict").get<std::string>());
    r.branch_log = doc.value("branch_log", std::vector<std::string>{});
    r.branch_budget_exceeded = doc.value("branch_budget_exceeded", false);
    return r;
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, std::string("simplify result: ") + e.what());
  }
}

void simplify_result_save(const SimplifyResult& result, const std::filesystem::path& path) {
  write_json_atomic(path, simplify_result_to_json(result));
}

}  // namespace pathgain
