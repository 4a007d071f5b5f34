#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathgain/galois.hpp"

namespace pathgain {

/// Sorted multiset of variable indices; empty for the constant monomial.
using Monomial = std::vector<int>;

/// Graded order: higher degree first, then lexicographic on indices (x0 > x1).
/// Returns true when `a` precedes `b`.
bool monomial_before(const Monomial& a, const Monomial& b);

struct Term {
  std::int64_t coeff = 0;
  Monomial mono;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Polynomial with integer coefficients over indexed variables. Terms are
/// kept merged, nonzero and sorted by `monomial_before`; coefficient overflow
/// raises InvalidArgument.
class Poly {
 public:
  Poly() = default;
  static Poly constant(std::int64_t c);
  static Poly variable(int v);
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || terms_[0].mono.empty(); }
  std::int64_t constant_value() const;
  int degree() const noexcept;
  bool is_linear() const noexcept { return degree() == 1; }
  std::set<int> variables() const;
  bool contains(int v) const;
  /// Coefficient of the degree-one term v, or 0.
  std::int64_t linear_coeff(int v) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(std::int64_t c) const;

  /// Replaces every occurrence of v by `expr`.
  Poly substitute(int v, const Poly& expr) const;
  /// Applies an index map to every variable; unmapped variables raise.
  Poly renamed(const std::function<int(int)>& map) const;
  /// Coefficients replaced by their symmetric residues modulo p.
  Poly reduced_mod(std::int64_t p) const;

  /// Leading coefficient made positive.
  Poly canonical() const;

  /// Evaluates with values given as packed field indices.
  std::uint32_t evaluate(const FieldSpec& field, const std::vector<std::uint32_t>& values) const;

  std::string to_string(const std::vector<std::string>& names) const;

  friend bool operator==(const Poly&, const Poly&) = default;
  friend bool operator<(const Poly& a, const Poly& b);

 private:
  std::vector<Term> terms_;
};

enum class VarKind { PathGain, EdgeGain, Named };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Named;
  int source = 0, tree = 0, k = 0;  // PathGain
  std::string from, to;             // EdgeGain

  static Variable path_gain(int i, int j, int k);
  static Variable edge_gain(const std::string& from, const std::string& to);
  static Variable named(const std::string& name);

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Equation {
  Poly poly;  // poly = 0
  std::string tag;
  friend bool operator==(const Equation&, const Equation&) = default;
};

/// A list of polynomial equations over named variables. Equations are stored
/// in canonical form and deduplicated on insertion.
class PolySystem {
 public:
  int add_variable(const Variable& var);
  std::optional<int> find_variable(const std::string& name) const;
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  std::vector<std::string> names() const;
  std::size_t num_variables() const noexcept { return variables_.size(); }

  /// Returns false when the equation is zero or already present.
  bool add_equation(const Poly& poly, const std::string& tag);
  const std::vector<Equation>& equations() const noexcept { return equations_; }
  std::size_t size() const noexcept { return equations_.size(); }

  int max_degree() const;
  std::size_t count_degree(int d) const;
  /// Variables that occur in at least one equation.
  std::set<int> active_variables() const;

  /// Drops variables that occur in no equation and renumbers the rest.
  PolySystem pruned() const;

  bool satisfied_by(const FieldSpec& field, const std::vector<std::uint32_t>& values) const;

  /// One equation per line.
  std::string to_text() const;

  friend bool operator==(const PolySystem& a, const PolySystem& b) {
    return a.variables_ == b.variables_ && a.equations_ == b.equations_;
  }

 private:
  std::vector<Variable> variables_;
  std::map<std::string, int> by_name_;
  std::vector<Equation> equations_;
  std::set<Poly> seen_;
};

Variable variable_from_name(const std::string& name);

nlohmann::ordered_json poly_to_json(const Poly& poly, const std::vector<std::string>& names);
Poly poly_from_json(const nlohmann::json& doc, const PolySystem& system);

nlohmann::ordered_json system_to_json(const PolySystem& system);
PolySystem system_from_json(const nlohmann::json& doc);
PolySystem system_load(const std::filesystem::path& path);
void system_save(const PolySystem& system, const std::filesystem::path& path);

}  // namespace pathgain
