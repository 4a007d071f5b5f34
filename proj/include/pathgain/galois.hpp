#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathgain {

namespace detail {
struct FieldTables;
}

/// An element of some GF(p^m). The value is the polynomial-basis coefficient
/// vector packed as base-p digits (coefficient of x^k is digit k), so 0 is the
/// zero element and 1 is the unit. The tag identifies the owning field.
class FieldElem {
 public:
  FieldElem() = default;

  std::uint32_t index() const noexcept { return index_; }
  std::uint32_t field_tag() const noexcept { return tag_; }
  bool is_zero() const noexcept { return index_ == 0; }

  friend bool operator==(const FieldElem&, const FieldElem&) = default;

 private:
  friend class FieldSpec;
  FieldElem(std::uint32_t index, std::uint32_t tag) : index_(index), tag_(tag) {}

  std::uint32_t index_ = 0;
  std::uint32_t tag_ = 0;
};

inline constexpr std::uint32_t kDefaultMaxFieldSize = 1u << 16;

/// GF(p^m) with a fixed monic irreducible modulus. Cheap to copy; the
/// arithmetic tables are shared and immutable.
class FieldSpec {
 public:
  /// `modulus` lists m+1 coefficients, lowest degree first, and must be monic.
  /// When omitted for m > 1 the lexicographically first irreducible monic
  /// polynomial (comparing the low-degree-first coefficient sequence) is used.
  static FieldSpec make(std::uint32_t p, std::uint32_t m,
                        std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                        std::uint32_t max_size = kDefaultMaxFieldSize);

  /// Accepts "p^m" or a bare prime "p".
  static FieldSpec parse(std::string_view text,
                         std::uint32_t max_size = kDefaultMaxFieldSize);

  std::uint32_t p() const noexcept;
  std::uint32_t m() const noexcept;
  std::uint32_t q() const noexcept;
  std::uint32_t characteristic() const noexcept { return p(); }
  /// Empty for prime fields.
  const std::vector<std::uint32_t>& modulus() const noexcept;
  std::uint32_t tag() const noexcept;
  /// "p^m"
  std::string name() const;

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem element(std::uint32_t index) const;
  FieldElem from_coeffs(std::span<const std::uint32_t> coeffs) const;
  FieldElem from_int(std::int64_t n) const;
  std::vector<std::uint32_t> coeffs(const FieldElem& a) const;

  FieldElem add(const FieldElem& a, const FieldElem& b) const;
  FieldElem sub(const FieldElem& a, const FieldElem& b) const;
  FieldElem neg(const FieldElem& a) const;
  FieldElem mul(const FieldElem& a, const FieldElem& b) const;
  FieldElem inv(const FieldElem& a) const;
  FieldElem div(const FieldElem& a, const FieldElem& b) const;
  FieldElem pow(const FieldElem& a, std::uint64_t e) const;

  /// Coefficients separated by commas, low degree first ("0,1" is x in GF(4)).
  std::string format(const FieldElem& a) const;
  FieldElem parse_element(std::string_view text) const;

  // Unchecked operations on packed indices for inner loops.
  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg_raw(std::uint32_t a) const noexcept;
  std::uint32_t from_int_raw(std::int64_t n) const noexcept;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) noexcept {
    return a.tag() == b.tag() && a.p() == b.p() && a.m() == b.m() &&
           a.modulus() == b.modulus();
  }

 private:
  explicit FieldSpec(std::shared_ptr<const detail::FieldTables> tables)
      : t_(std::move(tables)) {}
  void check(const FieldElem& a) const;

  std::shared_ptr<const detail::FieldTables> t_;
};

bool is_prime(std::uint64_t n);

/// Distinct prime divisors of n, ascending.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

}  // namespace pathgain
