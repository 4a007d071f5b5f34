#include "pathgain/galois.hpp"

#include <charconv>
#include <string>

#include "pathgain/error.hpp"

namespace pathgain {

namespace detail {

struct FieldTables {
  std::uint32_t p = 0;
  std::uint32_t m = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;
  std::uint32_t tag = 0;
  std::vector<std::uint32_t> digit_weight;  // p^k

  // Full tables when q is small, log/exp otherwise.
  bool small = false;
  std::vector<std::uint16_t> add_table;
  std::vector<std::uint16_t> mul_table;
  std::vector<std::uint32_t> exp_table;  // length q-1
  std::vector<std::uint32_t> log_table;  // length q, log_table[0] unused
  std::vector<std::uint32_t> neg_table;
  std::vector<std::uint32_t> inv_table;
};

}  // namespace detail

namespace {

using Poly = std::vector<std::uint32_t>;  // low degree first over GF(p)

constexpr std::uint32_t kSmallTableLimit = 256;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  // p is prime, so a^(p-2) is the inverse.
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b (b nonzero) over GF(p).
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = inv_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) {
      const std::uint64_t sub = factor * b[k] % p;
      a[shift + k] = static_cast<std::uint32_t>((a[shift + k] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::uint32_t degree = static_cast<std::uint32_t>(f.size() - 1);
  // Any factorization has a monic factor of degree at most degree/2.
  for (std::uint32_t d = 1; d <= degree / 2; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t k = 0; k < d; ++k) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(d + 1, 0);
      std::uint64_t rest = idx;
      for (std::uint32_t k = 0; k < d; ++k) {
        g[k] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::uint32_t fnv1a(std::uint32_t p, std::uint32_t m, const Poly& modulus) {
  std::uint32_t h = 2166136261u;
  auto mix = [&h](std::uint32_t v) {
    for (int byte = 0; byte < 4; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffu;
      h *= 16777619u;
    }
  };
  mix(p);
  mix(m);
  for (auto c : modulus) mix(c);
  return h == 0 ? 1 : h;
}

Poly unpack(std::uint32_t index, const detail::FieldTables& t) {
  Poly digits(t.m, 0);
  for (std::uint32_t k = 0; k < t.m; ++k) {
    digits[k] = index % t.p;
    index /= t.p;
  }
  return digits;
}

std::uint32_t pack(const Poly& digits, const detail::FieldTables& t) {
  std::uint32_t index = 0;
  for (std::uint32_t k = 0; k < t.m && k < digits.size(); ++k) {
    index += digits[k] * t.digit_weight[k];
  }
  return index;
}

std::uint32_t slow_add(std::uint32_t a, std::uint32_t b, const detail::FieldTables& t) {
  if (t.p == 2) return a ^ b;
  std::uint32_t result = 0;
  for (std::uint32_t k = 0; k < t.m; ++k) {
    const std::uint32_t da = a % t.p, db = b % t.p;
    result += ((da + db) % t.p) * t.digit_weight[k];
    a /= t.p;
    b /= t.p;
  }
  return result;
}

std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, const detail::FieldTables& t) {
  if (t.m == 1) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % t.p);
  }
  const Poly da = unpack(a, t), db = unpack(b, t);
  Poly prod(2 * t.m - 1, 0);
  for (std::uint32_t i = 0; i < t.m; ++i) {
    if (da[i] == 0) continue;
    for (std::uint32_t j = 0; j < t.m; ++j) {
      prod[i + j] = static_cast<std::uint32_t>(
          (prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % t.p);
    }
  }
  return pack(poly_mod(std::move(prod), t.modulus, t.p), t);
}

std::uint32_t slow_pow(std::uint32_t a, std::uint64_t e, const detail::FieldTables& t) {
  std::uint32_t result = 1, base = a;
  while (e > 0) {
    if (e & 1) result = slow_mul(result, base, t);
    base = slow_mul(base, base, t);
    e >>= 1;
  }
  return result;
}

void build_tables(detail::FieldTables& t) {
  t.digit_weight.resize(t.m);
  std::uint32_t w = 1;
  for (std::uint32_t k = 0; k < t.m; ++k) {
    t.digit_weight[k] = w;
    w *= t.p;
  }

  const std::uint32_t order = t.q - 1;
  const auto factors = prime_divisors(order);
  std::uint32_t generator = 0;
  for (std::uint32_t g = 1; g < t.q; ++g) {
    bool primitive = true;
    for (auto r : factors) {
      if (slow_pow(g, order / r, t) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      generator = g;
      break;
    }
  }

  t.exp_table.resize(order);
  t.log_table.assign(t.q, 0);
  std::uint32_t x = 1;
  for (std::uint32_t k = 0; k < order; ++k) {
    t.exp_table[k] = x;
    t.log_table[x] = k;
    x = slow_mul(x, generator, t);
  }

  t.neg_table.resize(t.q);
  t.inv_table.assign(t.q, 0);
  for (std::uint32_t a = 0; a < t.q; ++a) {
    std::uint32_t neg = 0;
    std::uint32_t rest = a;
    for (std::uint32_t k = 0; k < t.m; ++k) {
      neg += ((t.p - rest % t.p) % t.p) * t.digit_weight[k];
      rest /= t.p;
    }
    t.neg_table[a] = neg;
    if (a != 0) t.inv_table[a] = t.exp_table[(order - t.log_table[a]) % order];
  }

  t.small = t.q <= kSmallTableLimit;
  if (t.small) {
    t.add_table.resize(static_cast<std::size_t>(t.q) * t.q);
    t.mul_table.resize(static_cast<std::size_t>(t.q) * t.q);
    for (std::uint32_t a = 0; a < t.q; ++a) {
      for (std::uint32_t b = 0; b < t.q; ++b) {
        const std::size_t at = static_cast<std::size_t>(a) * t.q + b;
        t.add_table[at] = static_cast<std::uint16_t>(slow_add(a, b, t));
        t.mul_table[at] = static_cast<std::uint16_t>(
            a == 0 || b == 0 ? 0 : t.exp_table[(t.log_table[a] + t.log_table[b]) % order]);
      }
    }
  }
}

std::uint32_t parse_uint(std::string_view text, const char* what) {
  std::uint32_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last) {
    raise(ErrorKind::ParseError, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

FieldSpec FieldSpec::make(std::uint32_t p, std::uint32_t m,
                          std::optional<std::vector<std::uint32_t>> modulus,
                          std::uint32_t max_size) {
  if (!is_prime(p)) raise(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (m < 1) raise(ErrorKind::InvalidArgument, "extension degree must be at least 1");

  std::uint64_t q = 1;
  for (std::uint32_t k = 0; k < m; ++k) {
    q *= p;
    if (q > max_size) {
      raise(ErrorKind::CardinalityTooLarge,
            std::to_string(p) + "^" + std::to_string(m) + " exceeds " + std::to_string(max_size));
    }
  }

  auto t = std::make_shared<detail::FieldTables>();
  t->p = p;
  t->m = m;
  t->q = static_cast<std::uint32_t>(q);

  if (m > 1) {
    if (modulus) {
      const auto& f = *modulus;
      if (f.size() != m + 1 || f.back() != 1) {
        raise(ErrorKind::InvalidArgument, "modulus must be monic of degree " + std::to_string(m));
      }
      for (auto c : f) {
        if (c >= p) raise(ErrorKind::InvalidArgument, "modulus coefficient out of range");
      }
      if (!is_irreducible(f, p)) raise(ErrorKind::ReducibleModulus, "modulus is reducible");
      t->modulus = f;
    } else {
      // Lexicographic order on (c0, c1, ..., c_{m-1}) with c0 most significant.
      const std::uint64_t count = q;
      for (std::uint64_t idx = 0; idx < count; ++idx) {
        Poly f(m + 1, 0);
        std::uint64_t rest = idx;
        for (std::uint32_t k = 0; k < m; ++k) {
          f[m - 1 - k] = static_cast<std::uint32_t>(rest % p);
          rest /= p;
        }
        f[m] = 1;
        if (is_irreducible(f, p)) {
          t->modulus = std::move(f);
          break;
        }
      }
    }
  } else if (modulus && !modulus->empty()) {
    const auto& f = *modulus;
    if (f.size() != 2 || f.back() != 1 || f[0] >= p) {
      raise(ErrorKind::InvalidArgument, "modulus must be monic of degree 1");
    }
  }

  t->tag = fnv1a(p, m, t->modulus);
  build_tables(*t);
  return FieldSpec(std::move(t));
}

FieldSpec FieldSpec::parse(std::string_view text, std::uint32_t max_size) {
  const auto caret = text.find('^');
  if (caret == std::string_view::npos) {
    return make(parse_uint(text, "field characteristic"), 1, std::nullopt, max_size);
  }
  return make(parse_uint(text.substr(0, caret), "field characteristic"),
              parse_uint(text.substr(caret + 1), "field degree"), std::nullopt, max_size);
}

std::uint32_t FieldSpec::p() const noexcept { return t_->p; }
std::uint32_t FieldSpec::m() const noexcept { return t_->m; }
std::uint32_t FieldSpec::q() const noexcept { return t_->q; }
const std::vector<std::uint32_t>& FieldSpec::modulus() const noexcept { return t_->modulus; }
std::uint32_t FieldSpec::tag() const noexcept { return t_->tag; }

std::string FieldSpec::name() const {
  return std::to_string(t_->p) + "^" + std::to_string(t_->m);
}

void FieldSpec::check(const FieldElem& a) const {
  if (a.tag_ != t_->tag) {
    raise(ErrorKind::FieldMismatch, "element does not belong to GF(" + name() + ")");
  }
}

FieldElem FieldSpec::zero() const { return FieldElem(0, t_->tag); }
FieldElem FieldSpec::one() const { return FieldElem(1, t_->tag); }

FieldElem FieldSpec::element(std::uint32_t index) const {
  if (index >= t_->q) raise(ErrorKind::InvalidArgument, "element index out of range");
  return FieldElem(index, t_->tag);
}

FieldElem FieldSpec::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() != t_->m) {
    raise(ErrorKind::InvalidArgument,
          "expected " + std::to_string(t_->m) + " coefficients, got " +
              std::to_string(coeffs.size()));
  }
  std::uint32_t index = 0;
  for (std::uint32_t k = 0; k < t_->m; ++k) {
    if (coeffs[k] >= t_->p) raise(ErrorKind::InvalidArgument, "coefficient out of range");
    index += coeffs[k] * t_->digit_weight[k];
  }
  return FieldElem(index, t_->tag);
}

FieldElem FieldSpec::from_int(std::int64_t n) const { return FieldElem(from_int_raw(n), t_->tag); }

std::vector<std::uint32_t> FieldSpec::coeffs(const FieldElem& a) const {
  check(a);
  return unpack(a.index_, *t_);
}

FieldElem FieldSpec::add(const FieldElem& a, const FieldElem& b) const {
  check(a);
  check(b);
  return FieldElem(add_raw(a.index_, b.index_), t_->tag);
}

FieldElem FieldSpec::sub(const FieldElem& a, const FieldElem& b) const { return add(a, neg(b)); }

FieldElem FieldSpec::neg(const FieldElem& a) const {
  check(a);
  return FieldElem(t_->neg_table[a.index_], t_->tag);
}

FieldElem FieldSpec::mul(const FieldElem& a, const FieldElem& b) const {
  check(a);
  check(b);
  return FieldElem(mul_raw(a.index_, b.index_), t_->tag);
}

FieldElem FieldSpec::inv(const FieldElem& a) const {
  check(a);
  if (a.index_ == 0) raise(ErrorKind::DivisionByZero, "inverse of zero in GF(" + name() + ")");
  return FieldElem(t_->inv_table[a.index_], t_->tag);
}

FieldElem FieldSpec::div(const FieldElem& a, const FieldElem& b) const { return mul(a, inv(b)); }

FieldElem FieldSpec::pow(const FieldElem& a, std::uint64_t e) const {
  check(a);
  FieldElem result = one();
  FieldElem base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::string FieldSpec::format(const FieldElem& a) const {
  std::string out;
  for (auto c : coeffs(a)) {
    if (!out.empty()) out += ',';
    out += std::to_string(c);
  }
  return out;
}

FieldElem FieldSpec::parse_element(std::string_view text) const {
  std::vector<std::uint32_t> digits;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    digits.push_back(parse_uint(piece, "element coefficient"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (digits.size() != t_->m) {
    raise(ErrorKind::ParseError, "element '" + std::string(text) + "' needs " +
                                     std::to_string(t_->m) + " coefficients");
  }
  for (auto d : digits) {
    if (d >= t_->p) raise(ErrorKind::ParseError, "element coefficient out of range");
  }
  return from_coeffs(digits);
}

std::uint32_t FieldSpec::add_raw(std::uint32_t a, std::uint32_t b) const noexcept {
  if (t_->small) return t_->add_table[static_cast<std::size_t>(a) * t_->q + b];
  return slow_add(a, b, *t_);
}

std::uint32_t FieldSpec::mul_raw(std::uint32_t a, std::uint32_t b) const noexcept {
  if (t_->small) return t_->mul_table[static_cast<std::size_t>(a) * t_->q + b];
  if (a == 0 || b == 0) return 0;
  return t_->exp_table[(t_->log_table[a] + t_->log_table[b]) % (t_->q - 1)];
}

std::uint32_t FieldSpec::neg_raw(std::uint32_t a) const noexcept { return t_->neg_table[a]; }

std::uint32_t FieldSpec::from_int_raw(std::int64_t n) const noexcept {
  const std::int64_t p = t_->p;
  return static_cast<std::uint32_t>(((n % p) + p) % p);
}

}  // namespace pathgain
