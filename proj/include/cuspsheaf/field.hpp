#pragma once

// Exact scalar fields: the rationals (GMP backed) and prime fields GF(p).

#include <gmpxx.h>

#include <charconv>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <tuple>
#include <utility>

#include "cuspsheaf/errors.hpp"

namespace cuspsheaf {

class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw MathError(MathError::Reason::division_by_zero, "zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Accepts "n" or "n/d" with d != 0.
  static Rational parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational literal");
    std::string s(text);
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[i];
      bool ok = (c >= '0' && c <= '9') || c == '/' || (i == 0 && (c == '-' || c == '+'));
      if (!ok) throw ParseError("bad rational literal '" + s + "'");
    }
    if (s.front() == '+') s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal '" + std::string(text) + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return Rational(std::move(q));
  }

  std::string str() const { return v_.get_str(); }
  bool is_zero() const { return sgn(v_) == 0; }
  const mpq_class& value() const { return v_; }

  Rational inverse() const {
    if (is_zero()) throw MathError(MathError::Reason::division_by_zero, "inverse of zero");
    return Rational(mpq_class(1) / v_);
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw MathError(MathError::Reason::division_by_zero, "division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

  static constexpr std::string_view field_name() { return "q"; }

 private:
  mpq_class v_;
};

/// Residues modulo the session prime. The modulus is thread-local session
/// state installed by ModP::Session; values from different sessions must not
/// be mixed.
class ModP {
 public:
  using rep = std::uint64_t;

  static constexpr rep kMaxModulus = (rep{1} << 32) - 1;

  class Session {
   public:
    explicit Session(rep p) : previous_(modulus_) {
      if (!is_prime(p) || p > kMaxModulus)
        throw InvariantError("field modulus " + std::to_string(p) + " is not a prime below 2^32");
      modulus_ = p;
    }
    ~Session() { modulus_ = previous_; }
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

   private:
    rep previous_;
  };

  ModP() = default;
  ModP(long n) : v_(reduce(n)) {}  // NOLINT(google-explicit-constructor)

  static rep modulus() {
    if (modulus_ == 0) throw std::logic_error("ModP used outside of a ModP::Session");
    return modulus_;
  }

  static bool is_prime(rep p) {
    if (p < 2) return false;
    for (rep d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

  /// Accepts a decimal integer; negative values are reduced.
  static ModP parse(std::string_view text) {
    if (text.empty()) throw ParseError("empty residue literal");
    bool neg = text.front() == '-';
    std::string_view digits = neg ? text.substr(1) : text;
    rep value = 0;
    const char* end = digits.data() + digits.size();
    auto [ptr, ec] = std::from_chars(digits.data(), end, value);
    if (ec != std::errc() || ptr != end || digits.empty())
      throw ParseError("bad residue literal '" + std::string(text) + "'");
    ModP r;
    r.v_ = value % modulus();
    return neg ? -r : r;
  }

  std::string str() const { return std::to_string(v_); }
  bool is_zero() const { return v_ == 0; }
  rep value() const { return v_; }

  ModP inverse() const {
    if (v_ == 0) throw MathError(MathError::Reason::division_by_zero, "inverse of zero");
    // extended Euclid on signed 64-bit values; both operands are below 2^32
    std::int64_t a = static_cast<std::int64_t>(v_), m = static_cast<std::int64_t>(modulus());
    std::int64_t x0 = 1, x1 = 0;
    while (m != 0) {
      std::int64_t q = a / m;
      std::tie(a, m) = std::pair(m, a - q * m);
      std::tie(x0, x1) = std::pair(x1, x0 - q * x1);
    }
    return ModP(static_cast<long>(x0));
  }

  ModP operator-() const {
    ModP r;
    r.v_ = v_ == 0 ? 0 : modulus() - v_;
    return r;
  }
  ModP& operator+=(ModP o) {
    v_ += o.v_;
    if (v_ >= modulus()) v_ -= modulus();
    return *this;
  }
  ModP& operator-=(ModP o) { return *this += -o; }
  ModP& operator*=(ModP o) {
    v_ = (v_ * o.v_) % modulus();
    return *this;
  }
  ModP& operator/=(ModP o) { return *this *= o.inverse(); }
  friend ModP operator+(ModP a, ModP b) { return a += b; }
  friend ModP operator-(ModP a, ModP b) { return a -= b; }
  friend ModP operator*(ModP a, ModP b) { return a *= b; }
  friend ModP operator/(ModP a, ModP b) { return a /= b; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }

  static constexpr std::string_view field_name() { return "fp"; }

 private:
  static rep reduce(long n) {
    auto p = static_cast<long long>(modulus());
    long long r = static_cast<long long>(n) % p;
    return static_cast<rep>(r < 0 ? r + p : r);
  }

  rep v_ = 0;
  inline static thread_local rep modulus_ = 0;
};

template <class K>
concept ExactField = std::regular<K> && std::constructible_from<K, long> &&
    requires(const K a, const K b, std::string_view s) {
      { a + b } -> std::same_as<K>;
      { a - b } -> std::same_as<K>;
      { a * b } -> std::same_as<K>;
      { a / b } -> std::same_as<K>;
      { -a } -> std::same_as<K>;
      { a.inverse() } -> std::same_as<K>;
      { a.is_zero() } -> std::same_as<bool>;
      { a.str() } -> std::same_as<std::string>;
      { K::parse(s) } -> std::same_as<K>;
    };

static_assert(ExactField<Rational>);
static_assert(ExactField<ModP>);

/// Runtime choice of ground field for a computation session.
struct FieldDesc {
  enum class Kind { rational, prime };
  Kind kind = Kind::rational;
  std::uint64_t p = 0;

  static FieldDesc rational() { return {}; }
  static FieldDesc prime(std::uint64_t p) {
    if (!ModP::is_prime(p) || p > ModP::kMaxModulus)
      throw InvariantError("field modulus " + std::to_string(p) + " is not a prime below 2^32");
    return {Kind::prime, p};
  }

  /// "q" or "fp:P".
  static FieldDesc parse(std::string_view text) {
    if (text == "q") return rational();
    if (text.substr(0, 3) == "fp:") {
      std::uint64_t p = 0;
      auto digits = text.substr(3);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
        throw ParseError("bad field descriptor '" + std::string(text) + "'");
      return prime(p);
    }
    throw ParseError("bad field descriptor '" + std::string(text) + "' (expected q or fp:P)");
  }

  std::string str() const { return kind == Kind::rational ? "q" : "fp:" + std::to_string(p); }
  friend bool operator==(const FieldDesc&, const FieldDesc&) = default;
};

/// Invokes fn(std::type_identity<K>{}) with K the scalar type for `field`,
/// holding a ModP session open for the duration of the call when needed.
template <class Fn>
decltype(auto) with_field(const FieldDesc& field, Fn&& fn) {
  if (field.kind == FieldDesc::Kind::rational)
    return std::forward<Fn>(fn)(std::type_identity<Rational>{});
  ModP::Session session(field.p);
  return std::forward<Fn>(fn)(std::type_identity<ModP>{});
}

}  // namespace cuspsheaf
