#pragma once

// Ring engines: exact arithmetic for the three supported coefficient rings.
//
//   IntegerEngine  - Z, arbitrary precision (GMP)
//   ModEngine      - Z/nZ, residues kept in [0, n)
//   PolyEngine     - F_p[x], coefficient vectors low-to-high degree
//
// Every engine is a small value type; elements are plain values and every
// operation is a const member, so engines can be shared freely.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpmod {

/// Raised for mathematically invalid requests (wrong engine, zero divisor...).
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Polynomial over F_p. Coefficients are low-to-high with no trailing zeros,
/// so the zero polynomial is the empty vector and representation is unique.
struct Poly {
  std::vector<std::uint32_t> c;

  Poly() = default;
  explicit Poly(std::vector<std::uint32_t> coeffs) : c(std::move(coeffs)) { trim(); }

  [[nodiscard]] bool is_zero() const { return c.empty(); }
  [[nodiscard]] int degree() const { return static_cast<int>(c.size()) - 1; }
  [[nodiscard]] std::uint32_t lead() const { return c.empty() ? 0 : c.back(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  bool operator==(const Poly &) const = default;
  // Degree first, then coefficients from the top; a deterministic total order.
  std::strong_ordering operator<=>(const Poly &o) const;
};

class IntegerEngine {
public:
  using Elem = mpz_class;
  static constexpr bool is_domain = true;

  [[nodiscard]] Elem zero() const { return 0; }
  [[nodiscard]] Elem one() const { return 1; }
  [[nodiscard]] Elem from_int(long v) const { return v; }

  [[nodiscard]] Elem add(const Elem &a, const Elem &b) const { return a + b; }
  [[nodiscard]] Elem sub(const Elem &a, const Elem &b) const { return a - b; }
  [[nodiscard]] Elem mul(const Elem &a, const Elem &b) const { return a * b; }
  [[nodiscard]] Elem neg(const Elem &a) const { return -a; }

  [[nodiscard]] bool is_zero(const Elem &a) const { return sgn(a) == 0; }
  [[nodiscard]] bool is_unit(const Elem &a) const { return abs(a) == 1; }
  [[nodiscard]] bool equal(const Elem &a, const Elem &b) const { return a == b; }

  /// Floor division; remainder r satisfies 0 <= r < |b|.
  [[nodiscard]] std::pair<Elem, Elem> divmod(const Elem &a, const Elem &b) const;
  /// Exact quotient if b divides a.
  [[nodiscard]] bool divides(const Elem &b, const Elem &a) const;
  [[nodiscard]] Elem exact_div(const Elem &a, const Elem &b) const;

  /// <0, 0, >0 as the Euclidean measure |a| is smaller, equal, larger.
  [[nodiscard]] int compare_measure(const Elem &a, const Elem &b) const { return cmp(abs(a), abs(b)); }
  /// Unit u with u*a in canonical form (non-negative).
  [[nodiscard]] Elem normalizer(const Elem &a) const { return sgn(a) < 0 ? -1 : 1; }
  [[nodiscard]] Elem unit_inverse(const Elem &u) const { return u; }

  [[nodiscard]] std::string to_string(const Elem &a) const { return a.get_str(); }
  [[nodiscard]] std::string name() const { return "Integers"; }
  [[nodiscard]] std::string tag() const { return "int"; }

  /// Number of distinct prime divisors of a nonzero element.
  [[nodiscard]] std::size_t count_prime_factors(const Elem &a) const;

  bool operator==(const IntegerEngine &) const = default;
};

class PolyEngine {
public:
  using Elem = Poly;
  static constexpr bool is_domain = true;

  explicit PolyEngine(std::uint32_t p);

  [[nodiscard]] std::uint32_t prime() const { return p_; }

  [[nodiscard]] Elem zero() const { return {}; }
  [[nodiscard]] Elem one() const { return Poly({1}); }
  [[nodiscard]] Elem from_int(long v) const;
  [[nodiscard]] Elem from_coeffs(const std::vector<long> &coeffs) const;
  [[nodiscard]] Elem x() const { return Poly({0, 1}); }

  [[nodiscard]] Elem add(const Elem &a, const Elem &b) const;
  [[nodiscard]] Elem sub(const Elem &a, const Elem &b) const;
  [[nodiscard]] Elem mul(const Elem &a, const Elem &b) const;
  [[nodiscard]] Elem neg(const Elem &a) const;
  [[nodiscard]] Elem scale(const Elem &a, std::uint32_t s) const;

  [[nodiscard]] bool is_zero(const Elem &a) const { return a.is_zero(); }
  [[nodiscard]] bool is_unit(const Elem &a) const { return a.degree() == 0; }
  [[nodiscard]] bool equal(const Elem &a, const Elem &b) const { return a == b; }

  [[nodiscard]] std::pair<Elem, Elem> divmod(const Elem &a, const Elem &b) const;
  [[nodiscard]] bool divides(const Elem &b, const Elem &a) const;
  [[nodiscard]] Elem exact_div(const Elem &a, const Elem &b) const;
  [[nodiscard]] Elem mod(const Elem &a, const Elem &b) const { return divmod(a, b).second; }
  [[nodiscard]] Elem gcd(Elem a, Elem b) const;
  [[nodiscard]] Elem powmod(Elem base, mpz_class e, const Elem &m) const;

  [[nodiscard]] int compare_measure(const Elem &a, const Elem &b) const;
  /// Constant u making u*a monic (1 for zero).
  [[nodiscard]] Elem normalizer(const Elem &a) const;
  [[nodiscard]] Elem unit_inverse(const Elem &u) const;

  [[nodiscard]] std::string to_string(const Elem &a) const;
  [[nodiscard]] std::string name() const;
  [[nodiscard]] std::string tag() const;

  /// Number of distinct monic irreducible factors (distinct-degree counting).
  [[nodiscard]] std::size_t count_prime_factors(const Elem &a) const;

  [[nodiscard]] std::uint32_t inv_mod(std::uint32_t a) const;

  bool operator==(const PolyEngine &) const = default;

private:
  std::uint32_t p_;
};

class ModEngine {
public:
  using Elem = mpz_class;
  static constexpr bool is_domain = false;

  explicit ModEngine(mpz_class n);

  [[nodiscard]] const mpz_class &modulus() const { return n_; }
  /// Prime-power factorization of the modulus, primes ascending.
  [[nodiscard]] const std::vector<std::pair<mpz_class, unsigned>> &prime_powers() const { return pp_; }

  [[nodiscard]] Elem zero() const { return 0; }
  [[nodiscard]] Elem one() const { return reduce(1); }
  [[nodiscard]] Elem from_int(long v) const { return reduce(v); }
  [[nodiscard]] Elem reduce(const mpz_class &v) const;

  [[nodiscard]] Elem add(const Elem &a, const Elem &b) const { return reduce(a + b); }
  [[nodiscard]] Elem sub(const Elem &a, const Elem &b) const { return reduce(a - b); }
  [[nodiscard]] Elem mul(const Elem &a, const Elem &b) const { return reduce(a * b); }
  [[nodiscard]] Elem neg(const Elem &a) const { return reduce(-a); }

  [[nodiscard]] bool is_zero(const Elem &a) const { return sgn(a) == 0; }
  [[nodiscard]] bool is_unit(const Elem &a) const;
  [[nodiscard]] bool equal(const Elem &a, const Elem &b) const { return a == b; }
  [[nodiscard]] Elem unit_inverse(const Elem &u) const;

  [[nodiscard]] std::string to_string(const Elem &a) const { return a.get_str(); }
  [[nodiscard]] std::string name() const { return "IntegersMod(" + n_.get_str() + ")"; }
  [[nodiscard]] std::string tag() const { return "mod(" + n_.get_str() + ")"; }

  bool operator==(const ModEngine &o) const { return n_ == o.n_; }

private:
  mpz_class n_;
  std::vector<std::pair<mpz_class, unsigned>> pp_;
};

/// Prime factorization by trial division and Pollard-Brent, primes ascending.
std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n);

bool is_prime(const mpz_class &n);

template <class E>
concept DomainEngine = E::is_domain;

} // namespace fpmod
