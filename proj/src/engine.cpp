#include "fpmod/engine.hpp"

#include <algorithm>
#include <map>

namespace fpmod {

std::strong_ordering Poly::operator<=>(const Poly &o) const {
  if (c.size() != o.c.size()) return c.size() <=> o.c.size();
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i] != o.c[i]) return c[i] <=> o.c[i];
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- integers

std::pair<mpz_class, mpz_class> IntegerEngine::divmod(const mpz_class &a, const mpz_class &b) const {
  if (sgn(b) == 0) throw DomainError("division by zero");
  mpz_class q, r;
  // Euclidean division: 0 <= r < |b|
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (sgn(r) < 0) {
    r += abs(b);
    q -= sgn(b);
  }
  return {q, r};
}

bool IntegerEngine::divides(const mpz_class &b, const mpz_class &a) const {
  if (sgn(b) == 0) return sgn(a) == 0;
  return mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0;
}

mpz_class IntegerEngine::exact_div(const mpz_class &a, const mpz_class &b) const {
  if (!divides(b, a)) throw DomainError("inexact division " + a.get_str() + " / " + b.get_str());
  if (sgn(b) == 0) return 0;
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

std::size_t IntegerEngine::count_prime_factors(const mpz_class &a) const {
  if (sgn(a) == 0) throw DomainError("prime factors of zero");
  return factor_integer(abs(a)).size();
}

bool is_prime(const mpz_class &n) { return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

namespace {

mpz_class pollard_brent(const mpz_class &n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class y = 2, x, q = 1, g = 1, ys;
    std::size_t r = 1, m = 64;
    auto f = [&](const mpz_class &v) -> mpz_class {
      mpz_class t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = f(y);
      std::size_t k = 0;
      do {
        ys = y;
        for (std::size_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = q * abs(x - y);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        mpz_class d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(mpz_class n, std::map<mpz_class, unsigned> &out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  mpz_class d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

} // namespace

std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n) {
  if (sgn(n) <= 0) throw DomainError("factor_integer expects a positive integer");
  std::map<mpz_class, unsigned> acc;
  for (unsigned long p = 2; p < 10000 && mpz_class(p) * p <= n; ++p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++acc[mpz_class(p)];
      n /= p;
    }
  }
  factor_into(n, acc);
  return {acc.begin(), acc.end()};
}

// ------------------------------------------------------------- polynomials

PolyEngine::PolyEngine(std::uint32_t p) : p_(p) {
  if (p < 2 || p >= (1u << 31) || !is_prime(mpz_class(static_cast<unsigned long>(p))))
    throw DomainError("PolyEngine needs a prime p < 2^31, got " + std::to_string(p));
}

Poly PolyEngine::from_int(long v) const {
  long r = v % static_cast<long>(p_);
  if (r < 0) r += p_;
  return Poly({static_cast<std::uint32_t>(r)});
}

Poly PolyEngine::from_coeffs(const std::vector<long> &coeffs) const {
  std::vector<std::uint32_t> c;
  c.reserve(coeffs.size());
  for (long v : coeffs) {
    long r = v % static_cast<long>(p_);
    if (r < 0) r += p_;
    c.push_back(static_cast<std::uint32_t>(r));
  }
  return Poly(std::move(c));
}

Poly PolyEngine::add(const Poly &a, const Poly &b) const {
  std::vector<std::uint32_t> c(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::uint64_t s = (i < a.c.size() ? a.c[i] : 0) + std::uint64_t(i < b.c.size() ? b.c[i] : 0);
    c[i] = static_cast<std::uint32_t>(s % p_);
  }
  return Poly(std::move(c));
}

Poly PolyEngine::neg(const Poly &a) const {
  Poly r = a;
  for (auto &v : r.c) v = v == 0 ? 0 : p_ - v;
  return r;
}

Poly PolyEngine::sub(const Poly &a, const Poly &b) const { return add(a, neg(b)); }

Poly PolyEngine::mul(const Poly &a, const Poly &b) const {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<std::uint64_t> acc(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      acc[i + j] = (acc[i + j] + std::uint64_t(a.c[i]) * b.c[j]) % p_;
  }
  std::vector<std::uint32_t> c(acc.begin(), acc.end());
  return Poly(std::move(c));
}

Poly PolyEngine::scale(const Poly &a, std::uint32_t s) const {
  Poly r = a;
  for (auto &v : r.c) v = static_cast<std::uint32_t>(std::uint64_t(v) * s % p_);
  r.trim();
  return r;
}

std::uint32_t PolyEngine::inv_mod(std::uint32_t a) const {
  if (a % p_ == 0) throw DomainError("zero has no inverse in F_p");
  mpz_class r, base = a, mod = p_;
  mpz_invert(r.get_mpz_t(), base.get_mpz_t(), mod.get_mpz_t());
  return static_cast<std::uint32_t>(r.get_ui());
}

std::pair<Poly, Poly> PolyEngine::divmod(const Poly &a, const Poly &b) const {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<std::uint32_t> r = a.c;
  std::vector<std::uint32_t> q(a.c.size() - b.c.size() + 1, 0);
  std::uint32_t linv = inv_mod(b.lead());
  for (std::size_t k = q.size(); k-- > 0;) {
    std::uint32_t top = r[k + b.c.size() - 1];
    if (top == 0) continue;
    std::uint32_t f = static_cast<std::uint32_t>(std::uint64_t(top) * linv % p_);
    q[k] = f;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      std::uint64_t sub = std::uint64_t(f) * b.c[j] % p_;
      r[k + j] = static_cast<std::uint32_t>((r[k + j] + p_ - sub) % p_);
    }
  }
  return {Poly(std::move(q)), Poly(std::move(r))};
}

bool PolyEngine::divides(const Poly &b, const Poly &a) const {
  if (b.is_zero()) return a.is_zero();
  return divmod(a, b).second.is_zero();
}

Poly PolyEngine::exact_div(const Poly &a, const Poly &b) const {
  if (b.is_zero()) {
    if (a.is_zero()) return {};
    throw DomainError("inexact polynomial division");
  }
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw DomainError("inexact polynomial division");
  return q;
}

Poly PolyEngine::gcd(Poly a, Poly b) const {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return mul(normalizer(a), a);
}

Poly PolyEngine::powmod(Poly base, mpz_class e, const Poly &m) const {
  Poly result = mod(one(), m);
  base = mod(base, m);
  while (sgn(e) > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = mod(mul(result, base), m);
    base = mod(mul(base, base), m);
    e >>= 1;
  }
  return result;
}

int PolyEngine::compare_measure(const Poly &a, const Poly &b) const {
  return (a.degree() > b.degree()) - (a.degree() < b.degree());
}

Poly PolyEngine::normalizer(const Poly &a) const {
  if (a.is_zero()) return one();
  return Poly({inv_mod(a.lead())});
}

Poly PolyEngine::unit_inverse(const Poly &u) const {
  if (!is_unit(u)) throw DomainError("not a unit: " + to_string(u));
  return Poly({inv_mod(u.c[0])});
}

std::string PolyEngine::to_string(const Poly &a) const {
  std::string s = "[";
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a.c[i]);
  }
  return s + "]";
}

std::string PolyEngine::name() const { return "PolynomialsOverPrimeField(" + std::to_string(p_) + ")"; }
std::string PolyEngine::tag() const { return "poly(" + std::to_string(p_) + ")"; }

std::size_t PolyEngine::count_prime_factors(const Poly &a) const {
  if (a.is_zero()) throw DomainError("prime factors of zero");
  Poly f = mul(normalizer(a), a);
  const int deg = f.degree();
  if (deg == 0) return 0;
  // gcd(f, x^(p^k) - x) is the product of the distinct irreducible factors
  // of f whose degree divides k.
  std::vector<std::size_t> count(deg + 1, 0);
  std::size_t total = 0;
  Poly xpow = mod(x(), f);
  for (int k = 1; k <= deg; ++k) {
    xpow = powmod(xpow, mpz_class(static_cast<unsigned long>(p_)), f);
    Poly h = gcd(f, sub(xpow, x()));
    long rest = h.degree();
    for (int d = 1; d < k; ++d)
      if (k % d == 0) rest -= static_cast<long>(d * count[d]);
    count[k] = static_cast<std::size_t>(rest / k);
    total += count[k];
  }
  return total;
}

// ------------------------------------------------------------------ Z / n

ModEngine::ModEngine(mpz_class n) : n_(std::move(n)) {
  if (n_ < 2) throw DomainError("IntegersMod needs n >= 2, got " + n_.get_str());
  pp_ = factor_integer(n_);
}

mpz_class ModEngine::reduce(const mpz_class &v) const {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), n_.get_mpz_t());
  return r;
}

bool ModEngine::is_unit(const mpz_class &a) const {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n_.get_mpz_t());
  return g == 1;
}

mpz_class ModEngine::unit_inverse(const mpz_class &u) const {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), u.get_mpz_t(), n_.get_mpz_t()) == 0)
    throw DomainError("not a unit mod " + n_.get_str() + ": " + u.get_str());
  return r;
}

} // namespace fpmod
