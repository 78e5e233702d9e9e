#include "fpmod/finlab.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace fpmod::finlab {

// ------------------------------------------------------------------- caps

Caps Caps::from_env() {
  const char *env = std::getenv("FPMOD_CAPS");
  return env ? parse(env) : Caps{};
}

Caps Caps::parse(const std::string &text, Caps caps) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("caps: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq), digits = item.substr(eq + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError("caps: '" + digits + "' is not a count");
    std::size_t value = std::stoul(digits);
    if (key == "ring")
      caps.ring = value;
    else if (key == "module")
      caps.module = value;
    else if (key == "endomorphisms")
      caps.endomorphisms = value;
    else if (key == "lattice")
      caps.lattice = value;
    else
      throw DomainError("caps: unknown key '" + key + "'");
  }
  if (caps.module > 256) throw DomainError("caps: module cap cannot exceed 256");
  return caps;
}

// ----------------------------------------------------------------- ElemSet

std::size_t ElemSet::count() const {
  std::size_t c = 0;
  for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
  return c;
}

std::vector<Index> ElemSet::elements() const {
  std::vector<Index> out;
  for (std::size_t k = 0; k < 4; ++k) {
    std::uint64_t x = w[k];
    while (x) {
      out.push_back(static_cast<Index>(k * 64 + static_cast<std::size_t>(std::countr_zero(x))));
      x &= x - 1;
    }
  }
  return out;
}

bool ElemSet::subset_of(const ElemSet &o) const {
  for (std::size_t k = 0; k < 4; ++k)
    if (w[k] & ~o.w[k]) return false;
  return true;
}

ElemSet ElemSet::operator&(const ElemSet &o) const {
  ElemSet r;
  for (std::size_t k = 0; k < 4; ++k) r.w[k] = w[k] & o.w[k];
  return r;
}

ElemSet ElemSet::operator|(const ElemSet &o) const {
  ElemSet r;
  for (std::size_t k = 0; k < 4; ++k) r.w[k] = w[k] | o.w[k];
  return r;
}

namespace {

ElemSet zero_set() {
  ElemSet z;
  z.set(0);
  return z;
}

/// |A + B| = |A| |B| / |A cap B| for subgroups of a finite abelian group.
std::size_t sum_order(const ElemSet &A, const ElemSet &B) { return A.count() * B.count() / (A & B).count(); }

} // namespace

// -------------------------------------------------------------------- rings

FiniteRing::FiniteRing(std::string name, std::size_t n, std::vector<Index> add_table, std::vector<Index> mul_table,
                       std::vector<std::string> labels, const Caps &caps)
    : name_(std::move(name)), n_(n), add_(std::move(add_table)), mul_(std::move(mul_table)),
      labels_(std::move(labels)) {
  if (n_ > caps.ring) throw CapExceeded("ring " + name_ + " has " + std::to_string(n_) + " elements");
  if (n_ < 2) throw DomainError("ring " + name_ + ": the zero ring is not supported");
  if (add_.size() != n_ * n_ || mul_.size() != n_ * n_ || labels_.size() != n_)
    throw DomainError("ring " + name_ + ": table sizes do not match");
  auto fail = [&](const std::string &what) { throw DomainError("ring " + name_ + ": " + what); };
  neg_.assign(n_, 0);
  for (Index a = 0; a < n_; ++a) {
    if (add(0, a) != a || add(a, 0) != a) fail("0 is not the additive identity");
    if (mul(1, a) != a || mul(a, 1) != a) fail("1 is not the multiplicative identity");
    bool found = false;
    for (Index b = 0; b < n_ && !found; ++b)
      if (add(a, b) == 0) {
        neg_[a] = b;
        found = true;
      }
    if (!found) fail("missing additive inverse");
    for (Index b = 0; b < n_; ++b) {
      if (add(a, b) != add(b, a)) fail("addition is not commutative");
      if (mul(a, b) != mul(b, a)) commutative_ = false;
    }
  }
  for (Index a = 0; a < n_; ++a)
    for (Index b = 0; b < n_; ++b)
      for (Index c = 0; c < n_; ++c) {
        if (add(add(a, b), c) != add(a, add(b, c))) fail("addition is not associative");
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) fail("multiplication is not associative");
        if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) fail("left distributivity fails");
        if (mul(add(a, b), c) != add(mul(a, c), mul(b, c))) fail("right distributivity fails");
      }
  unit_.assign(n_, false);
  for (Index a = 0; a < n_; ++a)
    for (Index b = 0; b < n_; ++b)
      if (mul(a, b) == 1 && mul(b, a) == 1) unit_[a] = true;
}

std::vector<Index> FiniteRing::idempotents() const {
  std::vector<Index> out;
  for (Index a = 0; a < n_; ++a)
    if (is_idempotent(a)) out.push_back(a);
  return out;
}

namespace {

struct BuiltRing {
  RingPtr ring;
  std::vector<Index> raw_to_index;
};

/// Orders raw elements so that zero and one come first.
BuiltRing build_ring(const std::string &name, std::size_t n, const std::function<std::size_t(std::size_t, std::size_t)> &add,
                     const std::function<std::size_t(std::size_t, std::size_t)> &mul,
                     const std::function<std::string(std::size_t)> &label, std::size_t zero, std::size_t one,
                     const Caps &caps) {
  if (n > caps.ring) throw CapExceeded("ring " + name + " has " + std::to_string(n) + " elements");
  std::vector<std::size_t> order{zero, one};
  for (std::size_t i = 0; i < n; ++i)
    if (i != zero && i != one) order.push_back(i);
  std::vector<Index> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = static_cast<Index>(k);
  std::vector<Index> A(n * n), M(n * n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[pos[i]] = label(i);
    for (std::size_t j = 0; j < n; ++j) {
      A[pos[i] * n + pos[j]] = pos[add(i, j)];
      M[pos[i] * n + pos[j]] = pos[mul(i, j)];
    }
  }
  return {std::make_shared<FiniteRing>(name, n, std::move(A), std::move(M), std::move(labels), caps), std::move(pos)};
}

} // namespace

RingPtr zmod(unsigned n, const Caps &caps) {
  if (n < 2) throw DomainError("zmod: modulus must be at least 2");
  return build_ring(
             "zmod(" + std::to_string(n) + ")", n, [n](std::size_t a, std::size_t b) { return (a + b) % n; },
             [n](std::size_t a, std::size_t b) { return (a * b) % n; },
             [](std::size_t a) { return std::to_string(a); }, 0, 1, caps)
      .ring;
}

RingPtr product(const FiniteRing &A, const FiniteRing &B, const Caps &caps) {
  const std::size_t nb = B.size();
  return build_ring(
             "product(" + A.name() + "," + B.name() + ")", A.size() * nb,
             [&](std::size_t x, std::size_t y) {
               return static_cast<std::size_t>(A.add(x / nb, y / nb)) * nb + B.add(x % nb, y % nb);
             },
             [&](std::size_t x, std::size_t y) {
               return static_cast<std::size_t>(A.mul(x / nb, y / nb)) * nb + B.mul(x % nb, y % nb);
             },
             [&](std::size_t x) { return "(" + A.label(x / nb) + "," + B.label(x % nb) + ")"; }, 0, nb + 1, caps)
      .ring;
}

RingPtr polynomial_quotient(unsigned p, const std::vector<unsigned> &f_in, const Caps &caps) {
  if (!is_prime(mpz_class(p))) throw DomainError("quot: " + std::to_string(p) + " is not prime");
  std::vector<unsigned> f;
  for (unsigned c : f_in) f.push_back(c % p);
  while (!f.empty() && f.back() == 0) f.pop_back();
  if (f.size() < 2) throw DomainError("quot: the modulus polynomial must have positive degree");
  const std::size_t d = f.size() - 1;
  // make f monic
  unsigned inv = 1;
  while ((inv * f.back()) % p != 1) ++inv;
  for (auto &c : f) c = (c * inv) % p;
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) {
    n *= p;
    if (n > caps.ring) throw CapExceeded("quot ring exceeds the ring cap");
  }
  auto digits = [p, d](std::size_t x) {
    std::vector<unsigned> c(d);
    for (std::size_t i = 0; i < d; ++i, x /= p) c[i] = static_cast<unsigned>(x % p);
    return c;
  };
  auto pack = [p, d](const std::vector<unsigned> &c) {
    std::size_t x = 0;
    for (std::size_t i = d; i-- > 0;) x = x * p + c[i];
    return x;
  };
  std::string name = "quot(" + std::to_string(p) + ",[";
  for (std::size_t i = 0; i < f_in.size(); ++i) name += (i ? "," : "") + std::to_string(f_in[i]);
  name += "])";
  return build_ring(
             name, n,
             [&](std::size_t a, std::size_t b) {
               auto x = digits(a), y = digits(b);
               for (std::size_t i = 0; i < d; ++i) x[i] = (x[i] + y[i]) % p;
               return pack(x);
             },
             [&](std::size_t a, std::size_t b) {
               auto x = digits(a), y = digits(b);
               std::vector<unsigned> z(2 * d, 0);
               for (std::size_t i = 0; i < d; ++i)
                 for (std::size_t j = 0; j < d; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
               for (std::size_t k = 2 * d; k-- > d;) {
                 unsigned c = z[k];
                 if (!c) continue;
                 for (std::size_t i = 0; i <= d; ++i) z[k - d + i] = (z[k - d + i] + p * p - c * f[i] % p) % p;
               }
               z.resize(d);
               return pack(z);
             },
             [&](std::size_t a) {
               auto c = digits(a);
               std::string s;
               for (std::size_t i = 0; i < d; ++i) {
                 if (!c[i]) continue;
                 if (!s.empty()) s += "+";
                 std::string mono = i == 0 ? "" : (i == 1 ? "x" : "x^" + std::to_string(i));
                 if (mono.empty())
                   s += std::to_string(c[i]);
                 else
                   s += (c[i] == 1 ? "" : std::to_string(c[i])) + mono;
               }
               return s.empty() ? std::string("0") : s;
             },
             0, 1, caps)
      .ring;
}

RingPtr triangular(const FiniteRing &R, const Caps &caps) {
  const std::size_t n = R.size();
  auto split = [n](std::size_t x) { return std::array<Index, 3>{Index(x / (n * n)), Index(x / n % n), Index(x % n)}; };
  auto pack = [n](Index a, Index b, Index c) { return (static_cast<std::size_t>(a) * n + b) * n + c; };
  if (n * n * n > caps.ring) throw CapExceeded("triangular ring exceeds the ring cap");
  return build_ring(
             "triangular(" + R.name() + ")", n * n * n,
             [&](std::size_t x, std::size_t y) {
               auto u = split(x), v = split(y);
               return pack(R.add(u[0], v[0]), R.add(u[1], v[1]), R.add(u[2], v[2]));
             },
             [&](std::size_t x, std::size_t y) {
               // [a b; 0 c][a' b'; 0 c'] = [aa', ab' + bc'; 0, cc']
               auto u = split(x), v = split(y);
               return pack(R.mul(u[0], v[0]), R.add(R.mul(u[0], v[1]), R.mul(u[1], v[2])), R.mul(u[2], v[2]));
             },
             [&](std::size_t x) {
               auto u = split(x);
               return "[" + R.label(u[0]) + "," + R.label(u[1]) + ";0," + R.label(u[2]) + "]";
             },
             0, pack(1, 0, 1), caps)
      .ring;
}

Idealization idealization(const RingPtr &R, std::size_t maximal_ideal, const Caps &caps) {
  if (!R->is_commutative()) throw DomainError("idealization needs a commutative ring");
  auto maxes = maximal_right_ideals(R, caps);
  if (maximal_ideal >= maxes.size())
    throw DomainError("idealization: ring has only " + std::to_string(maxes.size()) + " maximal ideals");
  const ElemSet &T = maxes[maximal_ideal];
  auto Tel = T.elements();
  // cosets of T, each represented by its smallest element
  std::vector<Index> rep_of(R->size());
  std::vector<Index> reps;
  for (Index x = 0; x < R->size(); ++x) {
    Index best = x;
    for (Index t : Tel) best = std::min(best, R->add(x, t));
    rep_of[x] = best;
    if (best == x) reps.push_back(x);
  }
  std::vector<Index> coset_index(R->size());
  for (Index x = 0; x < R->size(); ++x)
    coset_index[x] = static_cast<Index>(std::find(reps.begin(), reps.end(), rep_of[x]) - reps.begin());
  const std::size_t ns = reps.size();
  auto S_add = [&](std::size_t s, std::size_t t) { return coset_index[R->add(reps[s], reps[t])]; };
  auto act = [&](std::size_t r, std::size_t s) { return coset_index[R->mul(static_cast<Index>(r), reps[s])]; };
  auto built = build_ring(
      "idealization(" + R->name() + "," + std::to_string(maximal_ideal) + ")", R->size() * ns,
      [&](std::size_t x, std::size_t y) {
        return static_cast<std::size_t>(R->add(x / ns, y / ns)) * ns + S_add(x % ns, y % ns);
      },
      [&](std::size_t x, std::size_t y) {
        // (r,s)(r',s') = (rr', rs' + sr')
        std::size_t r = x / ns, s = x % ns, r2 = y / ns, s2 = y % ns;
        return static_cast<std::size_t>(R->mul(r, r2)) * ns + S_add(act(r, s2), act(r2, s));
      },
      [&](std::size_t x) { return "(" + R->label(x / ns) + "|" + R->label(reps[x % ns]) + "+T)"; }, 0, ns, caps);
  Idealization out{built.ring, {}};
  for (std::size_t s = 0; s < ns; ++s) out.zero_times_S.push_back(built.raw_to_index[s]);
  std::sort(out.zero_times_S.begin(), out.zero_times_S.end());
  return out;
}

// ------------------------------------------------------------- ring parser

namespace {

class RingParser {
public:
  RingParser(const std::string &s, const Caps &caps) : s_(s), caps_(caps) {}

  RingPtr parse() {
    RingPtr r = ring();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return r;
  }

private:
  const std::string &s_;
  const Caps &caps_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string &what) const {
    throw std::invalid_argument("ring spec '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  unsigned number() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected a number");
    if (pos_ - start > 6) error("number too large");
    return static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
  }
  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  RingPtr ring() {
    RingPtr base = atom();
    if (accept('^')) {
      unsigned k = number();
      if (k == 0) error("exponent must be positive");
      RingPtr r = base;
      for (unsigned i = 1; i < k; ++i) r = product(*r, *base, caps_);
      return r;
    }
    return base;
  }

  RingPtr atom() {
    if (accept('(')) {
      RingPtr r = ring();
      expect(')');
      return r;
    }
    std::string id = ident();
    if (id == "z") return zmod(number(), caps_);
    if (id == "zmod") {
      expect('(');
      unsigned n = number();
      expect(')');
      return zmod(n, caps_);
    }
    if (id == "product") {
      expect('(');
      RingPtr r = ring();
      while (accept(',')) r = product(*r, *ring(), caps_);
      expect(')');
      return r;
    }
    if (id == "quot") {
      expect('(');
      unsigned p = number();
      expect(',');
      expect('[');
      std::vector<unsigned> f{number()};
      while (accept(',')) f.push_back(number());
      expect(']');
      expect(')');
      return polynomial_quotient(p, f, caps_);
    }
    if (id == "idealization") {
      expect('(');
      RingPtr r = ring();
      unsigned i = 0;
      if (accept(',')) i = number();
      expect(')');
      return idealization(r, i, caps_).ring;
    }
    if (id == "triangular") {
      expect('(');
      RingPtr r = ring();
      expect(')');
      return triangular(*r, caps_);
    }
    error(id.empty() ? "expected a ring" : "unknown ring constructor '" + id + "'");
  }
};

} // namespace

RingPtr parse_ring(const std::string &spec, const Caps &caps) { return RingParser(spec, caps).parse(); }

// ------------------------------------------------------------------ modules

FiniteModule::FiniteModule(RingPtr ring, std::size_t n, std::vector<Index> add_table, std::vector<Index> act_table,
                           std::vector<std::string> labels, const Caps &caps)
    : ring_(std::move(ring)), n_(n), add_(std::move(add_table)), act_(std::move(act_table)),
      labels_(std::move(labels)) {
  if (n_ > caps.module || n_ > 256) throw CapExceeded("module has " + std::to_string(n_) + " elements");
  const std::size_t nr = ring_->size();
  if (n_ == 0 || add_.size() != n_ * n_ || act_.size() != n_ * nr || labels_.size() != n_)
    throw DomainError("module: table sizes do not match");
  auto fail = [](const std::string &what) { throw DomainError("module: " + what); };
  neg_.assign(n_, 0);
  for (Index a = 0; a < n_; ++a) {
    if (add(0, a) != a) fail("0 is not the additive identity");
    bool found = false;
    for (Index b = 0; b < n_ && !found; ++b)
      if (add(a, b) == 0) {
        neg_[a] = b;
        found = true;
      }
    if (!found) fail("missing additive inverse");
    if (act(a, 1) != a) fail("x 1 != x");
    for (Index b = 0; b < n_; ++b) {
      if (add(a, b) != add(b, a)) fail("addition is not commutative");
      for (Index c = 0; c < n_; ++c)
        if (add(add(a, b), c) != add(a, add(b, c))) fail("addition is not associative");
      for (Index r = 0; r < nr; ++r)
        if (act(add(a, b), r) != add(act(a, r), act(b, r))) fail("(x+y)r != xr+yr");
    }
    for (Index r = 0; r < nr; ++r)
      for (Index s = 0; s < nr; ++s) {
        if (act(a, ring_->add(r, s)) != add(act(a, r), act(a, s))) fail("x(r+s) != xr+xs");
        if (act(a, ring_->mul(r, s)) != act(act(a, r), s)) fail("x(rs) != (xr)s");
      }
  }
}

ElemSet FiniteModule::all() const {
  ElemSet s;
  for (std::size_t i = 0; i < n_; ++i) s.set(i);
  return s;
}

FiniteModule regular_module(const RingPtr &R, const Caps &caps) { return free_module(R, 1, caps); }

FiniteModule free_module(const RingPtr &R, std::size_t rank, const Caps &caps) {
  const std::size_t nr = R->size();
  std::size_t n = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    n *= nr;
    if (n > caps.module || n > 256) throw CapExceeded("free module of rank " + std::to_string(rank));
  }
  auto digits = [&](std::size_t x) {
    std::vector<Index> v(rank);
    for (std::size_t i = rank; i-- > 0; x /= nr) v[i] = static_cast<Index>(x % nr);
    return v;
  };
  auto pack = [&](const std::vector<Index> &v) {
    std::size_t x = 0;
    for (Index c : v) x = x * nr + c;
    return static_cast<Index>(x);
  };
  std::vector<Index> add(n * n), act(n * nr);
  std::vector<std::string> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    auto u = digits(x);
    for (std::size_t y = 0; y < n; ++y) {
      auto v = digits(y), w = u;
      for (std::size_t i = 0; i < rank; ++i) w[i] = R->add(u[i], v[i]);
      add[x * n + y] = pack(w);
    }
    for (Index r = 0; r < nr; ++r) {
      auto w = u;
      for (std::size_t i = 0; i < rank; ++i) w[i] = R->mul(u[i], r);
      act[x * nr + r] = pack(w);
    }
    if (rank == 1) {
      labels[x] = R->label(u[0]);
    } else {
      std::string s = "(";
      for (std::size_t i = 0; i < rank; ++i) s += (i ? "," : "") + R->label(u[i]);
      labels[x] = s + ")";
    }
  }
  return FiniteModule(R, n, std::move(add), std::move(act), std::move(labels), caps);
}

FiniteModule direct_sum(const FiniteModule &A, const FiniteModule &B, const Caps &caps) {
  if (A.ring() != B.ring() && A.ring()->name() != B.ring()->name())
    throw DomainError("direct sum of modules over different rings");
  const std::size_t na = A.size(), nb = B.size(), n = na * nb, nr = A.ring()->size();
  if (n > caps.module || n > 256) throw CapExceeded("direct sum has " + std::to_string(n) + " elements");
  std::vector<Index> add(n * n), act(n * nr);
  std::vector<std::string> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    const Index a = static_cast<Index>(x / nb), b = static_cast<Index>(x % nb);
    labels[x] = "(" + A.label(a) + "," + B.label(b) + ")";
    for (std::size_t y = 0; y < n; ++y)
      add[x * n + y] = static_cast<Index>(A.add(a, static_cast<Index>(y / nb)) * nb + B.add(b, static_cast<Index>(y % nb)));
    for (Index r = 0; r < nr; ++r) act[x * nr + r] = static_cast<Index>(A.act(a, r) * nb + B.act(b, r));
  }
  return FiniteModule(A.ring(), n, std::move(add), std::move(act), std::move(labels), caps);
}

FiniteModule quotient(const FiniteModule &M, const ElemSet &K, const Caps &caps) {
  if (!is_submodule(M, K)) throw DomainError("quotient by a subset that is not a submodule");
  auto Kel = K.elements();
  std::vector<Index> rep_of(M.size());
  std::vector<Index> reps;
  for (Index x = 0; x < M.size(); ++x) {
    Index best = x;
    for (Index k : Kel) best = std::min(best, M.add(x, k));
    rep_of[x] = best;
    if (best == x) reps.push_back(x);
  }
  std::vector<Index> idx(M.size());
  for (Index x = 0; x < M.size(); ++x)
    idx[x] = static_cast<Index>(std::lower_bound(reps.begin(), reps.end(), rep_of[x]) - reps.begin());
  const std::size_t n = reps.size(), nr = M.ring()->size();
  std::vector<Index> add(n * n), act(n * nr);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = "[" + M.label(reps[i]) + "]";
    for (std::size_t j = 0; j < n; ++j) add[i * n + j] = idx[M.add(reps[i], reps[j])];
    for (Index r = 0; r < nr; ++r) act[i * nr + r] = idx[M.act(reps[i], r)];
  }
  return FiniteModule(M.ring(), n, std::move(add), std::move(act), std::move(labels), caps);
}

FiniteModule submodule(const FiniteModule &M, const ElemSet &K, const Caps &caps) {
  if (!is_submodule(M, K)) throw DomainError("subset is not a submodule");
  auto el = K.elements();
  std::vector<Index> idx(M.size(), 0);
  for (std::size_t i = 0; i < el.size(); ++i) idx[el[i]] = static_cast<Index>(i);
  const std::size_t n = el.size(), nr = M.ring()->size();
  std::vector<Index> add(n * n), act(n * nr);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = M.label(el[i]);
    for (std::size_t j = 0; j < n; ++j) add[i * n + j] = idx[M.add(el[i], el[j])];
    for (Index r = 0; r < nr; ++r) act[i * nr + r] = idx[M.act(el[i], r)];
  }
  return FiniteModule(M.ring(), n, std::move(add), std::move(act), std::move(labels), caps);
}

FiniteModule cokernel_module(const RingPtr &R, std::size_t m, const std::vector<std::vector<Index>> &columns,
                             const Caps &caps) {
  FiniteModule F = free_module(R, m, caps);
  std::vector<Index> gens;
  for (const auto &c : columns) {
    if (c.size() != m) throw DomainError("cokernel_module: column has the wrong length");
    std::size_t x = 0;
    for (Index v : c) x = x * R->size() + (v % R->size());
    gens.push_back(static_cast<Index>(x));
  }
  return quotient(F, span(F, gens), caps);
}

// ------------------------------------------------------------------ lattice

namespace {

ElemSet cyclic(const FiniteModule &M, Index x) {
  ElemSet s;
  for (Index r = 0; r < M.ring()->size(); ++r) s.set(M.act(x, r));
  return s;
}

} // namespace

ElemSet sum(const FiniteModule &M, const ElemSet &A, const ElemSet &B) {
  ElemSet s;
  auto a = A.elements(), b = B.elements();
  for (Index x : a)
    for (Index y : b) s.set(M.add(x, y));
  return s;
}

ElemSet span(const FiniteModule &M, const std::vector<Index> &gens) {
  ElemSet s = zero_set();
  for (Index g : gens)
    if (!s.test(g)) s = sum(M, s, cyclic(M, g));
  return s;
}

bool is_submodule(const FiniteModule &M, const ElemSet &K) {
  if (!K.test(0)) return false;
  auto el = K.elements();
  if (el.back() >= M.size()) return false;
  for (Index x : el) {
    for (Index y : el)
      if (!K.test(M.add(x, y))) return false;
    for (Index r = 0; r < M.ring()->size(); ++r)
      if (!K.test(M.act(x, r))) return false;
  }
  return true;
}

bool SubmoduleLattice::contains(const ElemSet &K) const {
  return std::binary_search(submodules.begin(), submodules.end(), K, [](const ElemSet &a, const ElemSet &b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
  });
}

SubmoduleLattice enumerate_submodules(const FiniteModule &M, const Caps &caps) {
  std::set<ElemSet> cyc;
  for (Index x = 0; x < M.size(); ++x) cyc.insert(cyclic(M, x));
  std::set<ElemSet> found{zero_set()};
  std::vector<ElemSet> queue{zero_set()};
  while (!queue.empty()) {
    ElemSet S = queue.back();
    queue.pop_back();
    for (const auto &C : cyc) {
      if (C.subset_of(S)) continue;
      ElemSet T = sum(M, S, C);
      if (found.insert(T).second) {
        if (found.size() > caps.lattice) throw CapExceeded("submodule lattice larger than " + std::to_string(caps.lattice));
        queue.push_back(T);
      }
    }
  }
  SubmoduleLattice L{{found.begin(), found.end()}};
  std::sort(L.submodules.begin(), L.submodules.end(), [](const ElemSet &a, const ElemSet &b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
  });
  return L;
}

namespace {

bool is_small(const ElemSet &K, const ElemSet &M, const SubmoduleLattice &L) {
  for (const auto &X : L.submodules)
    if (sum_order(K, X) == M.count() && X != M) return false;
  return true;
}

bool is_essential(const ElemSet &K, const SubmoduleLattice &L) {
  const ElemSet z = zero_set();
  for (const auto &X : L.submodules)
    if (X != z && (X & K) == z) return false;
  return true;
}

std::vector<ElemSet> minimal_nonzero(const SubmoduleLattice &L) {
  const ElemSet z = zero_set();
  std::vector<ElemSet> out;
  for (const auto &X : L.submodules) {
    if (X == z) continue;
    bool minimal = true;
    for (const auto &Y : L.submodules)
      if (Y != z && Y != X && Y.subset_of(X)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(X);
  }
  return out;
}

std::vector<ElemSet> maximal_proper(const SubmoduleLattice &L) {
  const ElemSet &M = L.submodules.back();
  std::vector<ElemSet> out;
  for (const auto &X : L.submodules) {
    if (X == M) continue;
    bool maximal = true;
    for (const auto &Y : L.submodules)
      if (Y != M && Y != X && X.subset_of(Y)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(X);
  }
  return out;
}

} // namespace

SubmodulePredicates submodule_predicates(const FiniteModule &, const SubmoduleLattice &L, const ElemSet &K) {
  if (!L.contains(K)) throw DomainError("predicates: subset is not a submodule");
  const ElemSet &M = L.submodules.back();
  const ElemSet z = zero_set();
  SubmodulePredicates p;
  p.essential = is_essential(K, L);
  p.small = is_small(K, M, L);
  p.maximal = K != M;
  p.simple = K != z;
  for (const auto &X : L.submodules) {
    if (X != K && X != M && K.subset_of(X)) p.maximal = false;
    if (X != K && X != z && X.subset_of(K)) p.simple = false;
  }
  return p;
}

SocleRadical socle_and_radical(const FiniteModule &M, const SubmoduleLattice &L) {
  SocleRadical out{zero_set(), L.submodules.back()};
  for (const auto &S : minimal_nonzero(L)) out.socle = sum(M, out.socle, S);
  for (const auto &X : maximal_proper(L)) out.radical = out.radical & X;
  return out;
}

UdimWitness udim_bruteforce(const FiniteModule &M, const SubmoduleLattice &L) {
  const ElemSet z = zero_set();
  UdimWitness w;
  // (a) largest independent family; every such family shrinks to one of
  // minimal submodules of the same size
  auto simples = minimal_nonzero(L);
  std::vector<ElemSet> best, cur;
  std::function<void(std::size_t, const ElemSet &)> dfs = [&](std::size_t start, const ElemSet &acc) {
    if (cur.size() > best.size()) best = cur;
    for (std::size_t i = start; i < simples.size(); ++i) {
      if (cur.size() + (simples.size() - i) <= best.size()) return;
      if ((acc & simples[i]) != z) continue;
      cur.push_back(simples[i]);
      dfs(i + 1, sum(M, acc, simples[i]));
      cur.pop_back();
    }
  };
  dfs(0, z);
  w.independent_family = best.size();
  w.family = best;
  // (b) an essential direct sum of uniform submodules, greedy from the top;
  // a finite module is uniform iff it has exactly one minimal submodule
  ElemSet acc = z;
  for (auto it = L.submodules.rbegin(); it != L.submodules.rend(); ++it) {
    const ElemSet &U = *it;
    if (U == z || (U & acc) != z) continue;
    std::size_t minimal_inside = 0;
    for (const auto &S : simples)
      if (S.subset_of(U)) ++minimal_inside;
    if (minimal_inside != 1) continue;
    acc = sum(M, acc, U);
    ++w.uniform_sum;
  }
  if (!is_essential(acc, L)) throw DomainError("udim: greedy uniform sum is not essential");
  return w;
}

HdimWitness hdim_bruteforce(const FiniteModule &, const SubmoduleLattice &L) {
  const ElemSet &M = L.submodules.back();
  auto maxes = maximal_proper(L);
  // M/N is hollow iff N is proper and lies in exactly one maximal submodule
  std::vector<ElemSet> cand;
  for (const auto &N : L.submodules) {
    if (N == M) continue;
    std::size_t above = 0;
    for (const auto &X : maxes)
      if (N.subset_of(X)) ++above;
    if (above == 1) cand.push_back(N);
  }
  HdimWitness w;
  std::vector<ElemSet> cur;
  auto coindependent = [&](const std::vector<ElemSet> &F) {
    for (std::size_t i = 0; i < F.size(); ++i) {
      ElemSet inter = M;
      for (std::size_t j = 0; j < F.size(); ++j)
        if (j != i) inter = inter & F[j];
      if (sum_order(F[i], inter) != M.count()) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    if (cur.size() > w.value) {
      ElemSet inter = M;
      for (const auto &N : cur) inter = inter & N;
      if (is_small(inter, M, L)) {
        w.value = cur.size();
        w.family = cur;
      }
    }
    for (std::size_t i = start; i < cand.size(); ++i) {
      cur.push_back(cand[i]);
      if (coindependent(cur)) dfs(i + 1);
      cur.pop_back();
    }
  };
  dfs(0);
  return w;
}

// ------------------------------------------------------ homomorphism search

std::vector<Index> generating_set(const FiniteModule &M) {
  std::vector<Index> gens;
  ElemSet S = zero_set();
  while (S.count() < M.size()) {
    Index best = 0;
    std::size_t best_size = 0;
    for (Index x = 0; x < M.size(); ++x) {
      if (S.test(x)) continue;
      std::size_t sz = sum_order(S, cyclic(M, x));
      if (sz > best_size) {
        best_size = sz;
        best = x;
      }
    }
    gens.push_back(best);
    S = sum(M, S, cyclic(M, best));
  }
  return gens;
}

namespace {

/// Extends a homomorphism defined on a submodule (f[x] = -1 elsewhere) by
/// x |-> y; false if the extension is not well defined.
bool extend(const FiniteModule &A, const FiniteModule &B, std::vector<int> &f, Index x, Index y) {
  std::vector<Index> dom;
  for (Index a = 0; a < A.size(); ++a)
    if (f[a] >= 0) dom.push_back(a);
  for (Index r = 0; r < A.ring()->size(); ++r) {
    const Index xr = A.act(x, r), yr = B.act(y, r);
    for (Index d : dom) {
      const Index e = A.add(d, xr);
      const int v = B.add(static_cast<Index>(f[d]), yr);
      if (f[e] < 0)
        f[e] = v;
      else if (f[e] != v)
        return false;
    }
  }
  return true;
}

/// Depth-first search over generator images; visit returns false to stop.
void search_homs(const FiniteModule &A, const FiniteModule &B, const Caps &caps,
                 const std::function<bool(const std::vector<int> &)> &visit) {
  if (A.ring()->name() != B.ring()->name()) throw DomainError("homomorphisms between modules over different rings");
  auto gens = generating_set(A);
  std::size_t visited = 0;
  bool stop = false;
  std::vector<int> f0(A.size(), -1);
  f0[0] = 0;
  std::function<void(std::size_t, const std::vector<int> &)> dfs = [&](std::size_t i, const std::vector<int> &f) {
    if (stop) return;
    if (i == gens.size()) {
      if (!visit(f)) stop = true;
      return;
    }
    for (Index y = 0; y < B.size() && !stop; ++y) {
      if (++visited > caps.endomorphisms)
        throw CapExceeded("homomorphism search visited more than " + std::to_string(caps.endomorphisms) + " candidates");
      auto g = f;
      if (extend(A, B, g, gens[i], y)) dfs(i + 1, g);
    }
  };
  dfs(0, f0);
}

std::vector<Index> to_table(const std::vector<int> &f) { return {f.begin(), f.end()}; }

} // namespace

std::vector<std::vector<Index>> homomorphisms(const FiniteModule &A, const FiniteModule &B, const Caps &caps) {
  std::vector<std::vector<Index>> out;
  search_homs(A, B, caps, [&](const std::vector<int> &f) {
    out.push_back(to_table(f));
    return true;
  });
  return out;
}

bool isomorphic_bruteforce(const FiniteModule &A, const FiniteModule &B, const Caps &caps) {
  if (A.size() != B.size()) return false;
  bool found = false;
  search_homs(A, B, caps, [&](const std::vector<int> &f) {
    std::vector<bool> hit(B.size(), false);
    for (int v : f) {
      if (hit[v]) return true;
      hit[v] = true;
    }
    found = true;
    return false;
  });
  return found;
}

bool is_projective_bruteforce(const FiniteModule &M, const Caps &caps) {
  if (M.size() == 1) return true;
  auto gens = generating_set(M);
  // pi : R^g -> M, e_j |-> gens[j]. A section has coordinates s_j in
  // Hom(M, R) with sum_j gens[j] s_j = id. The map (s_j) |-> sum_j gens[j] s_j
  // is additive, so its image is the subgroup of End(M) generated by the
  // maps y |-> gens[j] f(y); M is projective iff id lies in it.
  FiniteModule R = regular_module(M.ring(), caps);
  auto H = homomorphisms(M, R, caps);
  using Table = std::vector<Index>;
  auto plus = [&](const Table &u, const Table &v) {
    Table w(u.size());
    for (std::size_t y = 0; y < u.size(); ++y) w[y] = M.add(u[y], v[y]);
    return w;
  };
  Table id(M.size());
  for (std::size_t y = 0; y < id.size(); ++y) id[y] = static_cast<Index>(y);
  std::set<Table> group{Table(M.size(), 0)};
  for (Index x : gens)
    for (const auto &f : H) {
      Table t(M.size());
      for (std::size_t y = 0; y < t.size(); ++y) t[y] = M.act(x, f[y]);
      if (group.contains(t)) continue;
      std::vector<Table> old(group.begin(), group.end());
      for (Table k = t; !group.contains(k); k = plus(k, t))
        for (const auto &u : old) group.insert(plus(u, k));
      if (group.size() > caps.endomorphisms)
        throw CapExceeded("trace subgroup exceeds " + std::to_string(caps.endomorphisms) + " endomorphisms");
      if (group.contains(id)) return true;
    }
  return false;
}

std::vector<std::vector<Index>> idempotent_endomorphisms(const FiniteModule &M, const Caps &caps) {
  std::vector<std::vector<Index>> out;
  search_homs(M, M, caps, [&](const std::vector<int> &f) {
    for (std::size_t x = 0; x < f.size(); ++x)
      if (f[static_cast<std::size_t>(f[x])] != f[x]) return true;
    out.push_back(to_table(f));
    return true;
  });
  return out;
}

namespace {

ElemSet image(const std::vector<Index> &e) {
  ElemSet s;
  for (Index v : e) s.set(v);
  return s;
}

ElemSet kernel(const std::vector<Index> &e) {
  ElemSet s;
  for (std::size_t x = 0; x < e.size(); ++x)
    if (e[x] == 0) s.set(x);
  return s;
}

struct SummandOracle {
  const FiniteModule &M;
  const Caps &caps;
  std::map<ElemSet, bool> projective, stable;

  bool is_projective(const ElemSet &P) {
    auto it = projective.find(P);
    if (it != projective.end()) return it->second;
    return projective[P] = is_projective_bruteforce(submodule(M, P, caps), caps);
  }
  bool is_stable(const ElemSet &N) {
    auto it = stable.find(N);
    if (it != stable.end()) return it->second;
    return stable[N] = is_stable_bruteforce(submodule(M, N, caps), caps);
  }
};

} // namespace

bool is_stable_bruteforce(const FiniteModule &M, const Caps &caps) {
  SummandOracle o{M, caps, {}, {}};
  for (const auto &e : idempotent_endomorphisms(M, caps)) {
    ElemSet P = image(e);
    if (P.count() > 1 && o.is_projective(P)) return false;
  }
  return true;
}

BruteDecomposition decompose_bruteforce(const FiniteModule &M, const Caps &caps) {
  SummandOracle o{M, caps, {}, {}};
  BruteDecomposition out;
  for (const auto &e : idempotent_endomorphisms(M, caps)) {
    ElemSet P = image(e), N = kernel(e);
    if (o.is_projective(P) && o.is_stable(N)) out.pairs.push_back({P, N});
  }
  for (std::size_t i = 1; i < out.pairs.size() && out.pairwise_isomorphic; ++i) {
    out.pairwise_isomorphic =
        isomorphic_bruteforce(submodule(M, out.pairs[0].projective, caps), submodule(M, out.pairs[i].projective, caps),
                              caps) &&
        isomorphic_bruteforce(submodule(M, out.pairs[0].stable, caps), submodule(M, out.pairs[i].stable, caps), caps);
  }
  return out;
}

// -------------------------------------------------------------------- rings

RadicalReport jacobson_radical(const FiniteRing &R) {
  RadicalReport out;
  std::vector<bool> in(R.size(), false);
  for (Index x = 0; x < R.size(); ++x) {
    bool ok = true;
    for (Index y = 0; y < R.size() && ok; ++y) ok = R.is_unit(R.sub(1, R.mul(x, y)));
    if (ok) {
      in[x] = true;
      out.elements.push_back(x);
    }
  }
  out.is_ideal = true;
  for (Index x : out.elements) {
    for (Index y : out.elements) out.is_ideal = out.is_ideal && in[R.add(x, y)];
    for (Index r = 0; r < R.size(); ++r) out.is_ideal = out.is_ideal && in[R.mul(x, r)] && in[R.mul(r, x)];
  }
  return out;
}

std::vector<ElemSet> maximal_right_ideals(const RingPtr &R, const Caps &caps) {
  return maximal_proper(enumerate_submodules(regular_module(R, caps), caps));
}

namespace {

using RingSubset = std::vector<bool>;

RingSubset right_annihilator(const FiniteRing &R, Index a) {
  RingSubset s(R.size(), false);
  for (Index x = 0; x < R.size(); ++x) s[x] = R.mul(a, x) == 0;
  return s;
}

std::set<RingSubset> principal_idempotent_ideals(const FiniteRing &R) {
  std::set<RingSubset> out;
  for (Index e : R.idempotents()) {
    RingSubset s(R.size(), false);
    for (Index r = 0; r < R.size(); ++r) s[R.mul(e, r)] = true;
    out.insert(s);
  }
  return out;
}

} // namespace

bool is_rickart(const FiniteRing &R) {
  auto eR = principal_idempotent_ideals(R);
  for (Index a = 0; a < R.size(); ++a)
    if (!eR.count(right_annihilator(R, a))) return false;
  return true;
}

bool is_baer(const FiniteRing &R) {
  auto eR = principal_idempotent_ideals(R);
  // right annihilators of subsets are the intersections of element annihilators
  std::set<RingSubset> anns;
  for (Index a = 0; a < R.size(); ++a) anns.insert(right_annihilator(R, a));
  anns.insert(RingSubset(R.size(), true));
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<RingSubset> cur(anns.begin(), anns.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        RingSubset m(R.size());
        for (std::size_t k = 0; k < R.size(); ++k) m[k] = cur[i][k] && cur[j][k];
        if (anns.insert(m).second) grew = true;
      }
  }
  return std::all_of(anns.begin(), anns.end(), [&](const RingSubset &s) { return eR.count(s) > 0; });
}

// ------------------------------------------------------- module enumeration

namespace {

/// |{x : x r = 0}| for every r; invariant under isomorphism.
std::vector<std::size_t> annihilator_profile(const FiniteModule &M) {
  std::vector<std::size_t> p(M.ring()->size(), 0);
  for (Index x = 0; x < M.size(); ++x)
    for (Index r = 0; r < M.ring()->size(); ++r)
      if (M.act(x, r) == 0) ++p[r];
  return p;
}

} // namespace

std::vector<FiniteModule> enumerate_modules(const RingPtr &R, std::size_t max_size, const Caps &caps) {
  // Every module generated by x_1..x_g is (M' + R) / K with M' = <x_1..x_{g-1}>
  // and K the graph of a map J -> M' on a right ideal J, so K meets M' in 0.
  FiniteModule reg = regular_module(R, caps);
  auto ideals = enumerate_submodules(reg, caps).submodules;
  std::vector<FiniteModule> modules{free_module(R, 0, caps)};
  std::vector<std::vector<std::size_t>> profiles{annihilator_profile(modules[0])};
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t mi : frontier) {
      const FiniteModule Mi = modules[mi];
      if (Mi.size() * R->size() > 256) throw CapExceeded("module enumeration needs sums beyond 256 elements");
      FiniteModule D = direct_sum(Mi, reg, caps);
      for (const auto &J : ideals) {
        if (Mi.size() * R->size() / J.count() > max_size) continue;
        auto Jel = J.elements();
        FiniteModule Jm = submodule(reg, J, caps);
        for (const auto &phi : homomorphisms(Jm, Mi, caps)) {
          ElemSet K;
          for (std::size_t i = 0; i < Jel.size(); ++i)
            K.set(static_cast<std::size_t>(Mi.neg(phi[i])) * R->size() + Jel[i]);
          FiniteModule N = quotient(D, K, caps);
          auto prof = annihilator_profile(N);
          bool known = false;
          for (std::size_t k = 0; k < modules.size() && !known; ++k)
            known = profiles[k] == prof && modules[k].size() == N.size() && isomorphic_bruteforce(modules[k], N, caps);
          if (known) continue;
          modules.push_back(N);
          profiles.push_back(prof);
          next.push_back(modules.size() - 1);
        }
      }
    }
    frontier = std::move(next);
  }
  return modules;
}

} // namespace fpmod::finlab
