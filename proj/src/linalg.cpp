#include "fpmod/linalg.hpp"

#include <algorithm>

namespace fpmod {

namespace {

template <class E>
using El = typename E::Elem;

// row a += f * row b
template <class E>
void add_row_multiple(const E &eng, MatrixOf<E> &M, std::size_t a, std::size_t b, const El<E> &f) {
  if (eng.is_zero(f)) return;
  for (std::size_t j = 0; j < M.cols(); ++j)
    if (!eng.is_zero(M(b, j))) M(a, j) = eng.add(M(a, j), eng.mul(f, M(b, j)));
}

template <class E>
void add_col_multiple(const E &eng, MatrixOf<E> &M, std::size_t a, std::size_t b, const El<E> &f) {
  if (eng.is_zero(f)) return;
  for (std::size_t i = 0; i < M.rows(); ++i)
    if (!eng.is_zero(M(i, b))) M(i, a) = eng.add(M(i, a), eng.mul(f, M(i, b)));
}

template <class E>
void scale_row(const E &eng, MatrixOf<E> &M, std::size_t r, const El<E> &u) {
  for (std::size_t j = 0; j < M.cols(); ++j) M(r, j) = eng.mul(u, M(r, j));
}

template <class E>
void scale_col(const E &eng, MatrixOf<E> &M, std::size_t c, const El<E> &u) {
  for (std::size_t i = 0; i < M.rows(); ++i) M(i, c) = eng.mul(u, M(i, c));
}

// (col a, col b) <- (s*a + t*b, u*a + v*b)
template <class E>
void combine_cols(const E &eng, MatrixOf<E> &M, std::size_t a, std::size_t b, const Gcdex<E> &x) {
  for (std::size_t i = 0; i < M.rows(); ++i) {
    El<E> ca = M(i, a), cb = M(i, b);
    M(i, a) = eng.add(eng.mul(x.s, ca), eng.mul(x.t, cb));
    M(i, b) = eng.add(eng.mul(x.u, ca), eng.mul(x.v, cb));
  }
}

IntegerEngine lift_engine() { return {}; }

[[noreturn]] void reject_mod(const char *op) {
  throw DomainError(std::string(op) + " is not defined over IntegersMod; use howell_form / syzygy_generators");
}

} // namespace

template <DomainEngine E>
Gcdex<E> gcdex(const E &eng, const El<E> &a, const El<E> &b) {
  if (eng.is_zero(b)) {
    El<E> n = eng.normalizer(a);
    // g = n*a; (0,1) spans the relation u*a + v*b = 0 when b = 0.
    return {eng.mul(n, a), n, eng.zero(), eng.zero(), eng.unit_inverse(n)};
  }
  if (!eng.is_zero(a) && eng.divides(a, b)) {
    return {a, eng.one(), eng.zero(), eng.neg(eng.exact_div(b, a)), eng.one()};
  }
  El<E> r0 = a, r1 = b, s0 = eng.one(), s1 = eng.zero(), t0 = eng.zero(), t1 = eng.one();
  while (!eng.is_zero(r1)) {
    auto [q, r] = eng.divmod(r0, r1);
    El<E> s2 = eng.sub(s0, eng.mul(q, s1));
    El<E> t2 = eng.sub(t0, eng.mul(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  El<E> n = eng.normalizer(r0);
  El<E> g = eng.mul(n, r0);
  Gcdex<E> out{g, eng.mul(n, s0), eng.mul(n, t0), eng.neg(eng.exact_div(b, g)), eng.exact_div(a, g)};
  return out;
}

template <DomainEngine E>
SmithDecomposition<E> smith_normal_form(const E &eng, const MatrixOf<E> &A) {
  const std::size_t m = A.rows(), n = A.cols();
  MatrixOf<E> S = A, U = identity(eng, m), V = identity(eng, n);
  std::vector<El<E>> factors;

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool found = false;
    for (;;) {
      // smallest measure pivot in S[t.., t..], row-major tie-break
      std::size_t pi = 0, pj = 0;
      found = false;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (eng.is_zero(S(i, j))) continue;
          if (!found || eng.compare_measure(S(i, j), S(pi, pj)) < 0) {
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) break;
      S.swap_rows(t, pi);
      U.swap_rows(t, pi);
      S.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (eng.is_zero(S(i, t))) continue;
        El<E> q = eng.divmod(S(i, t), S(t, t)).first;
        add_row_multiple(eng, S, i, t, eng.neg(q));
        add_row_multiple(eng, U, i, t, eng.neg(q));
        if (!eng.is_zero(S(i, t))) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (eng.is_zero(S(t, j))) continue;
        El<E> q = eng.divmod(S(t, j), S(t, t)).first;
        add_col_multiple(eng, S, j, t, eng.neg(q));
        add_col_multiple(eng, V, j, t, eng.neg(q));
        if (!eng.is_zero(S(t, j))) clean = false;
      }
      if (!clean) continue;

      // divisibility: pull a non-multiple into the pivot row and retry
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!eng.divides(S(t, t), S(i, j))) {
            add_row_multiple(eng, S, t, i, eng.one());
            add_row_multiple(eng, U, t, i, eng.one());
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (!found) break;
    El<E> u = eng.normalizer(S(t, t));
    scale_row(eng, S, t, u);
    scale_row(eng, U, t, u);
    factors.push_back(S(t, t));
  }
  return {std::move(U), std::move(S), std::move(V), std::move(factors)};
}

SmithDecomposition<ModEngine> smith_normal_form(const ModEngine &, const MatrixOf<ModEngine> &) {
  reject_mod("smith_normal_form");
}

template <DomainEngine E>
HermiteColumnForm<E> hermite_column_reduce(const E &eng, const MatrixOf<E> &A) {
  const std::size_t m = A.rows(), n = A.cols();
  HermiteColumnForm<E> out{A, identity(eng, n), 0, {}};
  MatrixOf<E> &H = out.H;
  MatrixOf<E> &V = out.V;
  std::size_t r = 0;
  for (std::size_t i = 0; i < m && r < n; ++i) {
    for (std::size_t j = r + 1; j < n; ++j) {
      if (eng.is_zero(H(i, j))) continue;
      if (eng.is_zero(H(i, r))) {
        H.swap_cols(r, j);
        V.swap_cols(r, j);
        continue;
      }
      Gcdex<E> x = gcdex(eng, H(i, r), H(i, j));
      combine_cols(eng, H, r, j, x);
      combine_cols(eng, V, r, j, x);
    }
    if (eng.is_zero(H(i, r))) continue;
    El<E> u = eng.normalizer(H(i, r));
    scale_col(eng, H, r, u);
    scale_col(eng, V, r, u);
    for (std::size_t j = 0; j < r; ++j) {
      El<E> q = eng.divmod(H(i, j), H(i, r)).first;
      add_col_multiple(eng, H, j, r, eng.neg(q));
      add_col_multiple(eng, V, j, r, eng.neg(q));
    }
    out.pivot_rows.push_back(i);
    ++r;
  }
  out.rank = r;
  return out;
}

HermiteColumnForm<ModEngine> hermite_column_reduce(const ModEngine &, const MatrixOf<ModEngine> &) {
  reject_mod("hermite_column_reduce");
}

template <DomainEngine E>
MatrixOf<E> column_basis(const E &eng, const MatrixOf<E> &A) {
  auto h = hermite_column_reduce(eng, A);
  return h.H.column_range(0, h.rank);
}

template <DomainEngine E>
MatrixOf<E> kernel_basis(const E &eng, const MatrixOf<E> &A) {
  auto h = hermite_column_reduce(eng, A);
  MatrixOf<E> K = h.V.column_range(h.rank, A.cols() - h.rank);
  // canonical representative of the kernel lattice
  return hermite_column_reduce(eng, K).H;
}

template <DomainEngine E>
MatrixOf<E> syzygy_generators(const E &eng, const MatrixOf<E> &A) {
  return kernel_basis(eng, A);
}

MatrixOf<ModEngine> reduce(const ModEngine &eng, MatrixOf<ModEngine> A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = eng.reduce(A(i, j));
  return A;
}

namespace {

// [A | n I] over Z.
MatrixOf<IntegerEngine> lift_with_modulus(const ModEngine &eng, const MatrixOf<ModEngine> &A) {
  MatrixOf<IntegerEngine> nI(A.rows(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) nI(i, i) = eng.modulus();
  return hcat(reduce(eng, A), nI);
}

} // namespace

MatrixOf<ModEngine> howell_form(const ModEngine &eng, const MatrixOf<ModEngine> &A) {
  const std::size_t c = A.cols();
  // Row span over Z/n <-> lattice rowspan(A) + n Z^c; its row Hermite form is
  // unique, and the rows with pivot n vanish mod n.
  MatrixOf<IntegerEngine> L = vcat(reduce(eng, A), [&] {
    MatrixOf<IntegerEngine> nI(c, c);
    for (std::size_t i = 0; i < c; ++i) nI(i, i) = eng.modulus();
    return nI;
  }());
  auto h = hermite_column_reduce(lift_engine(), L.transpose());
  MatrixOf<IntegerEngine> R = h.H.column_range(0, h.rank).transpose(); // c x c upper triangular
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < R.rows(); ++i)
    if (R(i, i) != eng.modulus()) keep.push_back(i);
  MatrixOf<ModEngine> out(keep.size(), c);
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (std::size_t j = 0; j < c; ++j) out(k, j) = eng.reduce(R(keep[k], j));
  return out;
}

template <DomainEngine E>
MatrixOf<E> howell_form(const E &, const MatrixOf<E> &) {
  throw DomainError("howell_form is defined only over IntegersMod");
}

MatrixOf<ModEngine> syzygy_generators(const ModEngine &eng, const MatrixOf<ModEngine> &A) {
  const std::size_t c = A.cols();
  // x is a syzygy mod n iff (x, y) is in the integer kernel of [A | n I].
  MatrixOf<IntegerEngine> K = kernel_basis(lift_engine(), lift_with_modulus(eng, A));
  MatrixOf<ModEngine> top = reduce(eng, K.row_range(0, c));
  return howell_form(eng, top.transpose()).transpose();
}

template <DomainEngine E>
std::optional<std::vector<El<E>>> solve_membership(const E &eng, const MatrixOf<E> &A, const std::vector<El<E>> &b) {
  if (b.size() != A.rows()) throw DomainError("solve_membership: dimension mismatch");
  auto h = hermite_column_reduce(eng, A);
  std::vector<El<E>> y(A.cols(), eng.zero());
  for (std::size_t c = 0; c < h.rank; ++c) {
    const std::size_t pr = h.pivot_rows[c];
    El<E> rhs = b[pr];
    for (std::size_t k = 0; k < c; ++k) rhs = eng.sub(rhs, eng.mul(h.H(pr, k), y[k]));
    if (!eng.divides(h.H(pr, c), rhs)) return std::nullopt;
    y[c] = eng.exact_div(rhs, h.H(pr, c));
  }
  for (std::size_t i = 0; i < A.rows(); ++i) {
    El<E> acc = eng.zero();
    for (std::size_t c = 0; c < h.rank; ++c) acc = eng.add(acc, eng.mul(h.H(i, c), y[c]));
    if (!eng.equal(acc, b[i])) return std::nullopt;
  }
  std::vector<El<E>> x(A.cols(), eng.zero());
  for (std::size_t i = 0; i < A.cols(); ++i)
    for (std::size_t c = 0; c < A.cols(); ++c) x[i] = eng.add(x[i], eng.mul(h.V(i, c), y[c]));
  return x;
}

std::optional<std::vector<mpz_class>> solve_membership(const ModEngine &eng, const MatrixOf<ModEngine> &A,
                                                       const std::vector<mpz_class> &b) {
  if (b.size() != A.rows()) throw DomainError("solve_membership: dimension mismatch");
  std::vector<mpz_class> rb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) rb[i] = eng.reduce(b[i]);
  auto x = solve_membership(lift_engine(), lift_with_modulus(eng, A), rb);
  if (!x) return std::nullopt;
  std::vector<mpz_class> out(A.cols());
  for (std::size_t i = 0; i < A.cols(); ++i) out[i] = eng.reduce((*x)[i]);
  return out;
}

template <DomainEngine E>
El<E> determinant(const E &eng, MatrixOf<E> A) {
  if (A.rows() != A.cols()) throw DomainError("determinant of a non-square matrix");
  const std::size_t n = A.rows();
  El<E> sign = eng.one(), prev = eng.one();
  for (std::size_t k = 0; k < n; ++k) {
    if (eng.is_zero(A(k, k))) {
      std::size_t r = k + 1;
      while (r < n && eng.is_zero(A(r, k))) ++r;
      if (r == n) return eng.zero();
      A.swap_rows(k, r);
      sign = eng.neg(sign);
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        A(i, j) = eng.exact_div(eng.sub(eng.mul(A(k, k), A(i, j)), eng.mul(A(i, k), A(k, j))), prev);
    prev = A(k, k);
  }
  return n == 0 ? eng.one() : eng.mul(sign, A(n - 1, n - 1));
}

#define FPMOD_INSTANTIATE(E)                                                                                \
  template Gcdex<E> gcdex(const E &, const El<E> &, const El<E> &);                                         \
  template SmithDecomposition<E> smith_normal_form(const E &, const MatrixOf<E> &);                         \
  template HermiteColumnForm<E> hermite_column_reduce(const E &, const MatrixOf<E> &);                      \
  template MatrixOf<E> column_basis(const E &, const MatrixOf<E> &);                                        \
  template MatrixOf<E> kernel_basis(const E &, const MatrixOf<E> &);                                        \
  template MatrixOf<E> syzygy_generators(const E &, const MatrixOf<E> &);                                   \
  template MatrixOf<E> howell_form(const E &, const MatrixOf<E> &);                                         \
  template std::optional<std::vector<El<E>>> solve_membership(const E &, const MatrixOf<E> &,               \
                                                              const std::vector<El<E>> &);                  \
  template El<E> determinant(const E &, MatrixOf<E>);

FPMOD_INSTANTIATE(IntegerEngine)
FPMOD_INSTANTIATE(PolyEngine)

#undef FPMOD_INSTANTIATE

} // namespace fpmod
