#pragma once

// Exact normal forms and linear systems.
//
// Smith and Hermite forms are defined over the Euclidean engines (Z, F_p[x]).
// Over Z/n every computation lifts to Z: a row or column span over Z/n is the
// image of a Z-lattice that contains n Z^k, so Howell forms, syzygies and
// membership all reduce to integer Hermite/kernel computations.

#include "fpmod/engine.hpp"
#include "fpmod/matrix.hpp"

#include <optional>
#include <vector>

namespace fpmod {

/// s*a + t*b = g and u*a + v*b = 0 with s*v - t*u = 1.
template <class E>
struct Gcdex {
  typename E::Elem g, s, t, u, v;
};

template <DomainEngine E>
Gcdex<E> gcdex(const E &eng, const typename E::Elem &a, const typename E::Elem &b);

template <class E>
struct SmithDecomposition {
  MatrixOf<E> U; // rows x rows, unimodular
  MatrixOf<E> S; // diagonal, same shape as the input
  MatrixOf<E> V; // cols x cols, unimodular
  std::vector<typename E::Elem> invariant_factors;
};

/// U*A*V = S with d_1 | d_2 | ... normalized (positive / monic).
/// Pivot: smallest Euclidean measure, ties broken row-then-column.
template <DomainEngine E>
SmithDecomposition<E> smith_normal_form(const E &eng, const MatrixOf<E> &A);
SmithDecomposition<ModEngine> smith_normal_form(const ModEngine &eng, const MatrixOf<ModEngine> &A);

template <class E>
struct HermiteColumnForm {
  MatrixOf<E> H;                     // A*V, nonzero columns first
  MatrixOf<E> V;                     // unimodular
  std::size_t rank = 0;              // number of nonzero columns of H
  std::vector<std::size_t> pivot_rows; // pivot row of each nonzero column
};

/// Column-style Hermite form: A*V = H, nonzero columns of H are leading,
/// linearly independent, with normalized pivots and reduced pivot rows.
template <DomainEngine E>
HermiteColumnForm<E> hermite_column_reduce(const E &eng, const MatrixOf<E> &A);
HermiteColumnForm<ModEngine> hermite_column_reduce(const ModEngine &eng, const MatrixOf<ModEngine> &A);

/// Nonzero columns of the Hermite form: a basis of the column span.
template <DomainEngine E>
MatrixOf<E> column_basis(const E &eng, const MatrixOf<E> &A);

/// Free basis of {x : A x = 0}, in canonical (column Hermite) form.
template <DomainEngine E>
MatrixOf<E> kernel_basis(const E &eng, const MatrixOf<E> &A);

/// Columns generating {x : A x = 0} as a module.
template <DomainEngine E>
MatrixOf<E> syzygy_generators(const E &eng, const MatrixOf<E> &A);
MatrixOf<ModEngine> syzygy_generators(const ModEngine &eng, const MatrixOf<ModEngine> &A);

/// Canonical generators of the row span over Z/n (rows of the result).
MatrixOf<ModEngine> howell_form(const ModEngine &eng, const MatrixOf<ModEngine> &A);
template <DomainEngine E>
MatrixOf<E> howell_form(const E &eng, const MatrixOf<E> &A);

/// Some x with A x = b, or nullopt when b is outside the column span.
template <DomainEngine E>
std::optional<std::vector<typename E::Elem>> solve_membership(const E &eng, const MatrixOf<E> &A,
                                                              const std::vector<typename E::Elem> &b);
std::optional<std::vector<mpz_class>> solve_membership(const ModEngine &eng, const MatrixOf<ModEngine> &A,
                                                       const std::vector<mpz_class> &b);

/// Column-by-column solve of A X = B.
template <class E>
std::optional<MatrixOf<E>> solve_matrix(const E &eng, const MatrixOf<E> &A, const MatrixOf<E> &B) {
  MatrixOf<E> X(A.cols(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    auto x = solve_membership(eng, A, B.column(j));
    if (!x) return std::nullopt;
    X.set_column(j, *x);
  }
  return X;
}

/// Entrywise reduction into [0, n).
MatrixOf<ModEngine> reduce(const ModEngine &eng, MatrixOf<ModEngine> A);

/// Determinant by fraction-free (Bareiss) elimination; used to certify
/// unimodularity of transforms.
template <DomainEngine E>
typename E::Elem determinant(const E &eng, MatrixOf<E> A);

} // namespace fpmod
