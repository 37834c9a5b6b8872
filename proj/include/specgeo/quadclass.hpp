#pragma once

// SL2(Z)-conjugacy classes of integral trace-zero matrices of determinant -N,
// through reduction of indefinite binary quadratic forms.
//
// Matrices here are raw Mat2Z rather than GeodesicMatrix: A and -A share a
// geodesic but are usually different classes, so the sign must survive.

#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "specgeo/halfplane.hpp"

namespace specgeo {

// p X^2 + q XY + r Y^2.
struct QForm {
  BigInt p, q, r;

  BigInt disc() const { return q * q - 4 * p * r; }
  BigInt content() const;
  QForm scaled(const BigInt& k) const { return {p * k, q * k, r * k}; }
  QForm operator-() const { return {-p, -q, -r}; }
  // f o M, i.e. (X, Y) -> f(m.a X + m.b Y, m.c X + m.d Y).
  QForm compose(const Mat2Z& m) const;

  friend bool operator==(const QForm&, const QForm&) = default;
  friend bool operator<(const QForm& x, const QForm& y);
};

std::string to_string(const QForm& f);

// Throws unless trace 0 and det < 0.
void require_geodesic_matrix(const Mat2Z& A);

// (c, -2a, -b). Conjugation A -> M A M^-1 sends the form f to f o M^-1.
QForm form_from_matrix(const Mat2Z& A);
QForm form_from_matrix(const GeodesicMatrix& A);
// Exact inverse of form_from_matrix; requires even q and positive discriminant.
Mat2Z matrix_from_form(const QForm& f);

// Reduced: 0 < q < sqrt(D) and sqrt(D) - q < 2|p| < sqrt(D) + q, tested for
// the primitive part.
bool is_reduced(const QForm& f);

// One reduction step: (p, q, r) -> (r, q', r') with q' = -q mod 2|r|,
// normalized against sqrt(D). Returns the transform M with f o M = result.
std::pair<QForm, Mat2Z> rho(const QForm& f);

struct Reduction {
  QForm form;     // reduced, carrying the content of the input
  Mat2Z transform;  // f o transform = form, det 1
  std::size_t steps = 0;
};

Reduction reduce(const QForm& f);

// The reduced cycle containing reduce(f), in rho order starting at reduce(f).
std::vector<QForm> reduced_cycle(const QForm& f);
// Lexicographically least form of the reduced cycle: a complete invariant of
// proper equivalence.
QForm cycle_key(const QForm& f);

struct ClassSet {
  BigInt N;
  std::vector<Mat2Z> reps;
  std::vector<std::vector<QForm>> cycles;
  std::vector<BigInt> contents;
  // Cells of the A <-> -A quotient as index pairs [i, j], i <= j; a class
  // conjugate to its own negation appears as [i, i].
  std::vector<std::pair<std::size_t, std::size_t>> tilde_pairs;

  std::size_t narrow_count() const { return reps.size(); }
  std::size_t tilde_count() const { return tilde_pairs.size(); }
};

ClassSet enumerate_classes(const BigInt& N);

bool are_conjugate(const Mat2Z& A, const Mat2Z& B);

// Breadth-first search over conjugators written in S = [[0,-1],[1,0]] and
// T = [[1,1],[0,1]]. Word length counts syllables: an S, or a maximal run of
// T or of T^-1 of any length. Intermediate matrices are capped in height
// (max |entry|) at 4 * max(height A, height B) + 4 unless height_cap > 0.
bool are_conjugate_bruteforce(const Mat2Z& A, const Mat2Z& B, int wordlen,
                              std::int64_t height_cap = 0);
inline constexpr int kDefaultWordLen = 14;

// Every matrix reachable from A under the same search.
std::set<std::vector<std::int64_t>> conjugacy_orbit(const Mat2Z& A, int wordlen,
                                                    std::int64_t height_cap);

struct PellSolution {
  BigInt t, u;
};

PellSolution pell_min(const BigInt& N);

// t Id + u A with (t, u) = pell_min(|det A|).
Mat2Z fundamental_automorph(const Mat2Z& A);

}  // namespace specgeo
