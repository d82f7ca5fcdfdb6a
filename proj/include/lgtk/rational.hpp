#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lgtk {

/// Exact rational number. GMP keeps values canonical (lowest terms, den > 0).
using Rat = mpq_class;
using Int = mpz_class;
using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "num/den" form; integers are written with denominator 1.
std::string to_string(const Rat& q);
Rat parse_rat(std::string_view text);

RatVec to_rat(std::span<const std::int64_t> v);
RatVec to_rat(const IntVec& v);

Rat dot(std::span<const Rat> a, std::span<const Rat> b);
RatVec add(std::span<const Rat> a, std::span<const Rat> b);
RatVec sub(std::span<const Rat> a, std::span<const Rat> b);
RatVec scale(std::span<const Rat> a, const Rat& s);
bool is_zero(std::span<const Rat> a);

/// Smallest positive multiple of `v` with coprime integer entries.
IntVec primitive(std::span<const Rat> v);
IntVec primitive(std::span<const Int> v);

/// Rank of a set of row vectors.
std::size_t rank(const std::vector<RatVec>& rows);
/// Dimension of the affine hull (-1 for the empty set).
int affine_rank(const std::vector<RatVec>& points);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<RatVec>& rows);

/// Solves M x = rhs for square nonsingular M; throws if singular.
RatVec solve(std::vector<RatVec> m, RatVec rhs);

/// Determinant of a square matrix.
Rat determinant(std::vector<RatVec> m);

}  // namespace lgtk
