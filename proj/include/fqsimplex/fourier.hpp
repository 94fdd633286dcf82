#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fqsimplex/field.hpp"
#include "fqsimplex/linalg.hpp"

namespace fqsimplex {

/// Mixed-radix indexing of F_q^d: coordinate 0 varies fastest.
class PointIndexer {
 public:
  static constexpr std::size_t kMaxEntries = 100'000'000;

  /// Throws std::length_error when q^d exceeds kMaxEntries.
  PointIndexer(std::uint32_t q, std::size_t d);

  std::uint32_t q() const { return q_; }
  std::size_t d() const { return d_; }
  std::size_t size() const { return size_; }
  std::size_t stride(std::size_t axis) const { return strides_[axis]; }

  std::size_t encode(const FqVector& x) const;
  FqVector decode(std::size_t index) const;
  /// index(decode(a) + decode(b)) and index(decode(a) - decode(b)).
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t sub(std::size_t a, std::size_t b) const;

  friend bool operator==(const PointIndexer& a, const PointIndexer& b) {
    return a.q_ == b.q_ && a.d_ == b.d_;
  }

 private:
  std::uint32_t q_;
  std::size_t d_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

enum class Domain { kSpatial, kSpectral };

/// Complex-valued function on F_q^d stored densely in PointIndexer order.
/// The tag separates functions of x from functions of xi.
template <Domain D>
class GridFunction {
 public:
  GridFunction(std::uint32_t q, std::size_t d) : grid_(q, d), v_(grid_.size()) {}
  GridFunction(std::uint32_t q, std::size_t d, std::vector<CharacterValue> values)
      : grid_(q, d), v_(std::move(values)) {
    if (v_.size() != grid_.size()) throw DimensionError("value count must be q^d");
  }

  static GridFunction constant(std::uint32_t q, std::size_t d, CharacterValue c) {
    GridFunction f(q, d);
    std::fill(f.v_.begin(), f.v_.end(), c);
    return f;
  }

  const PointIndexer& grid() const { return grid_; }
  std::uint32_t q() const { return grid_.q(); }
  std::size_t d() const { return grid_.d(); }
  std::size_t size() const { return v_.size(); }

  CharacterValue operator[](std::size_t i) const { return v_[i]; }
  CharacterValue& operator[](std::size_t i) { return v_[i]; }
  CharacterValue at(const FqVector& x) const { return v_[grid_.encode(x)]; }
  std::span<const CharacterValue> values() const { return v_; }
  std::span<CharacterValue> values() { return v_; }

 private:
  PointIndexer grid_;
  std::vector<CharacterValue> v_;
};

using DenseFunction = GridFunction<Domain::kSpatial>;
using SpectralFunction = GridFunction<Domain::kSpectral>;

/// E_x f(x) = q^{-d} sum_x f(x).
CharacterValue average(const DenseFunction& f);

/// f^(xi) = E_x f(x) chi(-xi.x), computed as d passes of a length-q DFT
/// along each axis (O(d q^{d+1})). Lines within a pass run on `threads`
/// workers; the result does not depend on the thread count.
SpectralFunction fourier_transform(const PrimeField& F, const DenseFunction& f,
                                   std::size_t threads = 1);

/// f(x) = sum_xi F(xi) chi(xi.x).
DenseFunction inverse_transform(const PrimeField& F, const SpectralFunction& spectrum,
                                std::size_t threads = 1);

/// (f * g)(x) = E_y f(y) g(x - y), by direct summation.
DenseFunction convolve(const DenseFunction& f, const DenseFunction& g);

/// |E_x f conj(g) - sum_xi f^ conj(g^)|.
double plancherel_check(const PrimeField& F, const DenseFunction& f, const DenseFunction& g);

}  // namespace fqsimplex
