#include "fqsimplex/fourier.hpp"

#include <stdexcept>
#include <string>

#include "fqsimplex/parallel.hpp"

namespace fqsimplex {

PointIndexer::PointIndexer(std::uint32_t q, std::size_t d) : q_(q), d_(d), size_(1) {
  if (q < 2) throw std::invalid_argument("grid modulus must be at least 2");
  for (std::size_t i = 0; i < d; ++i) {
    strides_.push_back(size_);
    if (size_ > kMaxEntries / q) {
      throw std::length_error("q^d exceeds the " + std::to_string(kMaxEntries) + " entry cap");
    }
    size_ *= q;
  }
}

std::size_t PointIndexer::encode(const FqVector& x) const {
  if (x.size() != d_) throw DimensionError("point has wrong dimension for this grid");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < d_; ++i) idx += static_cast<std::size_t>(x[i] % q_) * strides_[i];
  return idx;
}

FqVector PointIndexer::decode(std::size_t index) const {
  FqVector x(d_);
  for (std::size_t i = 0; i < d_; ++i) {
    x[i] = static_cast<std::uint32_t>(index % q_);
    index /= q_;
  }
  return x;
}

std::size_t PointIndexer::add(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < d_; ++i) {
    const std::size_t s = a % q_ + b % q_;
    out += (s >= q_ ? s - q_ : s) * strides_[i];
    a /= q_;
    b /= q_;
  }
  return out;
}

std::size_t PointIndexer::sub(std::size_t a, std::size_t b) const {
  std::size_t out = 0;
  for (std::size_t i = 0; i < d_; ++i) {
    const std::size_t s = a % q_ + q_ - b % q_;
    out += (s >= q_ ? s - q_ : s) * strides_[i];
    a /= q_;
    b /= q_;
  }
  return out;
}

CharacterValue average(const DenseFunction& f) {
  CharacterValue sum = 0;
  for (const auto& v : f.values()) sum += v;
  return sum / static_cast<double>(f.size());
}

namespace {

// One length-q DFT along every line of every axis:
//   out[xi] = scale * sum_t in[t] chi(sign * xi * t).
void axis_separated_dft(const PrimeField& F, std::span<const CharacterValue> input,
                        std::span<CharacterValue> output, const PointIndexer& grid, int sign,
                        double scale, std::size_t threads) {
  const std::uint32_t q = grid.q();
  if (q != F.q()) throw DimensionError("function modulus differs from the field");
  std::vector<CharacterValue> roots(q);
  for (std::uint32_t m = 0; m < q; ++m) roots[m] = F.chi(sign > 0 ? FieldElement(m) : F.neg(FieldElement(m)));

  std::vector<CharacterValue> a(input.begin(), input.end());
  std::vector<CharacterValue> b(a.size());
  for (std::size_t axis = 0; axis < grid.d(); ++axis) {
    const std::size_t stride = grid.stride(axis);
    const std::size_t block = stride * q;
    const std::size_t lines = grid.size() / q;
    parallel_for(lines, threads, [&](std::size_t line) {
      const std::size_t base = (line / stride) * block + line % stride;
      for (std::uint32_t xi = 0; xi < q; ++xi) {
        CharacterValue acc = 0;
        std::size_t m = 0;  // xi * t mod q
        for (std::uint32_t t = 0; t < q; ++t) {
          acc += a[base + t * stride] * roots[m];
          m += xi;
          if (m >= q) m -= q;
        }
        b[base + xi * stride] = acc * scale;
      }
    });
    a.swap(b);
  }
  std::copy(a.begin(), a.end(), output.begin());
}

}  // namespace

SpectralFunction fourier_transform(const PrimeField& F, const DenseFunction& f,
                                   std::size_t threads) {
  SpectralFunction out(f.q(), f.d());
  axis_separated_dft(F, f.values(), out.values(), f.grid(), -1, 1.0 / f.q(), threads);
  return out;
}

DenseFunction inverse_transform(const PrimeField& F, const SpectralFunction& spectrum,
                                std::size_t threads) {
  DenseFunction out(spectrum.q(), spectrum.d());
  axis_separated_dft(F, spectrum.values(), out.values(), spectrum.grid(), +1, 1.0, threads);
  return out;
}

DenseFunction convolve(const DenseFunction& f, const DenseFunction& g) {
  if (!(f.grid() == g.grid())) throw DimensionError("convolution of functions on different grids");
  const PointIndexer& grid = f.grid();
  DenseFunction out(f.q(), f.d());
  const double norm = 1.0 / static_cast<double>(grid.size());
  for (std::size_t x = 0; x < grid.size(); ++x) {
    CharacterValue acc = 0;
    for (std::size_t y = 0; y < grid.size(); ++y) {
      if (f[y] != CharacterValue(0)) acc += f[y] * g[grid.sub(x, y)];
    }
    out[x] = acc * norm;
  }
  return out;
}

double plancherel_check(const PrimeField& F, const DenseFunction& f, const DenseFunction& g) {
  if (!(f.grid() == g.grid())) throw DimensionError("Plancherel check on different grids");
  CharacterValue lhs = 0;
  for (std::size_t x = 0; x < f.size(); ++x) lhs += f[x] * std::conj(g[x]);
  lhs /= static_cast<double>(f.size());
  const auto fh = fourier_transform(F, f);
  const auto gh = fourier_transform(F, g);
  CharacterValue rhs = 0;
  for (std::size_t xi = 0; xi < fh.size(); ++xi) rhs += fh[xi] * std::conj(gh[xi]);
  return std::abs(lhs - rhs);
}

}  // namespace fqsimplex
