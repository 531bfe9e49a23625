#ifndef MIXREC_MULTI_INDEX_H_
#define MIXREC_MULTI_INDEX_H_

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace mixrec {

// Largest supported dimension. Index sets and sample counts explode long
// before this limit matters.
inline constexpr std::size_t kMaxDim = 8;

// Fixed-capacity vector with a runtime length d <= kMaxDim. Used for levels,
// shifts, derivative orders and points, so that the hot evaluation paths never
// touch the heap.
template <typename T>
class DimArray {
 public:
  using value_type = T;
  using iterator = typename std::array<T, kMaxDim>::iterator;
  using const_iterator = typename std::array<T, kMaxDim>::const_iterator;

  DimArray() = default;
  explicit DimArray(std::size_t d, T fill = T{}) : size_(d) {
    CheckDim(d);
    std::fill_n(data_.begin(), d, fill);
  }
  DimArray(std::initializer_list<T> init) : size_(init.size()) {
    CheckDim(size_);
    std::copy(init.begin(), init.end(), data_.begin());
  }
  explicit DimArray(std::span<const T> values) : size_(values.size()) {
    CheckDim(size_);
    std::copy(values.begin(), values.end(), data_.begin());
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  T& operator[](std::size_t j) { return data_[j]; }
  const T& operator[](std::size_t j) const { return data_[j]; }

  iterator begin() { return data_.begin(); }
  iterator end() { return data_.begin() + size_; }
  const_iterator begin() const { return data_.begin(); }
  const_iterator end() const { return data_.begin() + size_; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  std::span<const T> span() const { return {data_.data(), size_}; }
  operator std::span<const T>() const { return span(); }

  friend bool operator==(const DimArray& a, const DimArray& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend auto operator<=>(const DimArray& a, const DimArray& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(),
                                                  b.begin(), b.end());
  }

 private:
  static void CheckDim(std::size_t d) {
    if (d > kMaxDim) {
      throw std::invalid_argument("dimension " + std::to_string(d) +
                                  " exceeds the supported maximum");
    }
  }

  std::array<T, kMaxDim> data_{};
  std::size_t size_ = 0;
};

using MultiIndex = DimArray<int>;
using Point = DimArray<double>;

// Scalar product (a, b).
template <typename A, typename B>
double Dot(const DimArray<A>& a, const DimArray<B>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += double(a[j]) * double(b[j]);
  return s;
}

inline int Sum(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

// a <= b componentwise.
inline bool LessEqual(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) return false;
  }
  return true;
}

inline MultiIndex PositivePart(const MultiIndex& a) {
  MultiIndex out = a;
  for (int& v : out) v = std::max(v, 0);
  return out;
}

inline MultiIndex operator+(MultiIndex a, const MultiIndex& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
  return a;
}

inline MultiIndex operator-(MultiIndex a, const MultiIndex& b) {
  for (std::size_t j = 0; j < a.size(); ++j) a[j] -= b[j];
  return a;
}

// Number of integer vectors in the box lo <= v <= hi (0 if the box is empty).
inline std::int64_t BoxCardinality(const MultiIndex& lo, const MultiIndex& hi) {
  std::int64_t c = 1;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (hi[j] < lo[j]) return 0;
    c *= std::int64_t(hi[j]) - lo[j] + 1;
  }
  return c;
}

// Row-major offset of v inside the box lo..hi; axis 0 varies slowest.
inline std::int64_t BoxOffset(const MultiIndex& lo, const MultiIndex& hi,
                              const MultiIndex& v) {
  std::int64_t off = 0;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    off = off * (std::int64_t(hi[j]) - lo[j] + 1) + (v[j] - lo[j]);
  }
  return off;
}

// Calls fn(v) for every integer vector lo <= v <= hi in row-major order.
template <typename Fn>
void ForEachInBox(const MultiIndex& lo, const MultiIndex& hi, Fn&& fn) {
  if (BoxCardinality(lo, hi) == 0) return;
  MultiIndex v = lo;
  const std::size_t d = lo.size();
  while (true) {
    fn(static_cast<const MultiIndex&>(v));
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (v[j] < hi[j]) {
        ++v[j];
        break;
      }
      v[j] = lo[j];
      if (j == 0) return;
    }
    if (d == 0) return;
  }
}

// Vectors υ with entries in {0,1} and supp(υ) ⊂ supp(κ), paired with the sign
// (-1)^{|υ|}.
template <typename Fn>
void ForEachSubsetShift(const MultiIndex& kappa, Fn&& fn) {
  const std::size_t d = kappa.size();
  MultiIndex hi(d, 0);
  for (std::size_t j = 0; j < d; ++j) hi[j] = kappa[j] > 0 ? 1 : 0;
  ForEachInBox(MultiIndex(d, 0), hi, [&](const MultiIndex& upsilon) {
    fn(upsilon, (Sum(upsilon) % 2 == 0) ? 1 : -1);
  });
}

std::string ToString(const MultiIndex& v);
std::ostream& operator<<(std::ostream& os, const MultiIndex& v);

struct MultiIndexHash {
  std::size_t operator()(const MultiIndex& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= std::uint64_t(std::uint32_t(x));
      h *= 1099511628211ull;
    }
    return std::size_t(h);
  }
};

}  // namespace mixrec

#endif  // MIXREC_MULTI_INDEX_H_
