#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homloc/common.hpp"

// Dense bit-packed linear algebra over GF(2).
namespace homloc::gf2 {

class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_((len + kWordBits - 1) / kWordBits, 0) {}

  static BitVector from_support(std::size_t len, std::span<const std::size_t> support) {
    BitVector v(len);
    for (auto i : support) v.flip(i);
    return v;
  }

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const {
    bounds(i);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool value = true) {
    bounds(i);
    const Word mask = Word{1} << (i % kWordBits);
    if (value)
      words_[i / kWordBits] |= mask;
    else
      words_[i / kWordBits] &= ~mask;
  }

  void flip(std::size_t i) {
    bounds(i);
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
  }

  BitVector& operator^=(const BitVector& o) {
    same_len(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  BitVector& operator&=(const BitVector& o) {
    same_len(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }

  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  // Parity of the entrywise product.
  bool dot(const BitVector& o) const {
    same_len(o);
    Word acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
    return std::popcount(acc) & 1;
  }

  // Every set bit of *this is also set in o.
  bool subset_of(const BitVector& o) const {
    same_len(o);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~o.words_[w]) return false;
    return true;
  }

  // Index of the lowest set bit, or size() if none.
  std::size_t lowest() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return len_;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word x = words_[w];
      while (x) {
        out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return out;
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.len_ == b.len_ && a.words_ == b.words_;
  }

  // Lexicographic order of the bit sequence (bit 0 first, 0 < 1). Used for
  // deterministic tie-breaking.
  friend bool lex_less(const BitVector& a, const BitVector& b) {
    a.same_len(b);
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
      const Word diff = a.words_[w] ^ b.words_[w];
      if (diff) {
        const Word low = diff & (~diff + 1);
        return (b.words_[w] & low) != 0;
      }
    }
    return false;
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

 private:
  void bounds(std::size_t i) const {
    if (i >= len_) throw InputError("bit index " + std::to_string(i) + " out of range " + std::to_string(len_));
  }
  void same_len(const BitVector& o) const {
    if (o.len_ != len_)
      throw InputError("bit vector length mismatch: " + std::to_string(len_) + " vs " + std::to_string(o.len_));
  }

  std::size_t len_ = 0;
  std::vector<Word> words_;
};

// Row-major, each row bit-packed.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BitMatrix from_columns(std::size_t rows, std::span<const BitVector> columns) {
    BitMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw InputError("column length does not match row count");
      for (auto r : columns[c].support()) m.set(r, c);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return row_at(r).get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { row_at(r).set(c, value); }

  const BitVector& row(std::size_t r) const { return row_at(r); }

  BitVector column(std::size_t c) const {
    if (c >= cols_) throw InputError("column index out of range");
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (data_[r].get(c)) v.set(r);
    return v;
  }

  BitVector multiply(const BitVector& x) const {
    if (x.size() != cols_) throw InputError("matrix-vector dimension mismatch");
    BitVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (data_[r].dot(x)) y.set(r);
    return y;
  }

  BitMatrix multiply(const BitMatrix& o) const {
    if (o.rows_ != cols_) throw InputError("matrix-matrix dimension mismatch");
    BitMatrix out(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (auto k : data_[r].support()) out.data_[r] ^= o.data_[k];
    return out;
  }

  // [this | b]
  BitMatrix with_column(const BitVector& b) const {
    if (b.size() != rows_) throw InputError("augmenting column length mismatch");
    BitMatrix out(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (auto c : data_[r].support()) out.set(r, c);
      if (b.get(r)) out.set(r, cols_);
    }
    return out;
  }

  // Keeps the listed rows in the given order.
  BitMatrix select_rows(std::span<const std::size_t> keep) const {
    BitMatrix out;
    out.rows_ = keep.size();
    out.cols_ = cols_;
    out.data_.reserve(keep.size());
    for (auto r : keep) out.data_.push_back(row_at(r));
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BitVector& v) { return v.none(); });
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  friend struct Echelon;

  const BitVector& row_at(std::size_t r) const {
    if (r >= rows_) throw InputError("row index out of range");
    return data_[r];
  }
  BitVector& row_at(std::size_t r) {
    if (r >= rows_) throw InputError("row index out of range");
    return data_[r];
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> data_;
};

// Reduced row echelon form of a working copy, with an optional right-hand
// side carried through the same row operations.
struct Echelon {
  std::vector<BitVector> rows;
  BitVector rhs;
  std::vector<std::size_t> pivot_cols;  // pivot column of row i, increasing
  std::size_t cols = 0;

  Echelon(const BitMatrix& m, const BitVector* b) : rows(m.data_), cols(m.cols_) {
    if (b) {
      if (b->size() != m.rows_) throw InputError("right-hand side length must equal row count");
      rhs = *b;
    } else {
      rhs = BitVector(m.rows_);
    }
    std::size_t next = 0;
    for (std::size_t c = 0; c < cols && next < rows.size(); ++c) {
      const std::size_t w = c / BitVector::kWordBits;
      const auto bit = BitVector::Word{1} << (c % BitVector::kWordBits);
      std::size_t p = next;
      while (p < rows.size() && !(rows[p].words()[w] & bit)) ++p;
      if (p == rows.size()) continue;
      if (p != next) {
        std::swap(rows[p], rows[next]);
        const bool t = rhs.get(p);
        rhs.set(p, rhs.get(next));
        rhs.set(next, t);
      }
      const auto& prow = rows[next];
      const bool prhs = rhs.get(next);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == next || !(rows[r].words()[w] & bit)) continue;
        auto dst = rows[r].words();
        auto src = prow.words();
        for (std::size_t k = w; k < dst.size(); ++k) dst[k] ^= src[k];
        if (prhs) rhs.flip(r);
      }
      pivot_cols.push_back(c);
      ++next;
    }
  }

  std::size_t rank() const { return pivot_cols.size(); }

  bool consistent() const {
    for (std::size_t r = rank(); r < rows.size(); ++r)
      if (rhs.get(r)) return false;
    return true;
  }
};

inline std::size_t rank(const BitMatrix& m) { return Echelon(m, nullptr).rank(); }

// Canonical solution of a x = b: reduced row echelon form, free variables set to 0.
inline std::optional<BitVector> solve(const BitMatrix& a, const BitVector& b) {
  if (b.size() != a.rows()) throw InputError("solve: b.len must equal a.rows");
  Echelon e(a, &b);
  if (!e.consistent()) return std::nullopt;
  BitVector x(a.cols());
  for (std::size_t i = 0; i < e.rank(); ++i)
    if (e.rhs.get(i)) x.set(e.pivot_cols[i]);
  return x;
}

inline bool in_column_span(const BitMatrix& a, const BitVector& b) {
  if (b.size() != a.rows()) throw InputError("in_column_span: b.len must equal a.rows");
  return Echelon(a, &b).consistent();
}

// Basis of {x : a x = 0}, one vector per free column.
inline std::vector<BitVector> nullspace(const BitMatrix& a) {
  Echelon e(a, nullptr);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<BitVector> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector x(a.cols());
    x.set(f);
    for (std::size_t i = 0; i < e.rank(); ++i)
      if (e.rows[i].get(f)) x.set(e.pivot_cols[i]);
    basis.push_back(std::move(x));
  }
  return basis;
}

// Incrementally grown span of column vectors. Each stored vector is keyed by
// its lowest set bit, so reduction terminates in at most len steps.
class ColumnSpan {
 public:
  explicit ColumnSpan(std::size_t len) : len_(len), slot_(len, kNone) {}

  std::size_t dimension() const { return basis_.size(); }
  std::size_t length() const { return len_; }

  // True if v increased the dimension.
  bool add(BitVector v) {
    reduce(v);
    if (v.none()) return false;
    slot_[v.lowest()] = basis_.size();
    basis_.push_back(std::move(v));
    return true;
  }

  void add_columns(const BitMatrix& m) {
    for (std::size_t c = 0; c < m.cols(); ++c) add(m.column(c));
  }

  bool contains(BitVector v) const {
    reduce(v);
    return v.none();
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void reduce(BitVector& v) const {
    if (v.size() != len_) throw InputError("ColumnSpan: vector length mismatch");
    for (;;) {
      const auto p = v.lowest();
      if (p == len_ || slot_[p] == kNone) return;
      v ^= basis_[slot_[p]];
    }
  }

  std::size_t len_;
  std::vector<std::size_t> slot_;
  std::vector<BitVector> basis_;
};

}  // namespace homloc::gf2
