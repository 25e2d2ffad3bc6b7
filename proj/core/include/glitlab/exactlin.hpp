#pragma once

// Exact dense linear algebra over a prime field GF(p). All entries are kept
// reduced modulo p; row reduction uses first-nonzero pivoting so identical
// inputs always produce identical reduced forms.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace glitlab::exactlin {

struct FieldSpec {
  std::uint32_t p = 101;

  explicit FieldSpec(std::uint32_t modulus = 101);

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
    return a >= b ? a - b : a + p - b;
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t)a * b % p);
  }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p - a; }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t reduce(long long v) const {
    long long r = v % (long long)p;
    return (std::uint32_t)(r < 0 ? r + p : r);
  }
  bool operator==(const FieldSpec&) const = default;
};

bool is_prime(std::uint32_t n);

// Dense row-major matrix over GF(p).
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols, 0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative shape");
  }

  static Mat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  std::uint32_t& at(int r, int c) { return e_[size_t(r) * cols_ + c]; }
  std::uint32_t at(int r, int c) const { return e_[size_t(r) * cols_ + c]; }

  bool is_zero() const;
  bool operator==(const Mat&) const = default;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::uint32_t> e_;
};

Mat add(const FieldSpec& F, const Mat& a, const Mat& b);
Mat sub(const FieldSpec& F, const Mat& a, const Mat& b);
Mat scale(const FieldSpec& F, std::uint32_t c, const Mat& a);
Mat mul(const FieldSpec& F, const Mat& a, const Mat& b);
Mat transpose(const Mat& a);

// Horizontal / vertical / diagonal concatenation.
Mat hcat(const Mat& a, const Mat& b);
Mat vcat(const Mat& a, const Mat& b);
Mat block_diag(const Mat& a, const Mat& b);

// Row echelon data for a matrix: reduced form plus pivot columns, computed
// with deterministic first-nonzero pivot scanning.
struct Echelon {
  Mat rref;
  std::vector<int> pivot_cols;
  int rank() const { return (int)pivot_cols.size(); }
};

Echelon echelon(const FieldSpec& F, const Mat& m);

int rank(const FieldSpec& F, const Mat& m);

// Basis of the right kernel {v : m v = 0}, as columns of the returned matrix.
Mat kernel_basis(const FieldSpec& F, const Mat& m);

// Some solution x of m x = b, or nullopt when inconsistent.
std::optional<std::vector<std::uint32_t>> solve(const FieldSpec& F, const Mat& m,
                                                const std::vector<std::uint32_t>& b);

// Solves m X = B columnwise; nullopt if any column is inconsistent.
std::optional<Mat> solve_matrix(const FieldSpec& F, const Mat& m, const Mat& B);

// Inverse of a square matrix, or nullopt when singular.
std::optional<Mat> inverse(const FieldSpec& F, const Mat& m);

// Basis of the column space, as columns (subset of original columns, in order).
Mat column_space_basis(const FieldSpec& F, const Mat& m);

// Rank over the integers (equivalently over Q) of a small integer matrix,
// via fraction-free Bareiss elimination. Used for class-vector lattices.
int int_rank(std::vector<std::vector<long long>> m);

}  // namespace glitlab::exactlin
