#include "glitlab/exactlin.hpp"

#include <algorithm>

namespace glitlab::exactlin {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec::FieldSpec(std::uint32_t modulus) : p(modulus) {
  if (!is_prime(p)) throw std::invalid_argument("FieldSpec: modulus must be prime");
}

std::uint32_t FieldSpec::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("FieldSpec::inv(0)");
  // extended Euclid
  long long t = 0, newt = 1, r = p, newr = a;
  while (newr != 0) {
    long long q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  return reduce(t);
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool Mat::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](std::uint32_t v) { return v == 0; });
}

Mat add(const FieldSpec& F, const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add: shape mismatch");
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.add(a.at(i, j), b.at(i, j));
  return r;
}

Mat sub(const FieldSpec& F, const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("sub: shape mismatch");
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.sub(a.at(i, j), b.at(i, j));
  return r;
}

Mat scale(const FieldSpec& F, std::uint32_t c, const Mat& a) {
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = F.mul(c, a.at(i, j));
  return r;
}

Mat mul(const FieldSpec& F, const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mul: shape mismatch");
  Mat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      std::uint32_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j)
        r.at(i, j) = F.add(r.at(i, j), F.mul(aik, b.at(k, j)));
    }
  return r;
}

Mat transpose(const Mat& a) {
  Mat r(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(j, i) = a.at(i, j);
  return r;
}

Mat hcat(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hcat: row mismatch");
  Mat r(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
  }
  return r;
}

Mat vcat(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vcat: col mismatch");
  Mat r(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) r.at(a.rows() + i, j) = b.at(i, j);
  return r;
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat r(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return r;
}

Echelon echelon(const FieldSpec& F, const Mat& m) {
  Echelon out;
  out.rref = m;
  Mat& a = out.rref;
  int lead = 0;
  for (int col = 0; col < a.cols() && lead < a.rows(); ++col) {
    int piv = -1;
    for (int r = lead; r < a.rows(); ++r)
      if (a.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != lead)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(lead, j));
    std::uint32_t inv = F.inv(a.at(lead, col));
    for (int j = 0; j < a.cols(); ++j) a.at(lead, j) = F.mul(inv, a.at(lead, j));
    for (int r = 0; r < a.rows(); ++r) {
      if (r == lead) continue;
      std::uint32_t f = a.at(r, col);
      if (f == 0) continue;
      for (int j = 0; j < a.cols(); ++j)
        a.at(r, j) = F.sub(a.at(r, j), F.mul(f, a.at(lead, j)));
    }
    out.pivot_cols.push_back(col);
    ++lead;
  }
  return out;
}

int rank(const FieldSpec& F, const Mat& m) { return echelon(F, m).rank(); }

Mat kernel_basis(const FieldSpec& F, const Mat& m) {
  Echelon e = echelon(F, m);
  int n = m.cols();
  std::vector<int> free_cols;
  {
    size_t pi = 0;
    for (int c = 0; c < n; ++c) {
      if (pi < e.pivot_cols.size() && e.pivot_cols[pi] == c)
        ++pi;
      else
        free_cols.push_back(c);
    }
  }
  Mat basis(n, (int)free_cols.size());
  for (int k = 0; k < (int)free_cols.size(); ++k) {
    int fc = free_cols[k];
    basis.at(fc, k) = 1;
    for (int r = 0; r < e.rank(); ++r) {
      int pc = e.pivot_cols[r];
      basis.at(pc, k) = F.neg(e.rref.at(r, fc));
    }
  }
  return basis;
}

std::optional<std::vector<std::uint32_t>> solve(const FieldSpec& F, const Mat& m,
                                                const std::vector<std::uint32_t>& b) {
  if ((int)b.size() != m.rows()) throw std::invalid_argument("solve: rhs length");
  Mat aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i] % F.p;
  }
  Echelon e = echelon(F, aug);
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == m.cols()) return std::nullopt;
  std::vector<std::uint32_t> x(m.cols(), 0);
  for (int r = 0; r < e.rank(); ++r) x[e.pivot_cols[r]] = e.rref.at(r, m.cols());
  return x;
}

std::optional<Mat> solve_matrix(const FieldSpec& F, const Mat& m, const Mat& B) {
  if (B.rows() != m.rows()) throw std::invalid_argument("solve_matrix: rhs rows");
  Mat X(m.cols(), B.cols());
  // one elimination for all right-hand sides
  Mat aug = hcat(m, B);
  Echelon e = echelon(F, aug);
  for (int c : e.pivot_cols)
    if (c >= m.cols()) return std::nullopt;
  for (int r = 0; r < e.rank(); ++r) {
    int pc = e.pivot_cols[r];
    for (int j = 0; j < B.cols(); ++j) X.at(pc, j) = e.rref.at(r, m.cols() + j);
  }
  return X;
}

std::optional<Mat> inverse(const FieldSpec& F, const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  auto X = solve_matrix(F, m, Mat::identity(m.rows()));
  if (!X) return std::nullopt;
  if (rank(F, m) != m.rows()) return std::nullopt;
  return X;
}

Mat column_space_basis(const FieldSpec& F, const Mat& m) {
  Echelon e = echelon(F, m);
  Mat basis(m.rows(), e.rank());
  for (int k = 0; k < e.rank(); ++k) {
    int c = e.pivot_cols[k];
    for (int i = 0; i < m.rows(); ++i) basis.at(i, k) = m.at(i, c);
  }
  return basis;
}

int int_rank(std::vector<std::vector<long long>> m) {
  if (m.empty()) return 0;
  const int rows = (int)m.size(), cols = (int)m[0].size();
  // Bareiss, with __int128 intermediates
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = m[i][j];
  __int128 prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[r]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j)
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

}  // namespace glitlab::exactlin
