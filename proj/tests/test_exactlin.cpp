#include "doctest.h"
#include "glitlab/exactlin.hpp"

#include <random>

using namespace glitlab::exactlin;

namespace {

Mat from_rows(const std::vector<std::vector<std::uint32_t>>& rows) {
  Mat m((int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
  return m;
}

Mat random_mat(std::mt19937_64& rng, const FieldSpec& F, int r, int c) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = (std::uint32_t)(rng() % F.p);
  return m;
}

}  // namespace

TEST_CASE("field arithmetic") {
  FieldSpec F(101);
  CHECK(F.add(100, 1) == 0);
  CHECK(F.sub(0, 1) == 100);
  CHECK(F.mul(F.inv(7), 7) == 1);
  CHECK(F.neg(1) == 100);
  FieldSpec F2(2);
  CHECK(F2.add(1, 1) == 0);
}

TEST_CASE("echelon rank and kernel") {
  FieldSpec F(101);
  Mat a = from_rows({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  CHECK(rank(F, a) == 2);
  Mat k = kernel_basis(F, a);
  CHECK(k.cols() == 1);
  CHECK(mul(F, a, k).is_zero());

  // kernel of the zero map is everything, kernel of an identity is nothing
  CHECK(kernel_basis(F, Mat(3, 4)).cols() == 4);
  CHECK(kernel_basis(F, Mat::identity(5)).cols() == 0);
}

TEST_CASE("solve and inverse round trips") {
  FieldSpec F(101);
  std::mt19937_64 rng(12);
  for (int it = 0; it < 20; ++it) {
    Mat a = random_mat(rng, F, 5, 5);
    if (rank(F, a) < 5) continue;
    Mat inv = inverse(F, a).value();
    CHECK(mul(F, a, inv) == Mat::identity(5));
    Mat x = random_mat(rng, F, 5, 2);
    Mat b = mul(F, a, x);
    CHECK(solve_matrix(F, a, b).value() == x);
  }
}

TEST_CASE("rank is transpose invariant and subadditive") {
  FieldSpec F(101);
  std::mt19937_64 rng(34);
  for (int it = 0; it < 30; ++it) {
    Mat a = random_mat(rng, F, 4, 6);
    Mat b = random_mat(rng, F, 4, 6);
    CHECK(rank(F, a) == rank(F, transpose(a)));
    CHECK(rank(F, add(F, a, b)) <= rank(F, a) + rank(F, b));
    CHECK(rank(F, a) + kernel_basis(F, a).cols() == a.cols());
  }
}

TEST_CASE("integer rank without a modulus") {
  // the rows are dependent over Q, and over every prime
  std::vector<std::vector<long long>> a{{2, 4}, {3, 6}};
  CHECK(int_rank(a) == 1);
  std::vector<std::vector<long long>> b{{2, 0}, {0, 3}};
  CHECK(int_rank(b) == 2);
  std::vector<std::vector<long long>> c{{101, 202}, {1, 2}};
  CHECK(int_rank(c) == 1);
  CHECK(int_rank({}) == 0);
}

TEST_CASE("block composition helpers") {
  FieldSpec F(101);
  Mat a = from_rows({{1, 2}, {3, 4}});
  Mat b = from_rows({{5}, {6}});
  Mat h = hcat(a, b);
  CHECK(h.cols() == 3);
  CHECK(h.at(1, 2) == 6);
  Mat v = vcat(a, from_rows({{7, 8}}));
  CHECK(v.rows() == 3);
  Mat d = block_diag(a, b);
  CHECK(d.rows() == 4);
  CHECK(d.at(2, 2) == 5);
  CHECK(d.at(0, 2) == 0);
}
