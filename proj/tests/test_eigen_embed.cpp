#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "imh/affinity.hpp"
#include "imh/base_select.hpp"
#include "imh/eigen_solve.hpp"
#include "imh/embeddings.hpp"
#include "imh/errors.hpp"
#include "support/helpers.hpp"

using namespace imh;

namespace {

// ||A v - lambda v|| for one eigenpair.
double residual_norm(const Matrix& a, const Matrix& vectors, std::size_t col,
                     double value) {
  const std::size_t n = a.rows();
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double av = 0.0;
    for (std::size_t j = 0; j < n; ++j) av += a(i, j) * vectors(j, col);
    const double r = av - value * vectors(i, col);
    sq += r * r;
  }
  return std::sqrt(sq);
}

double cosine_with_ones(const Matrix& vectors, std::size_t col) {
  const std::size_t n = vectors.rows();
  double dot = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += vectors(i, col);
    norm += vectors(i, col) * vectors(i, col);
  }
  return std::abs(dot) / std::sqrt(norm * static_cast<double>(n));
}

Matrix ring_affinity(std::size_t m, double sigma) {
  BaseSet base;
  base.centers = Matrix(m, 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(m);
    base.centers(i, 0) = std::cos(angle);
    base.centers(i, 1) = std::sin(angle);
  }
  return base_affinity(base, sigma);
}

}  // namespace

TEST_SUITE_BEGIN("eigen_embed");

TEST_CASE("eigensolver rejects bad inputs") {
  Matrix asym = {{0.0, 1.0}, {2.0, 0.0}};
  CHECK_THROWS_AS(smallest_eigenvectors(asym, 1, false), ArgumentError);
  Matrix rect(2, 3);
  CHECK_THROWS_AS(smallest_eigenvectors(rect, 1, false), ArgumentError);
  Matrix ok = {{1.0, 0.0}, {0.0, 2.0}};
  CHECK_THROWS_AS(smallest_eigenvectors(ok, 0, false), ArgumentError);
  CHECK_THROWS_AS(smallest_eigenvectors(ok, 3, false), ArgumentError);
  Matrix bad = ok;
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(smallest_eigenvectors(bad, 1, false), NumericError);
}

TEST_CASE("triangle graph Laplacian has spectrum {0, 3, 3}") {
  const Matrix lap = {{2.0, -1.0, -1.0}, {-1.0, 2.0, -1.0}, {-1.0, -1.0, 2.0}};
  const SymEigenResult eig = smallest_eigenvectors(lap, 3, false);
  REQUIRE(eig.values.size() == 3);
  CHECK(eig.values[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(eig.values[1] == doctest::Approx(3.0));
  CHECK(eig.values[2] == doctest::Approx(3.0));
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(residual_norm(lap, eig.vectors, j, eig.values[j]) < 1e-10);

  // Columns are orthonormal.
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 3; ++i) dot += eig.vectors(i, a) * eig.vectors(i, b);
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
    }

  // The zero eigenvector of a connected Laplacian is the constant vector.
  CHECK(cosine_with_ones(eig.vectors, 0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("drop_trivial removes only the constant kernel vector") {
  const Matrix w = ring_affinity(8, 1.0);
  Matrix lap(8, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
      deg += w(i, j);
      lap(i, j) = -w(i, j);
    }
    lap(i, i) += deg;
  }

  const SymEigenResult kept = smallest_eigenvectors(lap, 3, false);
  const SymEigenResult dropped = smallest_eigenvectors(lap, 3, true);
  CHECK(kept.values[0] == doctest::Approx(0.0).epsilon(1e-10));
  // With the constant vector gone the spectrum shifts up by one position.
  CHECK(dropped.values[0] == doctest::Approx(kept.values[1]).epsilon(1e-9));
  CHECK(dropped.values[1] == doctest::Approx(kept.values[2]).epsilon(1e-9));
  for (std::size_t j = 0; j < 3; ++j)
    CHECK(cosine_with_ones(dropped.vectors, j) < 0.99);

  // Asking for more vectors than survive the drop is an error.
  CHECK_THROWS_AS(smallest_eigenvectors(lap, 8, true), ArgumentError);
}

TEST_CASE("disconnected graphs keep their block-indicator kernel vectors") {
  // Two disjoint edges: eigenvalue 0 with multiplicity 2. The near-constant
  // kernel vector is dropped, but a block indicator (not constant) must
  // survive with eigenvalue 0. Which orthogonal kernel basis the solver
  // returns is not specified, so only stable properties are asserted.
  const Matrix lap = {{1.0, -1.0, 0.0, 0.0},
                      {-1.0, 1.0, 0.0, 0.0},
                      {0.0, 0.0, 1.0, -1.0},
                      {0.0, 0.0, -1.0, 1.0}};
  const SymEigenResult eig = smallest_eigenvectors(lap, 2, true);
  CHECK(eig.values[0] == doctest::Approx(0.0).epsilon(1e-10));
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(cosine_with_ones(eig.vectors, j) <= 0.99);
    CHECK(residual_norm(lap, eig.vectors, j, eig.values[j]) < 1e-10);
  }

  // Repeated solves are bit-identical (deterministic tie ordering).
  const SymEigenResult again = smallest_eigenvectors(lap, 2, true);
  CHECK(again.vectors == eig.vectors);
  CHECK(again.values == eig.values);
}

TEST_CASE("principal angles distinguish equal and orthogonal spans") {
  Matrix e1 = {{1.0}, {0.0}};
  Matrix e2 = {{0.0}, {1.0}};
  CHECK(max_principal_angle(e1, e1) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(max_principal_angle(e1, e2) ==
        doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-10));

  // A rotated basis of the same plane spans the same subspace.
  Matrix basis = test::random_matrix(6, 2, 55);
  Matrix mixed(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    mixed(i, 0) = 0.8 * basis(i, 0) + 0.6 * basis(i, 1);
    mixed(i, 1) = -0.6 * basis(i, 0) + 0.8 * basis(i, 1);
  }
  CHECK(max_principal_angle(basis, mixed) < 1e-8);

  CHECK_THROWS_AS(max_principal_angle(e1, Matrix(3, 1)), ArgumentError);
  CHECK_THROWS_AS(max_principal_angle(e1, Matrix(2, 0)), ArgumentError);
}

TEST_CASE("base Laplacian embedding has centered unit-variance columns") {
  const Matrix w = ring_affinity(10, 0.8);
  const Embedding emb = embed_le_base(w, 3);
  REQUIRE(emb.size() == 10);
  REQUIRE(emb.dim() == 3);
  CHECK(emb.centered);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < 10; ++i) mean += emb.coords(i, j);
    mean /= 10.0;
    CHECK(std::abs(mean) < 1e-10);
    for (std::size_t i = 0; i < 10; ++i)
      var += emb.coords(i, j) * emb.coords(i, j);
    CHECK(var / 10.0 == doctest::Approx(1.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS(embed_le_base(w, 0), ArgumentError);
  CHECK_THROWS_AS(embed_le_base(w, 10), ArgumentError);  // r must stay below m
  CHECK_THROWS_AS(embed_le_base(Matrix(3, 4), 1), ArgumentError);
}

TEST_CASE("relaxed embedding satisfies the scaled orthogonality constraint") {
  // A single blob keeps the base affinity graph connected, so exactly one
  // trivial eigenvector exists and the remaining ones stay orthogonal to it.
  const FeatureMatrix x = test::make_blobs(60, 1, 1.0, 61);
  KMeansConfig kcfg;
  kcfg.clusters = 12;
  kcfg.seed = 5;
  const BaseSet base = kmeans(x, kcfg);
  const double sigma = estimate_sigma(base).sigma;
  const AffinityMatrices aff = build_affinities(x, base, 4, sigma);

  const std::size_t m = base.size();
  const Embedding emb = embed_le_relaxed(aff, 2.0, 3);
  REQUIRE(emb.size() == m);
  CHECK(emb.centered);
  // Y^T Y = m I after the sqrt(m) rescale.
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += emb.coords(i, a) * emb.coords(i, b);
      const double expect = a == b ? static_cast<double>(m) : 0.0;
      CHECK(dot == doctest::Approx(expect).epsilon(1e-6));
    }

  CHECK_THROWS_AS(embed_le_relaxed(aff, -0.5, 3), ArgumentError);
  CHECK_THROWS_AS(embed_le_relaxed(aff, 2.0, m), ArgumentError);
}

TEST_CASE("relaxed embedding at lambda zero spans the base LE subspace") {
  const FeatureMatrix x = test::make_blobs(12, 3, 0.8, 67);
  KMeansConfig kcfg;
  kcfg.clusters = 9;
  kcfg.seed = 8;
  const BaseSet base = kmeans(x, kcfg);
  const double sigma = estimate_sigma(base).sigma;
  const AffinityMatrices aff = build_affinities(x, base, 3, sigma);

  const Embedding relaxed = embed_le_relaxed(aff, 0.0, 2);
  const Embedding plain = embed_le_base(aff.w_base, 2);
  CHECK(max_principal_angle(relaxed.coords, plain.coords) < 1e-6);
}

TEST_CASE("coupling matrix rows and columns sum to zero") {
  // T = D_BX - Wbar^T W built from the k-sparse blocks: both T 1 = 0 and
  // 1^T T = 0 because each normalized row sums to one.
  const FeatureMatrix x = test::make_blobs(7, 3, 1.1, 71);
  BaseSet base;
  base.centers = test::random_matrix(4, x.dim(), 72, 2.0);
  const AffinityMatrices aff = build_affinities(x, base, 3, 1.0);

  const std::size_t m = 4;
  Matrix t(m, m);
  for (std::size_t j = 0; j < m; ++j) t(j, j) = aff.d_bx[j];
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& a : aff.wbar_xb[i].entries)
      for (const auto& b : aff.w_xb[i].entries)
        t(static_cast<std::size_t>(a.index), static_cast<std::size_t>(b.index)) -=
            a.weight * b.weight;

  for (std::size_t i = 0; i < m; ++i) {
    double row_sum = 0.0, col_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      row_sum += t(i, j);
      col_sum += t(j, i);
    }
    CHECK(std::abs(row_sum) < 1e-12);
    CHECK(std::abs(col_sum) < 1e-12);
  }
}

TEST_CASE("pca embedding recovers a line and fixes signs deterministically") {
  // Points on the line y = 2x: the single principal direction carries all
  // variance, so 1-D scores reproduce centered positions along the line.
  Matrix points(5, 2);
  const std::vector<double> ts = {-2.0, -1.0, 0.0, 1.0, 2.0};
  for (std::size_t i = 0; i < 5; ++i) {
    points(i, 0) = ts[i];
    points(i, 1) = 2.0 * ts[i];
  }
  const Embedding emb = embed_pca(points, 1);
  REQUIRE(emb.dim() == 1);
  CHECK(emb.centered);
  const double len = std::sqrt(5.0);  // |(1,2)| scales t into arc length
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(std::abs(emb.coords(i, 0)) == doctest::Approx(std::abs(ts[i]) * len));
  // Scores are centered and ordered consistently with t (sign-fixed).
  CHECK(emb.coords(0, 0) < emb.coords(4, 0));
  double mean = 0.0;
  for (std::size_t i = 0; i < 5; ++i) mean += emb.coords(i, 0);
  CHECK(std::abs(mean) < 1e-12);

  const Embedding again = embed_pca(points, 1);
  CHECK(again.coords == emb.coords);

  CHECK_THROWS_AS(embed_pca(points, 0), ArgumentError);
  CHECK_THROWS_AS(embed_pca(points, 3), ArgumentError);
  CHECK_THROWS_AS(embed_pca(Matrix(1, 2), 1), ArgumentError);
}

TEST_CASE("pca scores carry the top covariance eigenvalue as their variance") {
  const Matrix points = test::random_matrix(40, 3, 73, 1.5);
  const Embedding emb = embed_pca(points, 3);

  // Total score variance equals total input variance (PCA is a rotation of
  // the centered data when r = d).
  Matrix centered = points;
  std::vector<double> input_var(3, 0.0), score_var(3, 0.0);
  center_columns(centered);
  double total_in = 0.0, total_out = 0.0;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      total_in += centered(i, j) * centered(i, j);
      total_out += emb.coords(i, j) * emb.coords(i, j);
    }
  CHECK(total_out == doctest::Approx(total_in).epsilon(1e-10));

  // Score columns are uncorrelated with non-increasing variance.
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = a + 1; b < 3; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 40; ++i) dot += emb.coords(i, a) * emb.coords(i, b);
      CHECK(std::abs(dot) < 1e-8 * total_in);
    }
    double var = 0.0;
    for (std::size_t i = 0; i < 40; ++i) var += emb.coords(i, a) * emb.coords(i, a);
    score_var[a] = var;
  }
  CHECK(score_var[0] >= score_var[1]);
  CHECK(score_var[1] >= score_var[2]);
}

TEST_SUITE_END();
