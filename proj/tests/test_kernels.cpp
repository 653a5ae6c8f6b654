#include <cmath>
#include <vector>

#include "doctest.h"
#include "imh/kernels.hpp"
#include "imh/matrix.hpp"
#include "imh/parallel.hpp"
#include "support/helpers.hpp"

using imh::Matrix;
namespace kn = imh::kernels;

namespace {

// Restore the ambient thread setting when a test changes it.
struct ThreadGuard {
  int saved = imh::parallel::thread_setting();
  ~ThreadGuard() { imh::parallel::set_threads(saved); }
};

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("distances match hand values") {
  const std::vector<double> a = {1.0, -2.0, 3.0};
  const std::vector<double> b = {0.0, 2.0, 1.0};
  CHECK(kn::squared_distance(a.data(), b.data(), 3) == 21.0);
  CHECK(kn::l1_distance(a.data(), b.data(), 3) == 7.0);
}

TEST_CASE("assign_nearest picks the closest center, ties to the lower index") {
  Matrix points = {{0.0, 0.0}, {5.0, 5.0}, {2.5, 2.5}};
  Matrix centers = {{0.0, 0.0}, {5.0, 5.0}};
  std::vector<int> assign(points.rows());
  std::vector<double> dist(points.rows());
  kn::assign_nearest(points, centers, assign, dist);
  CHECK(assign == std::vector<int>{0, 1, 0});  // exact midpoint goes low
  CHECK(dist[0] == 0.0);
  CHECK(dist[2] == 12.5);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  ThreadGuard guard;
  const Matrix points = imh::test::random_matrix(700, 9, 21);
  const Matrix centers = imh::test::random_matrix(33, 9, 22);

  std::vector<int> serial_assign(points.rows());
  std::vector<double> serial_dist(points.rows());
  kn::serial::assign_nearest(points, centers, serial_assign, serial_dist);

  const std::vector<double> values(points.data().begin(), points.data().end());
  const double serial_sum = kn::serial::reduce_sum(values);
  const std::vector<double> serial_means = kn::serial::column_means(points);

  for (int threads : {1, 2, 3, 7}) {
    CAPTURE(threads);
    imh::parallel::set_threads(threads);

    std::vector<int> assign(points.rows());
    std::vector<double> dist(points.rows());
    kn::assign_nearest(points, centers, assign, dist);
    CHECK(assign == serial_assign);
    CHECK(dist == serial_dist);  // per-row arithmetic is shared, so bit-exact

    // Reductions follow the fixed chunk grid, so they may differ from the
    // plain left-to-right loop only by rounding.
    CHECK(kn::reduce_sum(values) == doctest::Approx(serial_sum).epsilon(1e-13));
    const std::vector<double> means = kn::column_means(points);
    for (std::size_t j = 0; j < means.size(); ++j)
      CHECK(means[j] == doctest::Approx(serial_means[j]).epsilon(1e-12));
  }
}

TEST_CASE("reductions are identical for every thread count") {
  ThreadGuard guard;
  const Matrix big = imh::test::random_matrix(5000, 4, 31);
  const std::vector<double> values(big.data().begin(), big.data().end());

  imh::parallel::set_threads(1);
  const double sum_one = kn::reduce_sum(values);
  const std::vector<double> means_one = kn::column_means(big);

  for (int threads : {2, 4, 8}) {
    CAPTURE(threads);
    imh::parallel::set_threads(threads);
    CHECK(kn::reduce_sum(values) == sum_one);  // same chunk grid, bit-exact
    CHECK(kn::column_means(big) == means_one);
  }
}

TEST_CASE("l1 assignment uses the l1 metric") {
  // L1 prefers center 1 (3.2 < 4.4); squared L2 prefers center 0.
  Matrix points = {{0.0, 0.0}};
  Matrix centers = {{2.2, 2.2}, {0.0, 3.2}};
  std::vector<int> assign(1);
  std::vector<double> dist(1);
  kn::assign_nearest_l1(points, centers, assign, dist);
  CHECK(assign[0] == 1);
  CHECK(dist[0] == doctest::Approx(3.2).epsilon(1e-15));

  kn::assign_nearest(points, centers, assign, dist);
  CHECK(assign[0] == 0);  // 9.68 < 10.24
}

TEST_SUITE_END();
