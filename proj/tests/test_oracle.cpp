#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"
#include "doctest.h"
#include "oracle.hpp"

namespace {

oracle::DenseMatrix random_dense_composed(std::size_t r, std::size_t steps,
                                          std::mt19937_64& gen) {
  std::uniform_int_distribution<std::size_t> pick(0, r - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto m = oracle::dense_identity(r);
  for (std::size_t i = 0; i < steps; ++i) {
    std::size_t j = pick(gen), k = pick(gen);
    while (k == j) k = pick(gen);
    m = oracle::dense_multiply(m, oracle::dense_t_transform(r, j, k, unit(gen)));
  }
  return m;
}

}  // namespace

TEST_CASE("dense multiply basics") {
  std::mt19937_64 gen(1);
  auto a = random_dense_composed(5, 10, gen);
  auto ai = oracle::dense_multiply(a, oracle::dense_identity(5));
  for (std::size_t u = 0; u < 5; ++u)
    for (std::size_t v = 0; v < 5; ++v)
      CHECK(ai[u][v] == doctest::Approx(a[u][v]).epsilon(1e-12));

  auto t = oracle::dense_t_transform(2, 0, 1, 0.5);
  auto tt = oracle::dense_multiply(t, t);
  for (const auto& row : tt)
    for (double p : row) CHECK(p == doctest::Approx(0.5).epsilon(1e-12));

  auto b = random_dense_composed(5, 10, gen);
  CHECK(oracle::is_bistochastic(oracle::dense_multiply(a, b), 1e-12));
}

TEST_CASE("brute entropy rate") {
  CHECK(oracle::brute_entropy_rate({{0.8, 0.2}, {0.2, 0.8}}) ==
        doctest::Approx(0.7219280948873623).epsilon(1e-12));
  CHECK(oracle::brute_entropy_rate(oracle::dense_identity(6)) == 0.0);
  for (std::size_t r : {2, 3, 8}) {
    oracle::DenseMatrix p(r, std::vector<double>(r, 1.0 / r));
    CHECK(oracle::brute_entropy_rate(p) ==
          doctest::Approx(std::log2(double(r))).epsilon(1e-12));
  }
  CHECK_THROWS(oracle::brute_entropy_rate({{0.9, 0.2}, {0.2, 0.8}}));
}

TEST_CASE("entropy product bounds on random pairs") {
  auto id = oracle::dense_identity(3);
  CHECK(oracle::verify_product_entropy_bounds(id, id));

  std::mt19937_64 gen(2);
  oracle::DenseMatrix star(4, std::vector<double>(4, 0.25));
  auto b = random_dense_composed(4, 8, gen);
  CHECK(oracle::verify_product_entropy_bounds(star, b));
  CHECK(oracle::brute_entropy_rate(oracle::dense_multiply(star, b)) ==
        doctest::Approx(2.0).epsilon(1e-9));

  for (int i = 0; i < 200; ++i) {
    const std::size_t r = 2 + gen() % 15;
    auto a = random_dense_composed(r, 1 + gen() % 30, gen);
    auto c = random_dense_composed(r, 1 + gen() % 30, gen);
    CHECK(oracle::verify_product_entropy_bounds(a, c));
  }
}

TEST_CASE("repeated mixing converges to perfect secrecy") {
  auto one = oracle::mixing_convergence_trajectory(2, 1, 3, 0.5);
  CHECK(one.back() == doctest::Approx(1.0).epsilon(1e-12));

  auto traj = oracle::mixing_convergence_trajectory(8, 500, 4, 0.5);
  double prev = 0.0;
  for (double b : traj) {
    CHECK(b >= prev - 1e-12);
    prev = b;
  }
  CHECK(traj.back() >= 0.99);
}

TEST_CASE("lam = 0.5 converges faster than random lam (median steps)") {
  auto steps_to = [](const std::vector<double>& traj, double thr) {
    for (std::size_t i = 0; i < traj.size(); ++i)
      if (traj[i] >= thr) return i + 1;
    return traj.size() + 1;
  };
  std::vector<std::size_t> fixed, rnd;
  for (std::uint64_t s = 0; s < 21; ++s) {
    fixed.push_back(steps_to(oracle::mixing_convergence_trajectory(8, 800, 100 + s, 0.5), 0.99));
    rnd.push_back(steps_to(oracle::mixing_convergence_trajectory(8, 800, 100 + s, -1.0), 0.99));
  }
  std::sort(fixed.begin(), fixed.end());
  std::sort(rnd.begin(), rnd.end());
  CHECK(fixed[10] < rnd[10]);
}

TEST_CASE("engine matrix equals the oracle fold of augment and right products") {
  bsp::Rng rng(7);
  bsp::TransitionMatrix m = bsp::TransitionMatrix::from_dense({0.8, 0.2, 0.2, 0.8}, 2);
  oracle::DenseMatrix d = {{0.8, 0.2}, {0.2, 0.8}};
  for (int step = 0; step < 40; ++step) {
    m.augment();
    d = oracle::dense_augment(d);
    const std::size_t r = d.size();
    const std::size_t j = r - 1;
    std::size_t k = rng.next_index(r - 1);
    const double lam = rng.next_lambda();
    m.apply_t({static_cast<bsp::Index>(j), static_cast<bsp::Index>(k), lam});
    d = oracle::dense_multiply(d, oracle::dense_t_transform(r, j, k, lam));
  }
  auto dm = m.to_dense();
  const std::size_t r = d.size();
  for (std::size_t u = 0; u < r; ++u)
    for (std::size_t v = 0; v < r; ++v)
      CHECK(std::abs(dm[u * r + v] - d[u][v]) < 1e-12);
  CHECK(std::abs(oracle::brute_entropy_rate(d) - m.entropy().h) < 1e-12);
}
