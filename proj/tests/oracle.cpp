#include "oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle {

DenseMatrix dense_identity(std::size_t r) {
  DenseMatrix a(r, std::vector<double>(r, 0.0));
  for (std::size_t i = 0; i < r; ++i) a[i][i] = 1.0;
  return a;
}

DenseMatrix dense_t_transform(std::size_t r, std::size_t j, std::size_t k,
                              double lam) {
  DenseMatrix t = dense_identity(r);
  t[j][j] = lam;
  t[k][k] = lam;
  t[j][k] = 1.0 - lam;
  t[k][j] = 1.0 - lam;
  return t;
}

DenseMatrix dense_augment(const DenseMatrix& a) {
  const std::size_t r = a.size();
  DenseMatrix out(r + 1, std::vector<double>(r + 1, 0.0));
  for (std::size_t u = 0; u < r; ++u)
    for (std::size_t v = 0; v < r; ++v) out[u][v] = a[u][v];
  out[r][r] = 1.0;
  return out;
}

DenseMatrix dense_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t r = a.size();
  if (b.size() != r) throw std::invalid_argument("dense_multiply: size mismatch");
  DenseMatrix c(r, std::vector<double>(r, 0.0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < r; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

DenseMatrix dense_transpose(const DenseMatrix& a) {
  const std::size_t r = a.size();
  DenseMatrix out(r, std::vector<double>(r, 0.0));
  for (std::size_t u = 0; u < r; ++u)
    for (std::size_t v = 0; v < r; ++v) out[v][u] = a[u][v];
  return out;
}

std::vector<double> dense_apply(const DenseMatrix& a,
                                const std::vector<double>& x) {
  const std::size_t r = a.size();
  if (x.size() != r) throw std::invalid_argument("dense_apply: size mismatch");
  std::vector<double> y(r, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) y[i] += a[i][j] * x[j];
  return y;
}

bool is_bistochastic(const DenseMatrix& a, double tol) {
  const std::size_t r = a.size();
  for (std::size_t u = 0; u < r; ++u) {
    if (a[u].size() != r) return false;
    double rs = 0.0;
    for (double p : a[u]) {
      if (p < -tol) return false;
      rs += p;
    }
    if (std::abs(rs - 1.0) > tol) return false;
  }
  for (std::size_t v = 0; v < r; ++v) {
    double cs = 0.0;
    for (std::size_t u = 0; u < r; ++u) cs += a[u][v];
    if (std::abs(cs - 1.0) > tol) return false;
  }
  return true;
}

double brute_entropy_rate(const DenseMatrix& a) {
  if (!is_bistochastic(a))
    throw std::invalid_argument("brute_entropy_rate: not bistochastic");
  const std::size_t r = a.size();
  long double s = 0.0L;
  const long double ln2 = std::log(2.0L);
  for (const auto& row : a)
    for (double p : row)
      if (p > 0.0) s -= static_cast<long double>(p) * std::log(static_cast<long double>(p)) / ln2;
  return static_cast<double>(s / static_cast<long double>(r));
}

double brute_beta(const DenseMatrix& a) {
  const std::size_t r = a.size();
  if (r <= 1) return 0.0;
  return brute_entropy_rate(a) /
         (std::log(static_cast<double>(r)) / std::log(2.0));
}

bool verify_product_entropy_bounds(const DenseMatrix& a, const DenseMatrix& b, double slack) {
  const double ha = brute_entropy_rate(a);
  const double hb = brute_entropy_rate(b);
  const double hab = brute_entropy_rate(dense_multiply(a, b));
  return hab >= std::max(ha, hb) - slack && hab <= ha + hb + slack;
}

std::vector<double> mixing_convergence_trajectory(std::size_t r, std::size_t steps,
                                    std::uint64_t seed, double lam) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> pick(0, r - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseMatrix p = dense_identity(r);
  std::vector<double> betas;
  betas.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t j = pick(gen);
    std::size_t k = pick(gen);
    while (k == j) k = pick(gen);
    double l = lam;
    if (l < 0.0) {
      l = unit(gen);
      while (l == 0.0) l = unit(gen);
    }
    p = dense_multiply(p, dense_t_transform(r, j, k, l));
    betas.push_back(brute_beta(p));
  }
  return betas;
}

bool reconstruct_check(
    const std::vector<double>& raw,
    const std::map<std::string, std::pair<std::size_t, double>>& latest,
    const DenseMatrix& matrix, double tol) {
  if (matrix.size() != raw.size()) return false;
  const auto y = dense_apply(dense_transpose(matrix), raw);
  for (const auto& [id, pv] : latest) {
    const auto& [pos, value] = pv;
    if (pos >= y.size()) return false;
    if (std::abs(y[pos] - value) > tol) return false;
  }
  return true;
}

}  // namespace oracle
