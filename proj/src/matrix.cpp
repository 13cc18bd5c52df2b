#include "bsp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bsp/rng.hpp"

namespace bsp {

namespace {

constexpr double kDropThreshold = 1e-15;
constexpr std::uint64_t kRebuildInterval = 10000;

const char* status_names[] = {
    "ok",
    "invalid-dimension",
    "shape-error",
    "not-bistochastic",
    "invalid-transform",
    "index-error",
    "invalid-lambda",
    "duplicate-id",
    "invalid-value",
    "insufficient-seed",
    "unknown-category",
    "already-known",
    "empty-input",
    "schema-error",
    "parse-error",
    "invalid-target",
    "invalid-range",
    "audit-input-error",
    "invalid-argument",
    "io-error",
    "unknown",
};

// -p*log2(p); entries of value 0 are never stored.
inline double entropy_term(double p) { return -p * std::log2(p); }

double column_contribution(const SparseVec& col) {
  double s = 0.0;
  for (const auto& [u, p] : col) s += entropy_term(p);
  return s;
}

}  // namespace

const char* status_name(Status s) {
  auto i = static_cast<std::size_t>(s);
  if (i >= sizeof(status_names) / sizeof(status_names[0])) return "unknown";
  return status_names[i];
}

TransitionMatrix TransitionMatrix::identity(Index r) {
  if (r < 1) fail(Status::InvalidDimension, "identity: r must be >= 1");
  TransitionMatrix m;
  m.r_ = r;
  m.cols_.resize(r);
  for (Index v = 0; v < r; ++v) m.cols_[v] = {{v, 1.0}};
  return m;
}

TransitionMatrix TransitionMatrix::perfect(Index r) {
  if (r < 1) fail(Status::InvalidDimension, "perfect: r must be >= 1");
  TransitionMatrix m;
  m.r_ = r;
  m.cols_.resize(r);
  const double p = 1.0 / r;
  for (Index v = 0; v < r; ++v) {
    m.cols_[v].reserve(r);
    for (Index u = 0; u < r; ++u) m.cols_[v].emplace_back(u, p);
  }
  m.rebuild_ledger();
  return m;
}

TransitionMatrix TransitionMatrix::from_dense(
    const std::vector<double>& entries, Index r, double tol) {
  if (r < 1) fail(Status::InvalidDimension, "from_dense: r must be >= 1");
  if (entries.size() != static_cast<std::size_t>(r) * r)
    fail(Status::ShapeError, "from_dense: expected a square r*r array");
  TransitionMatrix m;
  m.r_ = r;
  m.cols_.resize(r);
  for (Index u = 0; u < r; ++u) {
    for (Index v = 0; v < r; ++v) {
      const double p = entries[static_cast<std::size_t>(u) * r + v];
      if (!std::isfinite(p) || p < -tol)
        fail(Status::InvalidValue, "from_dense: entry (" + std::to_string(u) +
                                       "," + std::to_string(v) +
                                       ") is negative or not finite");
      if (p > tol) m.cols_[v].emplace_back(u, p);
    }
  }
  // Report the worst row/column violation, if any.
  double worst = 0.0;
  std::string where;
  for (Index u = 0; u < r; ++u) {
    double s = 0.0;
    for (Index v = 0; v < r; ++v) s += entries[static_cast<std::size_t>(u) * r + v];
    if (std::abs(s - 1.0) > worst) {
      worst = std::abs(s - 1.0);
      where = "row " + std::to_string(u) + " sums to " + std::to_string(s);
    }
  }
  for (Index v = 0; v < r; ++v) {
    double s = 0.0;
    for (const auto& [u, p] : m.cols_[v]) s += p;
    if (std::abs(s - 1.0) > worst) {
      worst = std::abs(s - 1.0);
      where = "column " + std::to_string(v) + " sums to " + std::to_string(s);
    }
  }
  if (worst > tol)
    fail(Status::NotBistochastic, "from_dense: " + where);
  m.rebuild_ledger();
  return m;
}

std::size_t TransitionMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& col : cols_) n += col.size();
  return n;
}

EntropyReport TransitionMatrix::entropy() const {
  EntropyReport rep;
  rep.h = neg_entropy_sum_ / r_;
  rep.h_max = std::log2(static_cast<double>(r_));
  rep.beta = (r_ == 1) ? 0.0 : std::clamp(rep.h / rep.h_max, 0.0, 1.0);
  return rep;
}

void TransitionMatrix::augment() {
  cols_.push_back({{r_, 1.0}});
  ++r_;
  // The unit entry contributes nothing to the ledger.
}

void TransitionMatrix::apply_t(const TTransform& t) {
  if (t.j == t.k)
    fail(Status::InvalidTransform, "apply_t: j and k must differ");
  if (t.j >= r_ || t.k >= r_)
    fail(Status::IndexError, "apply_t: index out of range");
  if (!(t.lam >= 0.0 && t.lam < 1.0))
    fail(Status::InvalidLambda, "apply_t: lambda must be in [0, 1)");

  SparseVec& cj = cols_[t.j];
  SparseVec& ck = cols_[t.k];
  neg_entropy_sum_ -= column_contribution(cj) + column_contribution(ck);

  if (t.lam == 0.0) {
    // Eq. reduces to the plain transposition: swap the columns.
    std::swap(cj, ck);
    neg_entropy_sum_ += column_contribution(cj) + column_contribution(ck);
    return;
  }

  const double lam = t.lam;
  const double mu = 1.0 - lam;
  SparseVec nj, nk;
  nj.reserve(cj.size() + ck.size());
  nk.reserve(cj.size() + ck.size());
  std::size_t a = 0, b = 0;
  bool dropped_j = false, dropped_k = false;
  auto push = [](SparseVec& col, Index u, double p, bool& dropped) {
    if (p > kDropThreshold)
      col.emplace_back(u, p);
    else
      dropped = true;
  };
  while (a < cj.size() || b < ck.size()) {
    if (b == ck.size() || (a < cj.size() && cj[a].first < ck[b].first)) {
      push(nj, cj[a].first, lam * cj[a].second, dropped_j);
      push(nk, cj[a].first, mu * cj[a].second, dropped_k);
      ++a;
    } else if (a == cj.size() || ck[b].first < cj[a].first) {
      push(nj, ck[b].first, mu * ck[b].second, dropped_j);
      push(nk, ck[b].first, lam * ck[b].second, dropped_k);
      ++b;
    } else {
      const Index u = cj[a].first;
      push(nj, u, lam * cj[a].second + mu * ck[b].second, dropped_j);
      push(nk, u, lam * ck[b].second + mu * cj[a].second, dropped_k);
      ++a;
      ++b;
    }
  }
  auto renormalize = [](SparseVec& col) {
    double s = 0.0;
    for (const auto& [u, p] : col) s += p;
    if (s > 0.0 && s != 1.0) {
      const double inv = 1.0 / s;
      for (auto& [u, p] : col) p *= inv;
    }
  };
  if (dropped_j) renormalize(nj);
  if (dropped_k) renormalize(nk);
  cj = std::move(nj);
  ck = std::move(nk);
  neg_entropy_sum_ += column_contribution(cj) + column_contribution(ck);

  if (++mixes_since_rebuild_ >= kRebuildInterval) rebuild_ledger();
}

void TransitionMatrix::rebuild_ledger() {
  long double s = 0.0L;
  for (const auto& col : cols_)
    for (const auto& [u, p] : col) s += static_cast<long double>(entropy_term(p));
  neg_entropy_sum_ = static_cast<double>(s);
  mixes_since_rebuild_ = 0;
}

std::vector<double> TransitionMatrix::apply_to_numeric(
    const std::vector<double>& x) const {
  if (x.size() != r_)
    fail(Status::ShapeError, "apply_to_numeric: vector length " +
                                 std::to_string(x.size()) +
                                 " does not match dimension " +
                                 std::to_string(r_));
  std::vector<double> y(r_, 0.0);
  for (Index v = 0; v < r_; ++v) {
    double s = 0.0;
    for (const auto& [u, p] : cols_[v]) s += p * x[u];
    y[v] = s;
  }
  return y;
}

Index TransitionMatrix::sample_category(Index u, Rng& rng) const {
  if (u >= r_) fail(Status::IndexError, "sample_category: index out of range");
  const double target = rng.next_unit();
  double cum = 0.0;
  Index last_nonzero = 0;
  bool seen = false;
  for (Index v = 0; v < r_; ++v) {
    const auto& col = cols_[v];
    auto it = std::lower_bound(
        col.begin(), col.end(), u,
        [](const std::pair<Index, double>& e, Index key) { return e.first < key; });
    if (it == col.end() || it->first != u) continue;
    cum += it->second;
    last_nonzero = v;
    seen = true;
    if (target < cum) return v;
  }
  if (!seen) fail(Status::NotBistochastic, "sample_category: empty row");
  return last_nonzero;  // target landed in the rounding slack past the tail
}

std::vector<double> TransitionMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(r_) * r_, 0.0);
  for (Index v = 0; v < r_; ++v)
    for (const auto& [u, p] : cols_[v]) d[static_cast<std::size_t>(u) * r_ + v] = p;
  return d;
}

void TransitionMatrix::validate(double tol) const {
  std::vector<double> row_sums(r_, 0.0);
  for (Index v = 0; v < r_; ++v) {
    double col_sum = 0.0;
    for (const auto& [u, p] : cols_[v]) {
      if (!(p > 0.0 && p <= 1.0 + tol))
        fail(Status::NotBistochastic,
             "validate: entry out of (0, 1] in column " + std::to_string(v));
      if (u >= r_) fail(Status::IndexError, "validate: stray row index");
      col_sum += p;
      row_sums[u] += p;
    }
    if (std::abs(col_sum - 1.0) > tol)
      fail(Status::NotBistochastic, "validate: column " + std::to_string(v) +
                                        " sums to " + std::to_string(col_sum));
  }
  for (Index u = 0; u < r_; ++u)
    if (std::abs(row_sums[u] - 1.0) > tol)
      fail(Status::NotBistochastic, "validate: row " + std::to_string(u) +
                                        " sums to " +
                                        std::to_string(row_sums[u]));
  long double brute = 0.0L;
  for (const auto& col : cols_)
    for (const auto& [u, p] : col) brute += static_cast<long double>(entropy_term(p));
  if (std::abs(static_cast<double>(brute) - neg_entropy_sum_) > 1e-9)
    fail(Status::InvalidValue, "validate: entropy ledger drifted");
}

const SparseVec& TransitionMatrix::column(Index v) const {
  if (v >= r_) fail(Status::IndexError, "column: index out of range");
  return cols_[v];
}

TransitionMatrix compose_t_transforms(Index r,
                                      const std::vector<TTransform>& schedule) {
  TransitionMatrix m = TransitionMatrix::identity(r);
  for (const auto& t : schedule) m.apply_t(t);
  return m;
}

GeneratedMatrix generate_to_beta(Index r, double target_beta, Rng& rng) {
  if (r < 2) fail(Status::InvalidDimension, "generate_to_beta: r must be >= 2");
  if (!(target_beta > 0.0 && target_beta <= 1.0))
    fail(Status::InvalidTarget,
         "generate_to_beta: target beta must be in (0, 1]");

  constexpr std::uint64_t kMaxTransforms = 1000000;
  TransitionMatrix m = TransitionMatrix::identity(r);
  std::uint64_t applied = 0;
  auto draw_pair = [&]() {
    const Index j = static_cast<Index>(rng.next_index(r));
    Index k = static_cast<Index>(rng.next_index(r - 1));
    if (k >= j) ++k;
    return TTransform{j, k, 0.5};
  };
  while (true) {
    const double beta = m.entropy().beta;
    if (beta >= target_beta - 1e-9) break;
    TTransform t = draw_pair();
    TransitionMatrix candidate = m;
    candidate.apply_t(t);
    if (candidate.entropy().beta >= target_beta) {
      // Bisect lambda in [0.5, 1): beta is decreasing in lambda here.
      double lo = 0.5, hi = 1.0 - 1e-12;
      TransitionMatrix best = candidate;
      for (int i = 0; i < 20; ++i) {
        const double mid = 0.5 * (lo + hi);
        TransitionMatrix probe = m;
        probe.apply_t({t.j, t.k, mid});
        if (probe.entropy().beta >= target_beta) {
          lo = mid;
          best = std::move(probe);
        } else {
          hi = mid;
        }
      }
      m = std::move(best);
      ++applied;
      break;
    }
    m = std::move(candidate);
    ++applied;
    // Asymptotic regime: beta can approach but never cross targets near 1.
    if (m.entropy().beta >= target_beta - 1e-4) break;
    if (applied >= kMaxTransforms)
      fail(Status::InvalidTarget,
           "generate_to_beta: target not reached within transform budget");
  }
  const double achieved = m.entropy().beta;
  if (std::abs(achieved - target_beta) > 1e-3)
    fail(Status::InvalidTarget,
         "generate_to_beta: achieved beta " + std::to_string(achieved) +
             " misses target " + std::to_string(target_beta));
  return GeneratedMatrix{std::move(m), achieved, applied};
}

TransitionMatrix read_dense_text(std::istream& in, double tol) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof())
      fail(Status::ParseError,
           "matrix text: bad number on line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Status::EmptyInput, "matrix text: no rows");
  const std::size_t r = rows.size();
  std::vector<double> flat;
  flat.reserve(r * r);
  for (std::size_t u = 0; u < r; ++u) {
    if (rows[u].size() != r)
      fail(Status::ShapeError, "matrix text: row " + std::to_string(u) +
                                   " has " + std::to_string(rows[u].size()) +
                                   " entries, expected " + std::to_string(r));
    for (double v : rows[u]) flat.push_back(v);
  }
  return TransitionMatrix::from_dense(flat, static_cast<Index>(r), tol);
}

void write_dense_text(std::ostream& out, const TransitionMatrix& m) {
  const auto dense = m.to_dense();
  const Index r = m.dim();
  char buf[32];
  for (Index u = 0; u < r; ++u) {
    for (Index v = 0; v < r; ++v) {
      std::snprintf(buf, sizeof(buf), "%.17g",
                    dense[static_cast<std::size_t>(u) * r + v]);
      out << (v ? " " : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace bsp
