#ifndef BSP_MATRIX_HPP
#define BSP_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "bsp/error.hpp"

namespace bsp {

class Rng;

using Index = std::uint32_t;

/// Elementary mixing event on coordinates (j, k):  T = lam*I + (1-lam)*Q
/// with Q the transposition of j and k.
struct TTransform {
  Index j;
  Index k;
  double lam;  // in [0, 1)
};

struct EntropyReport {
  double h;      // entropy rate, bits
  double h_max;  // log2 r
  double beta;   // h / h_max, 0 for r = 1
};

/// Sparse probability vector: (source index, probability) pairs sorted by
/// index. Zeros are never stored.
using SparseVec = std::vector<std::pair<Index, double>>;

/// Growing square bistochastic matrix, stored column-wise (cols_[v] is
/// column v of P, i.e. row v of P'), with a running entropy ledger so the
/// privacy level is an O(1) query.
class TransitionMatrix {
 public:
  static TransitionMatrix identity(Index r);
  static TransitionMatrix perfect(Index r);
  /// entries is row-major r*r, entries[u*r + v] = p_uv.
  static TransitionMatrix from_dense(const std::vector<double>& entries,
                                     Index r, double tol = 1e-9);

  Index dim() const { return r_; }
  std::size_t nnz() const;

  /// O(1): reads the ledger only.
  EntropyReport entropy() const;

  /// Embed into (r+1)x(r+1) with a unit column/row for the new index.
  /// The ledger is unchanged, so the entropy rate drops by r/(r+1).
  void augment();

  /// Right-product P <- P*T: columns j and k are replaced by their convex
  /// mixtures. O(support(col_j) + support(col_k)).
  void apply_t(const TTransform& t);

  /// y = P'x, i.e. y_v = sum_u p_uv * x_u.
  std::vector<double> apply_to_numeric(const std::vector<double>& x) const;

  /// Draw v with probability p_uv (inverse CDF over row u).
  Index sample_category(Index u, Rng& rng) const;

  /// Row-major r*r array with zeros filled in.
  std::vector<double> to_dense() const;

  /// Checks entries in (0,1], row/column sums, and the ledger.
  void validate(double tol = 1e-9) const;

  const SparseVec& column(Index v) const;

  double neg_entropy_sum() const { return neg_entropy_sum_; }

 private:
  TransitionMatrix() = default;
  void rebuild_ledger();

  Index r_ = 0;
  std::vector<SparseVec> cols_;
  double neg_entropy_sum_ = 0.0;  // -sum p*log2(p) over all entries, bits
  std::uint64_t mixes_since_rebuild_ = 0;
};

/// identity(r) with each transform applied in order.
TransitionMatrix compose_t_transforms(Index r,
                                      const std::vector<TTransform>& schedule);

struct GeneratedMatrix {
  TransitionMatrix matrix;
  double achieved_beta;
  std::uint64_t transforms;
};

/// Build a matrix hitting a target privacy level: lam = 0.5 transforms on
/// uniformly random distinct pairs until beta reaches the target, then the
/// last transform's lam is bisected so the achieved beta is within 1e-3 of
/// the target.
GeneratedMatrix generate_to_beta(Index r, double target_beta, Rng& rng);

/// Dense text format: one row per line, decimal floats separated by single
/// spaces, '#'-prefixed comment lines ignored.
TransitionMatrix read_dense_text(std::istream& in, double tol = 1e-9);
void write_dense_text(std::ostream& out, const TransitionMatrix& m);

}  // namespace bsp

#endif
