#ifndef BSP_CATEGORICAL_HPP
#define BSP_CATEGORICAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"
#include "bsp/stream.hpp"

namespace bsp {

struct CategorySpace {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Index> index;

  static CategorySpace from_labels(std::vector<std::string> labels);
  bool contains(const std::string& label) const;
  Index at(const std::string& label) const;
  void add(const std::string& label);
};

enum class UnknownCategoryMode { Expand, Reject };

struct CatConfig {
  UnknownCategoryMode unknown = UnknownCategoryMode::Reject;
  double expand_lambda = 0.5;  // in (0,1)
  /// Existing category to mix a new one with; unset = uniformly random.
  std::optional<std::string> expand_target;
};

/// Randomized-response protection of a categorical attribute, with
/// T-transform-based category expansion when an unforeseen label appears.
/// It mixes categories, not individuals, so the matrix only changes on
/// expansion.
class CategoricalStream {
 public:
  CategoricalStream(CategorySpace space, TransitionMatrix matrix,
                    CatConfig cfg, Rng rng);

  /// Protect one record. A known category yields a single release event;
  /// an unknown one (in Expand mode) first emits the expansion's update
  /// events, then the release.
  std::vector<OutputEvent> randomize(const std::string& id,
                                     const std::string& true_category);

  /// Grow the space with new_label by mixing it with target_label: the
  /// matrix becomes apply_t(augment(P), {target, r, lam}) and every
  /// prior record currently reported as target_label independently moves
  /// to new_label with probability 1-lam, each move emitting an update.
  std::vector<OutputEvent> expand(const std::string& new_label,
                                  const std::string& target_label, double lam);

  /// Extra mixing step between two existing categories: apply_t on their
  /// columns plus re-randomization of the records reported in either one
  /// (stay with probability lam, move to the other with 1-lam).
  std::vector<OutputEvent> mix(const std::string& label_a,
                               const std::string& label_b, double lam);

  double beta() const { return matrix_.entropy().beta; }
  EntropyReport entropy() const { return matrix_.entropy(); }
  const TransitionMatrix& matrix() const { return matrix_; }
  const CategorySpace& space() const { return space_; }
  std::uint64_t arrivals() const { return t_; }
  const std::string& released(const std::string& id) const;

 private:
  OutputEvent release_event(const std::string& id, Index category);

  CategorySpace space_;
  TransitionMatrix matrix_;
  CatConfig cfg_;
  std::unordered_map<std::string, Index> released_;  // id -> category index
  std::vector<std::string> release_order_;           // stable iteration order
  std::uint64_t t_ = 0;
  Rng rng_;
};

}  // namespace bsp

#endif
