#ifndef BSP_MULTI_HPP
#define BSP_MULTI_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "bsp/categorical.hpp"
#include "bsp/matrix.hpp"
#include "bsp/stream.hpp"

namespace bsp {

struct NumericAttribute {
  Policy policy;
  TransitionMatrix seed_matrix;  // size >= 2; the first dim() records seed
};

struct CategoricalAttribute {
  std::vector<std::string> labels;
  TransitionMatrix matrix;  // over the labels
  CatConfig cfg;
};

struct AttributeSpec {
  std::string name;
  std::variant<NumericAttribute, CategoricalAttribute> kind;
};

using Value = std::variant<double, std::string>;

/// Aggregate guarantee over independently protected attributes:
/// sum of entropy rates over sum of maximum entropy rates.
double aggregate_beta(const std::vector<EntropyReport>& reports);

/// Orchestrates one engine per attribute over a shared arrival counter.
/// Each attribute draws from its own RNG substream (derived from the
/// master seed and the attribute name), so attributes never perturb each
/// other. Numeric engines start once the seed-matrix-many first records
/// have arrived; all events of an arrival carry the aggregate beta.
class MultiStream {
 public:
  MultiStream(std::vector<AttributeSpec> specs, std::uint64_t master_seed);

  std::vector<OutputEvent> ingest(const std::string& id,
                                  const std::vector<Value>& values);

  double beta() const;
  std::uint64_t arrivals() const { return t_; }
  bool seeded() const { return seeded_; }
  std::size_t attribute_count() const { return specs_.size(); }
  const std::vector<AttributeSpec>& specs() const { return specs_; }

  EntropyReport attribute_entropy(const std::string& name) const;
  /// Deep copy of the attribute's current matrix.
  TransitionMatrix attribute_matrix(const std::string& name) const;

 private:
  struct PendingRecord {
    std::string id;
    std::vector<Value> values;
  };

  std::size_t attr_pos(const std::string& name) const;
  void check_schema(const std::vector<Value>& values) const;
  std::vector<EntropyReport> reports() const;
  void flush_seed(std::vector<OutputEvent>& out);

  std::vector<AttributeSpec> specs_;
  std::uint64_t master_seed_;
  Index seed_dim_ = 0;  // 0 when there is no numeric attribute
  bool seeded_ = false;
  std::vector<PendingRecord> pending_;
  // One entry per spec; numeric engines are null until seeding completes.
  std::vector<std::unique_ptr<NumericStream>> numeric_;
  std::vector<std::unique_ptr<CategoricalStream>> categorical_;
  std::unordered_set<std::string> ids_;
  std::uint64_t t_ = 0;
};

}  // namespace bsp

#endif
