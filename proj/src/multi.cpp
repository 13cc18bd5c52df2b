#include "bsp/multi.hpp"

#include <string>
#include <utility>

namespace bsp {

double aggregate_beta(const std::vector<EntropyReport>& reports) {
  if (reports.empty())
    fail(Status::EmptyInput, "aggregate_beta: no reports");
  double h = 0.0, h_max = 0.0;
  for (const auto& r : reports) {
    h += r.h;
    h_max += r.h_max;
  }
  if (h_max == 0.0) return 0.0;
  return h / h_max;
}

MultiStream::MultiStream(std::vector<AttributeSpec> specs,
                         std::uint64_t master_seed)
    : specs_(std::move(specs)), master_seed_(master_seed) {
  if (specs_.empty())
    fail(Status::SchemaError, "multi: attribute schema must be non-empty");
  numeric_.resize(specs_.size());
  categorical_.resize(specs_.size());
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& spec = specs_[i];
    if (!names.insert(spec.name).second)
      fail(Status::SchemaError, "multi: duplicate attribute " + spec.name);
    if (const auto* num = std::get_if<NumericAttribute>(&spec.kind)) {
      num->policy.validate();
      const Index dim = num->seed_matrix.dim();
      if (dim < 2)
        fail(Status::InsufficientSeed,
             "multi: seed matrix for " + spec.name + " must be at least 2x2");
      if (seed_dim_ == 0)
        seed_dim_ = dim;
      else if (seed_dim_ != dim)
        fail(Status::ShapeError,
             "multi: all numeric seed matrices must share one dimension");
    } else {
      const auto& cat = std::get<CategoricalAttribute>(spec.kind);
      categorical_[i] = std::make_unique<CategoricalStream>(
          CategorySpace::from_labels(cat.labels), cat.matrix, cat.cfg,
          derive(master_seed_, spec.name));
    }
  }
  seeded_ = (seed_dim_ == 0);
}

std::size_t MultiStream::attr_pos(const std::string& name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i)
    if (specs_[i].name == name) return i;
  fail(Status::SchemaError, "multi: no attribute named " + name);
}

void MultiStream::check_schema(const std::vector<Value>& values) const {
  if (values.size() != specs_.size())
    fail(Status::SchemaError,
         "multi: got " + std::to_string(values.size()) + " values for " +
             std::to_string(specs_.size()) + " attributes");
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const bool want_numeric =
        std::holds_alternative<NumericAttribute>(specs_[i].kind);
    const bool got_numeric = std::holds_alternative<double>(values[i]);
    if (want_numeric != got_numeric)
      fail(Status::InvalidValue,
           "multi: value type mismatch for attribute " + specs_[i].name);
  }
}

std::vector<EntropyReport> MultiStream::reports() const {
  std::vector<EntropyReport> out;
  out.reserve(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (categorical_[i]) {
      out.push_back(categorical_[i]->entropy());
    } else if (numeric_[i]) {
      out.push_back(numeric_[i]->entropy());
    } else {
      // Seeding still in progress: the seed matrix is the current state.
      out.push_back(
          std::get<NumericAttribute>(specs_[i].kind).seed_matrix.entropy());
    }
  }
  return out;
}

double MultiStream::beta() const { return aggregate_beta(reports()); }

void MultiStream::flush_seed(std::vector<OutputEvent>& out) {
  // Build every numeric engine over the buffered records, then replay the
  // records in order so each one's events stay grouped.
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (const auto* num = std::get_if<NumericAttribute>(&specs_[i].kind)) {
      std::vector<Tuple> seeds;
      seeds.reserve(pending_.size());
      for (const auto& rec : pending_)
        seeds.push_back(Tuple{rec.id, std::get<double>(rec.values[i])});
      numeric_[i] = std::make_unique<NumericStream>(
          num->seed_matrix, seeds, num->policy,
          derive(master_seed_, specs_[i].name));
    }
  }
  for (std::size_t rec = 0; rec < pending_.size(); ++rec) {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      if (numeric_[i]) {
        OutputEvent e = numeric_[i]->seed_events()[rec];
        e.attr = specs_[i].name;
        out.push_back(std::move(e));
      } else {
        auto events = categorical_[i]->randomize(
            pending_[rec].id, std::get<std::string>(pending_[rec].values[i]));
        for (auto& e : events) {
          e.attr = specs_[i].name;
          e.t = rec + 1;
          out.push_back(std::move(e));
        }
      }
    }
  }
  pending_.clear();
  seeded_ = true;
}

std::vector<OutputEvent> MultiStream::ingest(const std::string& id,
                                             const std::vector<Value>& values) {
  check_schema(values);
  if (!ids_.insert(id).second)
    fail(Status::DuplicateId, "multi: duplicate id " + id);
  ++t_;

  std::vector<OutputEvent> events;
  if (!seeded_) {
    pending_.push_back(PendingRecord{id, values});
    if (pending_.size() < seed_dim_) return {};
    flush_seed(events);
  } else {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      std::vector<OutputEvent> attr_events;
      if (numeric_[i]) {
        attr_events = numeric_[i]->ingest(Tuple{id, std::get<double>(values[i])});
      } else {
        attr_events = categorical_[i]->randomize(id, std::get<std::string>(values[i]));
      }
      for (auto& e : attr_events) {
        e.attr = specs_[i].name;
        e.t = t_;
        events.push_back(std::move(e));
      }
    }
  }
  const double agg = beta();
  for (auto& e : events) e.beta = agg;
  return events;
}

EntropyReport MultiStream::attribute_entropy(const std::string& name) const {
  return reports()[attr_pos(name)];
}

TransitionMatrix MultiStream::attribute_matrix(const std::string& name) const {
  const std::size_t i = attr_pos(name);
  if (categorical_[i]) return categorical_[i]->matrix();
  if (numeric_[i]) return numeric_[i]->matrix();
  return std::get<NumericAttribute>(specs_[i].kind).seed_matrix;
}

}  // namespace bsp
