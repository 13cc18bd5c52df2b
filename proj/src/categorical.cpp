#include "bsp/categorical.hpp"

#include <string>
#include <utility>

namespace bsp {

CategorySpace CategorySpace::from_labels(std::vector<std::string> labels) {
  if (labels.empty())
    fail(Status::EmptyInput, "category space: at least one label required");
  CategorySpace s;
  for (auto& l : labels) {
    if (!s.index.emplace(l, static_cast<Index>(s.labels.size())).second)
      fail(Status::DuplicateId, "category space: duplicate label " + l);
    s.labels.push_back(std::move(l));
  }
  return s;
}

bool CategorySpace::contains(const std::string& label) const {
  return index.count(label) != 0;
}

Index CategorySpace::at(const std::string& label) const {
  auto it = index.find(label);
  if (it == index.end())
    fail(Status::UnknownCategory, "unknown category " + label);
  return it->second;
}

void CategorySpace::add(const std::string& label) {
  if (!index.emplace(label, static_cast<Index>(labels.size())).second)
    fail(Status::AlreadyKnown, "category " + label + " already known");
  labels.push_back(label);
}

CategoricalStream::CategoricalStream(CategorySpace space,
                                     TransitionMatrix matrix, CatConfig cfg,
                                     Rng rng)
    : space_(std::move(space)),
      matrix_(std::move(matrix)),
      cfg_(cfg),
      rng_(rng) {
  if (matrix_.dim() != space_.labels.size())
    fail(Status::ShapeError,
         "categorical: matrix dimension does not match label count");
  matrix_.validate();
  if (!(cfg_.expand_lambda > 0.0 && cfg_.expand_lambda < 1.0))
    fail(Status::InvalidLambda,
         "categorical: expand lambda must be strictly inside (0, 1)");
  if (cfg_.expand_target && !space_.contains(*cfg_.expand_target))
    fail(Status::UnknownCategory,
         "categorical: expand target " + *cfg_.expand_target + " not a label");
}

OutputEvent CategoricalStream::release_event(const std::string& id,
                                             Index category) {
  released_.emplace(id, category);
  release_order_.push_back(id);
  return OutputEvent{EventKind::Release,     t_, id, "",
                     space_.labels[category], std::nullopt,
                     matrix_.entropy().beta};
}

std::vector<OutputEvent> CategoricalStream::randomize(
    const std::string& id, const std::string& true_category) {
  if (released_.count(id))
    fail(Status::DuplicateId, "categorical: duplicate id " + id);

  std::vector<OutputEvent> events;
  Index u;
  if (space_.contains(true_category)) {
    u = space_.at(true_category);
    ++t_;
  } else {
    if (cfg_.unknown == UnknownCategoryMode::Reject)
      fail(Status::UnknownCategory,
           "categorical: unknown category " + true_category);
    std::string target =
        cfg_.expand_target
            ? *cfg_.expand_target
            : space_.labels[rng_.next_index(space_.labels.size())];
    ++t_;
    events = expand(true_category, target, cfg_.expand_lambda);
    u = space_.at(true_category);
  }
  const Index v = matrix_.sample_category(u, rng_);
  events.push_back(release_event(id, v));
  return events;
}

std::vector<OutputEvent> CategoricalStream::expand(
    const std::string& new_label, const std::string& target_label,
    double lam) {
  if (space_.contains(new_label))
    fail(Status::AlreadyKnown, "categorical: " + new_label + " already known");
  if (!(lam > 0.0 && lam < 1.0))
    fail(Status::InvalidLambda,
         "categorical: expansion lambda must be strictly inside (0, 1)");
  const Index j = space_.at(target_label);
  const Index fresh = matrix_.dim();
  matrix_.augment();
  matrix_.apply_t({j, fresh, lam});
  space_.add(new_label);

  // Prior records reported as the target inherit the new category with
  // probability 1-lam; iteration follows release order for determinism.
  const double beta = matrix_.entropy().beta;
  std::vector<OutputEvent> events;
  for (const auto& id : release_order_) {
    auto it = released_.find(id);
    if (it->second != j) continue;
    if (rng_.next_unit() < 1.0 - lam) {
      it->second = fresh;
      events.push_back(OutputEvent{EventKind::Update, t_, id, "",
                                   space_.labels[fresh], std::nullopt, beta});
    }
  }
  return events;
}

std::vector<OutputEvent> CategoricalStream::mix(const std::string& label_a,
                                                const std::string& label_b,
                                                double lam) {
  if (!(lam > 0.0 && lam < 1.0))
    fail(Status::InvalidLambda,
         "categorical: mixing lambda must be strictly inside (0, 1)");
  const Index a = space_.at(label_a);
  const Index b = space_.at(label_b);
  if (a == b) fail(Status::InvalidTransform, "categorical: labels must differ");
  matrix_.apply_t({a, b, lam});

  const double beta = matrix_.entropy().beta;
  std::vector<OutputEvent> events;
  for (const auto& id : release_order_) {
    auto it = released_.find(id);
    if (it->second != a && it->second != b) continue;
    if (rng_.next_unit() < 1.0 - lam) {
      it->second = (it->second == a) ? b : a;
      events.push_back(OutputEvent{EventKind::Update, t_, id, "",
                                   space_.labels[it->second], std::nullopt,
                                   beta});
    }
  }
  return events;
}

const std::string& CategoricalStream::released(const std::string& id) const {
  auto it = released_.find(id);
  if (it == released_.end())
    fail(Status::IndexError, "categorical: id " + id + " never released");
  return space_.labels[it->second];
}

}  // namespace bsp
