#include "bsp/stream.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bsp {

void Policy::validate() const {
  if (lambda_mode == LambdaMode::Fixed &&
      !(lambda_value > 0.0 && lambda_value < 1.0))
    fail(Status::InvalidLambda,
         "policy: fixed lambda must be strictly inside (0, 1)");
  if (transforms_lo < 1)
    fail(Status::InvalidRange, "policy: at least one transform per arrival");
  if (transforms_mode == TransformsMode::RandomRange &&
      transforms_hi < transforms_lo)
    fail(Status::InvalidRange, "policy: transform range bounds out of order");
}

std::pair<double, double> t_transform_values(double a_i, double a_k,
                                             double lam) {
  if (!(lam >= 0.0 && lam < 1.0))
    fail(Status::InvalidLambda, "t_transform_values: lambda must be in [0, 1)");
  return {lam * a_i + (1.0 - lam) * a_k, lam * a_k + (1.0 - lam) * a_i};
}

NumericStream::NumericStream(TransitionMatrix seed_matrix,
                             const std::vector<Tuple>& seed_tuples,
                             Policy policy, Rng rng)
    : matrix_(std::move(seed_matrix)), policy_(policy), rng_(rng) {
  policy_.validate();
  if (seed_tuples.size() < 2)
    fail(Status::InsufficientSeed,
         "stream: publication needs at least two seed tuples");
  if (matrix_.dim() != seed_tuples.size())
    fail(Status::ShapeError, "stream: seed matrix dimension " +
                                 std::to_string(matrix_.dim()) +
                                 " does not match " +
                                 std::to_string(seed_tuples.size()) +
                                 " seed tuples");
  matrix_.validate();

  std::vector<double> raw;
  raw.reserve(seed_tuples.size());
  for (const auto& s : seed_tuples) {
    if (!std::isfinite(s.value))
      fail(Status::InvalidValue, "stream: non-finite value for id " + s.id);
    if (!id_index_.emplace(s.id, static_cast<Index>(ids_.size())).second)
      fail(Status::DuplicateId, "stream: duplicate id " + s.id);
    ids_.push_back(s.id);
    raw.push_back(s.value);
  }
  protected_ = matrix_.apply_to_numeric(raw);
  t_ = seed_tuples.size();

  const double beta = matrix_.entropy().beta;
  seed_events_.reserve(seed_tuples.size());
  for (std::size_t i = 0; i < seed_tuples.size(); ++i) {
    seed_events_.push_back(OutputEvent{EventKind::Release, i + 1, ids_[i], "",
                                       protected_[i], std::nullopt, beta});
  }
}

std::vector<OutputEvent> NumericStream::ingest(const Tuple& tuple) {
  if (!std::isfinite(tuple.value))
    fail(Status::InvalidValue, "stream: non-finite value for id " + tuple.id);
  if (id_index_.count(tuple.id))
    fail(Status::DuplicateId, "stream: duplicate id " + tuple.id);

  const Index j = matrix_.dim();
  const std::uint64_t pool = t_;  // individuals present before this arrival
  matrix_.augment();
  ids_.push_back(tuple.id);
  protected_.push_back(tuple.value);
  id_index_.emplace(tuple.id, j);

  std::uint32_t n = policy_.transforms_lo;
  if (policy_.transforms_mode == TransformsMode::RandomRange)
    n += static_cast<std::uint32_t>(
        rng_.next_index(policy_.transforms_hi - policy_.transforms_lo + 1));

  std::vector<Index> touched;  // distinct partners, first-touch order
  for (std::uint32_t s = 0; s < n; ++s) {
    const double lam = policy_.lambda_mode == LambdaMode::Fixed
                           ? policy_.lambda_value
                           : rng_.next_lambda();
    const Index k = static_cast<Index>(rng_.next_index(pool));
    const auto [nj, nk] = t_transform_values(protected_[j], protected_[k], lam);
    protected_[j] = nj;
    protected_[k] = nk;
    matrix_.apply_t({j, k, lam});
    if (std::find(touched.begin(), touched.end(), k) == touched.end())
      touched.push_back(k);
  }
  ++t_;

  const double beta = matrix_.entropy().beta;
  std::vector<OutputEvent> events;
  events.reserve(1 + touched.size());
  events.push_back(OutputEvent{EventKind::Release, t_, tuple.id, "",
                               protected_[j],
                               std::optional<std::string>(ids_[touched.front()]),
                               beta});
  for (Index k : touched)
    events.push_back(OutputEvent{EventKind::Update, t_, ids_[k], "",
                                 protected_[k],
                                 std::optional<std::string>(tuple.id), beta});
  return events;
}

StreamSnapshot NumericStream::snapshot() const {
  return StreamSnapshot{matrix_, protected_, t_};
}

}  // namespace bsp
