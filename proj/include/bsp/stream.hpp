#ifndef BSP_STREAM_HPP
#define BSP_STREAM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bsp/matrix.hpp"
#include "bsp/rng.hpp"

namespace bsp {

struct Tuple {
  std::string id;
  double value;
};

enum class EventKind { Release, Update };

/// One line of the protected stream. A release is the first publication of
/// a new individual's protected value; an update corrects the value of a
/// previously released partner.
struct OutputEvent {
  EventKind kind;
  std::uint64_t t;  // arrival counter (1-based individual count)
  std::string id;
  std::string attr;  // set by the multi-attribute layer, empty otherwise
  std::variant<double, std::string> value;
  std::optional<std::string> partner;
  double beta;
};

enum class LambdaMode { RandomUniform, Fixed };
enum class TransformsMode { Fixed, RandomRange };

struct Policy {
  LambdaMode lambda_mode = LambdaMode::RandomUniform;
  double lambda_value = 0.5;  // used in Fixed mode, must be in (0,1)
  TransformsMode transforms_mode = TransformsMode::Fixed;
  std::uint32_t transforms_lo = 1;
  std::uint32_t transforms_hi = 1;

  void validate() const;
};

struct StreamSnapshot {
  TransitionMatrix matrix;
  std::vector<double> protected_values;
  std::uint64_t t;
};

/// Step 4 of the per-arrival mixing: returns
/// (lam*a_i + (1-lam)*a_k, lam*a_k + (1-lam)*a_i).
std::pair<double, double> t_transform_values(double a_i, double a_k,
                                             double lam);

/// Zero-delay anonymization of one numeric attribute. Each arriving tuple
/// is mixed with previously released individuals and published immediately;
/// the cumulative matrix reconstructs every published value.
class NumericStream {
 public:
  NumericStream(TransitionMatrix seed_matrix,
                const std::vector<Tuple>& seed_tuples, Policy policy, Rng rng);

  /// Release events for the seed tuples (t = 1..r, all carrying the seed
  /// matrix's beta).
  const std::vector<OutputEvent>& seed_events() const { return seed_events_; }

  /// Protect one tuple and return its release event followed by one update
  /// per distinct mixed partner, all stamped with the new beta.
  std::vector<OutputEvent> ingest(const Tuple& tuple);

  double beta() const { return matrix_.entropy().beta; }
  EntropyReport entropy() const { return matrix_.entropy(); }
  std::uint64_t arrivals() const { return t_; }
  StreamSnapshot snapshot() const;

  const TransitionMatrix& matrix() const { return matrix_; }
  const std::vector<double>& protected_values() const { return protected_; }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  TransitionMatrix matrix_;
  std::vector<std::string> ids_;
  std::vector<double> protected_;
  std::unordered_map<std::string, Index> id_index_;
  std::uint64_t t_ = 0;
  Policy policy_;
  Rng rng_;
  std::vector<OutputEvent> seed_events_;
};

}  // namespace bsp

#endif
