#include "bsp/bsp.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsp/categorical.hpp"
#include "bsp/error.hpp"
#include "bsp/matrix.hpp"
#include "bsp/multi.hpp"
#include "bsp/rng.hpp"
#include "bsp/stream.hpp"

struct bsp_rng {
  bsp::Rng rng;
};

struct bsp_matrix {
  bsp::TransitionMatrix m;
};

struct bsp_stream {
  std::uint64_t master_seed = 0;
  std::vector<bsp::AttributeSpec> specs;
  std::optional<bsp::MultiStream> engine;  // built on the first ingest
};

namespace {

static_assert(static_cast<int>(bsp::Status::Ok) == BSP_OK);
static_assert(static_cast<int>(bsp::Status::NotBistochastic) ==
              BSP_NOT_BISTOCHASTIC);
static_assert(static_cast<int>(bsp::Status::DuplicateId) == BSP_DUPLICATE_ID);
static_assert(static_cast<int>(bsp::Status::Unknown) == BSP_UNKNOWN_ERROR);

thread_local std::string g_last_error;

template <typename Fn>
bsp_status wrap(Fn&& fn) {
  try {
    fn();
    return BSP_OK;
  } catch (const bsp::Error& e) {
    g_last_error = e.what();
    return static_cast<bsp_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BSP_UNKNOWN_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return BSP_UNKNOWN_ERROR;
  }
}

void require(bool cond, bsp::Status code, const char* what) {
  if (!cond) bsp::fail(code, what);
}

bsp::Index checked_dim(uint64_t r) {
  require(r >= 1 && r <= std::numeric_limits<bsp::Index>::max(),
          bsp::Status::InvalidDimension, "dimension out of range");
  return static_cast<bsp::Index>(r);
}

bsp::MultiStream& engine_of(bsp_stream* s) {
  require(s != nullptr, bsp::Status::InvalidArgument, "null stream");
  if (!s->engine) s->engine.emplace(s->specs, s->master_seed);
  return *s->engine;
}

void emit_events(const std::vector<bsp::OutputEvent>& events, bsp_event_cb cb,
                 void* user) {
  if (!cb) return;
  for (const auto& e : events) {
    bsp_event ce{};
    ce.kind = e.kind == bsp::EventKind::Release ? BSP_EVENT_RELEASE
                                                : BSP_EVENT_UPDATE;
    ce.t = e.t;
    ce.id = e.id.c_str();
    ce.attr = e.attr.c_str();
    if (const auto* num = std::get_if<double>(&e.value)) {
      ce.value_kind = BSP_VALUE_NUMERIC;
      ce.numeric_value = *num;
      ce.category = nullptr;
    } else {
      ce.value_kind = BSP_VALUE_CATEGORICAL;
      ce.numeric_value = 0.0;
      ce.category = std::get<std::string>(e.value).c_str();
    }
    ce.partner = e.partner ? e.partner->c_str() : nullptr;
    ce.beta = e.beta;
    cb(&ce, user);
  }
}

}  // namespace

extern "C" {

const char* bsp_status_name(bsp_status s) {
  return bsp::status_name(static_cast<bsp::Status>(s));
}

const char* bsp_last_error_message(void) { return g_last_error.c_str(); }

/* ---------------- rng ---------------- */

bsp_status bsp_rng_new(uint64_t seed, bsp_rng** out) {
  return wrap([&] {
    require(out, bsp::Status::InvalidArgument, "null out pointer");
    *out = new bsp_rng{bsp::Rng(seed)};
  });
}

bsp_status bsp_rng_derive(uint64_t master, const char* label, bsp_rng** out) {
  return wrap([&] {
    require(out && label, bsp::Status::InvalidArgument, "null argument");
    *out = new bsp_rng{bsp::derive(master, label)};
  });
}

bsp_status bsp_derive_seed(uint64_t master, const char* label, uint64_t* out) {
  return wrap([&] {
    require(out && label, bsp::Status::InvalidArgument, "null argument");
    *out = bsp::derive_seed(master, label);
  });
}

void bsp_rng_free(bsp_rng* rng) { delete rng; }

double bsp_rng_unit(bsp_rng* rng) { return rng->rng.next_unit(); }

double bsp_rng_lambda(bsp_rng* rng) { return rng->rng.next_lambda(); }

bsp_status bsp_rng_index(bsp_rng* rng, uint64_t n, uint64_t* out) {
  return wrap([&] {
    require(rng && out, bsp::Status::InvalidArgument, "null argument");
    *out = rng->rng.next_index(n);
  });
}

/* ---------------- matrix ---------------- */

bsp_status bsp_matrix_identity(uint64_t r, bsp_matrix** out) {
  return wrap([&] {
    require(out, bsp::Status::InvalidArgument, "null out pointer");
    *out = new bsp_matrix{bsp::TransitionMatrix::identity(checked_dim(r))};
  });
}

bsp_status bsp_matrix_perfect(uint64_t r, bsp_matrix** out) {
  return wrap([&] {
    require(out, bsp::Status::InvalidArgument, "null out pointer");
    *out = new bsp_matrix{bsp::TransitionMatrix::perfect(checked_dim(r))};
  });
}

bsp_status bsp_matrix_from_dense(const double* data, uint64_t r, double tol,
                                 bsp_matrix** out) {
  return wrap([&] {
    require(data && out, bsp::Status::InvalidArgument, "null argument");
    const bsp::Index dim = checked_dim(r);
    std::vector<double> entries(data, data + static_cast<std::size_t>(r) * r);
    *out = new bsp_matrix{bsp::TransitionMatrix::from_dense(entries, dim, tol)};
  });
}

bsp_status bsp_matrix_read_text(const char* path, bsp_matrix** out) {
  return wrap([&] {
    require(path && out, bsp::Status::InvalidArgument, "null argument");
    std::ifstream in(path);
    if (!in) bsp::fail(bsp::Status::IoError, std::string("cannot open ") + path);
    *out = new bsp_matrix{bsp::read_dense_text(in)};
  });
}

bsp_status bsp_matrix_write_text(const bsp_matrix* m, const char* path) {
  return wrap([&] {
    require(m && path, bsp::Status::InvalidArgument, "null argument");
    std::ofstream outf(path);
    if (!outf)
      bsp::fail(bsp::Status::IoError, std::string("cannot write ") + path);
    bsp::write_dense_text(outf, m->m);
  });
}

bsp_status bsp_matrix_generate(uint64_t r, double target_beta, uint64_t seed,
                               bsp_matrix** out, double* achieved_beta) {
  return wrap([&] {
    require(out, bsp::Status::InvalidArgument, "null out pointer");
    bsp::Rng rng(seed);
    auto gen = bsp::generate_to_beta(checked_dim(r), target_beta, rng);
    if (achieved_beta) *achieved_beta = gen.achieved_beta;
    *out = new bsp_matrix{std::move(gen.matrix)};
  });
}

bsp_status bsp_matrix_clone(const bsp_matrix* m, bsp_matrix** out) {
  return wrap([&] {
    require(m && out, bsp::Status::InvalidArgument, "null argument");
    *out = new bsp_matrix{m->m};
  });
}

void bsp_matrix_free(bsp_matrix* m) { delete m; }

uint64_t bsp_matrix_dim(const bsp_matrix* m) { return m ? m->m.dim() : 0; }

uint64_t bsp_matrix_nnz(const bsp_matrix* m) { return m ? m->m.nnz() : 0; }

bsp_status bsp_matrix_entropy(const bsp_matrix* m, double* h, double* h_max,
                              double* beta) {
  return wrap([&] {
    require(m, bsp::Status::InvalidArgument, "null matrix");
    const auto rep = m->m.entropy();
    if (h) *h = rep.h;
    if (h_max) *h_max = rep.h_max;
    if (beta) *beta = rep.beta;
  });
}

bsp_status bsp_matrix_to_dense(const bsp_matrix* m, double* out) {
  return wrap([&] {
    require(m && out, bsp::Status::InvalidArgument, "null argument");
    const auto dense = m->m.to_dense();
    std::copy(dense.begin(), dense.end(), out);
  });
}

bsp_status bsp_matrix_augment(bsp_matrix* m) {
  return wrap([&] {
    require(m, bsp::Status::InvalidArgument, "null matrix");
    m->m.augment();
  });
}

bsp_status bsp_matrix_apply_t(bsp_matrix* m, uint64_t j, uint64_t k,
                              double lam) {
  return wrap([&] {
    require(m, bsp::Status::InvalidArgument, "null matrix");
    require(j < m->m.dim() && k < m->m.dim(), bsp::Status::IndexError,
            "transform index out of range");
    m->m.apply_t({static_cast<bsp::Index>(j), static_cast<bsp::Index>(k), lam});
  });
}

bsp_status bsp_matrix_apply_numeric(const bsp_matrix* m, const double* x,
                                    uint64_t n, double* y) {
  return wrap([&] {
    require(m && x && y, bsp::Status::InvalidArgument, "null argument");
    std::vector<double> in(x, x + n);
    const auto out = m->m.apply_to_numeric(in);
    std::copy(out.begin(), out.end(), y);
  });
}

bsp_status bsp_matrix_sample(const bsp_matrix* m, uint64_t u, bsp_rng* rng,
                             uint64_t* v) {
  return wrap([&] {
    require(m && rng && v, bsp::Status::InvalidArgument, "null argument");
    require(u < m->m.dim(), bsp::Status::IndexError, "row index out of range");
    *v = m->m.sample_category(static_cast<bsp::Index>(u), rng->rng);
  });
}

bsp_status bsp_matrix_validate(const bsp_matrix* m, double tol) {
  return wrap([&] {
    require(m, bsp::Status::InvalidArgument, "null matrix");
    m->m.validate(tol);
  });
}

/* ---------------- stream ---------------- */

bsp_status bsp_stream_new(uint64_t master_seed, bsp_stream** out) {
  return wrap([&] {
    require(out, bsp::Status::InvalidArgument, "null out pointer");
    auto* s = new bsp_stream;
    s->master_seed = master_seed;
    *out = s;
  });
}

void bsp_stream_free(bsp_stream* s) { delete s; }

bsp_status bsp_stream_add_numeric(bsp_stream* s, const char* name,
                                  const bsp_policy* policy,
                                  const bsp_matrix* seed_matrix) {
  return wrap([&] {
    require(s && name && policy && seed_matrix, bsp::Status::InvalidArgument,
            "null argument");
    require(!s->engine, bsp::Status::InvalidArgument,
            "attributes must be declared before the first ingest");
    bsp::Policy p;
    p.lambda_mode = policy->lambda_mode == BSP_LAMBDA_FIXED
                        ? bsp::LambdaMode::Fixed
                        : bsp::LambdaMode::RandomUniform;
    p.lambda_value = policy->lambda_value;
    p.transforms_mode = policy->transforms_mode == BSP_TRANSFORMS_RANGE
                            ? bsp::TransformsMode::RandomRange
                            : bsp::TransformsMode::Fixed;
    p.transforms_lo = policy->transforms_lo;
    p.transforms_hi = policy->transforms_mode == BSP_TRANSFORMS_RANGE
                          ? policy->transforms_hi
                          : policy->transforms_lo;
    p.validate();
    s->specs.push_back(
        bsp::AttributeSpec{name, bsp::NumericAttribute{p, seed_matrix->m}});
  });
}

bsp_status bsp_stream_add_categorical(bsp_stream* s, const char* name,
                                      const char* const* labels,
                                      uint64_t n_labels, const bsp_matrix* m,
                                      bsp_unknown_mode unknown_mode,
                                      double expand_lambda,
                                      const char* expand_target) {
  return wrap([&] {
    require(s && name && labels && m, bsp::Status::InvalidArgument,
            "null argument");
    require(!s->engine, bsp::Status::InvalidArgument,
            "attributes must be declared before the first ingest");
    bsp::CategoricalAttribute cat{{}, m->m, {}};
    cat.labels.assign(labels, labels + n_labels);
    cat.cfg.unknown = unknown_mode == BSP_UNKNOWN_EXPAND
                          ? bsp::UnknownCategoryMode::Expand
                          : bsp::UnknownCategoryMode::Reject;
    cat.cfg.expand_lambda = expand_lambda;
    if (expand_target) cat.cfg.expand_target = expand_target;
    s->specs.push_back(bsp::AttributeSpec{name, std::move(cat)});
  });
}

bsp_status bsp_stream_ingest(bsp_stream* s, const char* id,
                             const bsp_value* values, uint64_t n_values,
                             bsp_event_cb cb, void* user) {
  return wrap([&] {
    require(s && id && values, bsp::Status::InvalidArgument, "null argument");
    std::vector<bsp::Value> vals;
    vals.reserve(n_values);
    for (uint64_t i = 0; i < n_values; ++i) {
      if (values[i].kind == BSP_VALUE_NUMERIC) {
        vals.emplace_back(values[i].num);
      } else {
        require(values[i].cat, bsp::Status::InvalidArgument,
                "null categorical value");
        vals.emplace_back(std::string(values[i].cat));
      }
    }
    const auto events = engine_of(s).ingest(id, vals);
    emit_events(events, cb, user);
  });
}

double bsp_stream_beta(const bsp_stream* s) {
  if (!s) return 0.0;
  try {
    if (s->engine) return s->engine->beta();
    // Not started: aggregate over the declared matrices.
    bsp::MultiStream probe(s->specs, s->master_seed);
    return probe.beta();
  } catch (...) {
    return 0.0;
  }
}

uint64_t bsp_stream_arrivals(const bsp_stream* s) {
  return (s && s->engine) ? s->engine->arrivals() : 0;
}

bsp_status bsp_stream_attr_report(const bsp_stream* s, const char* name,
                                  double* h, double* h_max, double* beta) {
  return wrap([&] {
    require(s && name, bsp::Status::InvalidArgument, "null argument");
    bsp::EntropyReport rep;
    if (s->engine) {
      rep = s->engine->attribute_entropy(name);
    } else {
      bsp::MultiStream probe(s->specs, s->master_seed);
      rep = probe.attribute_entropy(name);
    }
    if (h) *h = rep.h;
    if (h_max) *h_max = rep.h_max;
    if (beta) *beta = rep.beta;
  });
}

bsp_status bsp_stream_attr_matrix(const bsp_stream* s, const char* name,
                                  bsp_matrix** out) {
  return wrap([&] {
    require(s && name && out, bsp::Status::InvalidArgument, "null argument");
    if (s->engine) {
      *out = new bsp_matrix{s->engine->attribute_matrix(name)};
    } else {
      bsp::MultiStream probe(s->specs, s->master_seed);
      *out = new bsp_matrix{probe.attribute_matrix(name)};
    }
  });
}

}  // extern "C"
