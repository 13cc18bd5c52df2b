#ifndef BSP_ERROR_HPP
#define BSP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bsp {

// Mirrors the bsp_status codes of the C API (see bsp.h).
enum class Status : int {
  Ok = 0,
  InvalidDimension = 1,
  ShapeError = 2,
  NotBistochastic = 3,
  InvalidTransform = 4,
  IndexError = 5,
  InvalidLambda = 6,
  DuplicateId = 7,
  InvalidValue = 8,
  InsufficientSeed = 9,
  UnknownCategory = 10,
  AlreadyKnown = 11,
  EmptyInput = 12,
  SchemaError = 13,
  ParseError = 14,
  InvalidTarget = 15,
  InvalidRange = 16,
  AuditInputError = 17,
  InvalidArgument = 18,
  IoError = 19,
  Unknown = 20,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Status code() const { return code_; }

 private:
  Status code_;
};

[[noreturn]] inline void fail(Status code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace bsp

#endif
