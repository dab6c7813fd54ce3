#pragma once

#include <string>
#include <utility>
#include <variant>

namespace tbdd {

enum class Errc {
  shard_too_small,
  index_out_of_range,
  dimension_mismatch,
  non_finite_trust,
  never_led,
  shard_too_small_for_indirect,
  zero_row,
  constraint_violation,
  division_by_zero,
  insufficient_rows,
  too_large,
  config_invalid,
  io_error,
  strategy_failed,
};

// One error currency for the whole library. `a`/`b` carry the payload the
// operation documents (e.g. shard index and size for shard_too_small).
struct Error {
  Errc code;
  std::string message;
  long a = -1;
  long b = -1;
};

inline Error make_error(Errc code, std::string msg, long a = -1, long b = -1) {
  return Error{code, std::move(msg), a, b};
}

template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}          // NOLINT(google-explicit-constructor)
  Result(Error err) : v_(std::move(err)) {}          // NOLINT(google-explicit-constructor)

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& { return std::get<T>(v_); }
  T& value() & { return std::get<T>(v_); }
  T&& value() && { return std::get<T>(std::move(v_)); }

  const Error& error() const { return std::get<Error>(v_); }

 private:
  std::variant<T, Error> v_;
};

}  // namespace tbdd
