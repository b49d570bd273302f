#pragma once

#include <stdexcept>
#include <string>

namespace sfo {

enum class ErrorCode {
  format_header,   // missing or malformed SFONLINE header / section marker
  format_number,   // non-integer or out-of-range distance token
  format_demand,   // bad demand line: wrong ids, terminal in two pairs
  metric,          // distance matrix violates the metric assumptions
  config,          // bad user configuration (n = 0, lambda < 1, ...)
  oracle_limit,    // exact oracle asked for more pairs than allowed
  invariant,       // internal algorithm invariant broken
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(ErrorCode::invariant, ...) when cond is false.
inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::invariant, what);
}

}  // namespace sfo
