#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

enum class ErrorCode {
  Domain,           // argument outside the admissible range
  Pole,             // Gamma-type function evaluated at a pole
  Divergence,       // series exceeded its term cap
  ToleranceNotMet,  // quadrature refinement cap reached
  Mismatch,         // inconsistent inputs (grid vs table, vector sizes)
  SizeCap,          // dense fallback requested above its size limit
  IterationCap,     // Krylov solver hit max_iter
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fraclap
