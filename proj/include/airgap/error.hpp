// Copyright The airgap authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef AIRGAP_ERROR_HPP
#define AIRGAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace airgap
{

// Error categories; the C API maps each onto an ag_status code.
enum class ErrorCode
{
  InvalidArgument = 1,
  InvalidGeometry,
  InvalidSpec,
  Parse,
  Validation,
  Configuration,
  UnsupportedGrid,
  Domain,
  Solver,
  Io,
  Verification,
  Internal
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void Throw(ErrorCode code, const std::string &what)
{
  throw Error(code, what);
}

}  // namespace airgap

#endif  // AIRGAP_ERROR_HPP
