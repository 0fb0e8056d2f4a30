#pragma once

#include <stdexcept>
#include <string>

namespace celtic {

// Failure taxonomy shared by the whole library. Codes are stable: the C API
// and the CLI exit-status mapping both rely on them.
enum class ErrorCode {
    ConfigInvalid = 1,
    DegenerateContact,
    SingularChart,
    ZeroMomentum,
    EnergyBelowPotential,
    NoCrossingFound,
    StepCountExceeded,
    OrbitEscaped,
    NoConvergence,
    SingularNewtonMatrix,
    NotASaddle,
    NoReturn,
    IoError,
    Internal,
};

const char* error_code_name(ErrorCode code);

class CelticError : public std::runtime_error {
  public:
    CelticError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw CelticError(code, what);
}

}  // namespace celtic
