#pragma once

#include <stdexcept>
#include <string>

namespace latlab {

// Failure taxonomy used across the library. Everything is fatal for the run
// that raised it; callers that want to continue catch the specific type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };      // bad knob / preset
struct StructuralError : Error { using Error::Error; };  // invalid taxonomy input
struct DataError : Error { using Error::Error; };        // corrupt or mismatched records
struct DependencyError : Error { using Error::Error; };  // stage ordering violated
struct ProtocolError : Error { using Error::Error; };    // forbidden operation (e.g. augmenting OOD)
struct TrainingError : Error { using Error::Error; };    // divergence / empty split / bad batch
struct TransportError : Error { using Error::Error; };   // external teacher I/O

}  // namespace latlab
