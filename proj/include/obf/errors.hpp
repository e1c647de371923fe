#pragma once

#include <stdexcept>
#include <string>

namespace obf {

// Coded failure conditions shared across modules. Every recoverable error
// raised by the library carries one of these codes.
enum class Errc {
  MalformedHeader,
  OutOfBounds,
  LayoutConflict,
  ActionInapplicable,
  PackerFailed,
  AlreadyPacked,
  NotAStub,
  NotPacked,
  DegenerateCorpus,
  ScanFailed,
  BudgetExhausted,
  SampleNotDetected,
  EpisodeFinished,
  EpisodeActive,
  BufferTooSmall,
  BadMagic,
  VersionMismatch,
  InvalidCounts,
  NoAttackableSamples,
  IoFailure,
  UnknownAction,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace obf
