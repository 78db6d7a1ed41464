#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace amseq {

// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorClass {
  usage,       // malformed input, violated precondition of an operation
  capability,  // horizon exceeded, summable input: the request is valid but not computable here
  construction // an inductive construction could not be completed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what, std::optional<std::uint64_t> at = std::nullopt)
      : std::runtime_error(at ? what + " at n = " + std::to_string(*at) : what), cls_(cls), at_(at) {}

  ErrorClass error_class() const noexcept { return cls_; }
  /// Index at which the violation was detected, when there is one.
  std::optional<std::uint64_t> at() const noexcept { return at_; }

 private:
  ErrorClass cls_;
  std::optional<std::uint64_t> at_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& w, std::optional<std::uint64_t> at = std::nullopt)
      : Error(ErrorClass::usage, w, at) {}
};

struct FiniteRankError : Error {
  explicit FiniteRankError(std::uint64_t at)
      : Error(ErrorClass::usage, "finite-rank sequence: zero entry", at) {}
};

struct NotRatioSequence : Error {
  explicit NotRatioSequence(std::uint64_t at) : Error(ErrorClass::usage, "not a ratio sequence", at) {}
};

struct NotConcavitySequence : Error {
  explicit NotConcavitySequence(std::uint64_t at)
      : Error(ErrorClass::usage, "not a concavity sequence", at) {}
};

struct NotAmImage : Error {
  explicit NotAmImage(std::uint64_t at) : Error(ErrorClass::usage, "not an am-image", at) {}
};

struct HorizonExceeded : Error {
  explicit HorizonExceeded(const std::string& w = "horizon exceeded")
      : Error(ErrorClass::capability, w) {}
};

struct SummableError : Error {
  explicit SummableError(const std::string& w = "summable or horizon exceeded")
      : Error(ErrorClass::capability, w) {}
};

struct ConstructionError : Error {
  explicit ConstructionError(const std::string& w) : Error(ErrorClass::construction, w) {}
};

struct UnreachableBound : Error {
  UnreachableBound() : Error(ErrorClass::construction, "unreachable bound") {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorClass::usage, w) {}
};

}  // namespace amseq
