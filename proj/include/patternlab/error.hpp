#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace patternlab {

enum class Errc {
  EmptyDifference,
  GroundMismatch,
  UnbalancedPattern,
  LayerTooLarge,
  BudgetExhausted,
  IndivisibleBlocks,
  OverlappingSupports,
  MaterializationCap,
  ZeroDenominator,
  ShapeMismatch,
  GridTooLarge,
  IndivisibleGround,
  NotDominating,
  GammaOutOfRange,
  BadSplit,
  NoSplit,
  RegimeViolation,
  LayerMismatch,
  FreenessViolated,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::EmptyDifference: return "EmptyDifference";
    case Errc::GroundMismatch: return "GroundMismatch";
    case Errc::UnbalancedPattern: return "UnbalancedPattern";
    case Errc::LayerTooLarge: return "LayerTooLarge";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::IndivisibleBlocks: return "IndivisibleBlocks";
    case Errc::OverlappingSupports: return "OverlappingSupports";
    case Errc::MaterializationCap: return "MaterializationCap";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::GridTooLarge: return "GridTooLarge";
    case Errc::IndivisibleGround: return "IndivisibleGround";
    case Errc::NotDominating: return "NotDominating";
    case Errc::GammaOutOfRange: return "GammaOutOfRange";
    case Errc::BadSplit: return "BadSplit";
    case Errc::NoSplit: return "NoSplit";
    case Errc::RegimeViolation: return "RegimeViolation";
    case Errc::LayerMismatch: return "LayerMismatch";
    case Errc::FreenessViolated: return "FreenessViolated";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All library failures derive from this; `code()` identifies the failure kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, Errc code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace patternlab
