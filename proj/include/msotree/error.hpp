#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msotree
{

  /// Failure categories shared by every module.  Each thrown Error carries
  /// exactly one of these so callers (and the CLI exit-code mapping) can
  /// dispatch without parsing messages.
  enum class ErrorKind
  {
    // hf-core
    NotOrdinal,
    NotPair,
    NotInDomain,
    NotFunctional,
    TooLarge,
    MalformedSet,
    // logic-syntax
    SyntaxError,
    UnknownDirection,
    UnboundVariable,
    NotRelational,
    NotHfClosed,
    FreeFunctionVariable,
    Unbounded,
    // tree-automata
    NotAFunction,
    EmptyAlphabet,
    AlphabetMismatch,
    ArityMismatch,
    AlphabetNotProduct,
    InvalidAutomaton,
    // omega / games
    UnknownLetter,
    AlphabetNotSingleton,
    IncompleteStrategy,
    IllegalMove,
    UnknownVertex,
    // serialization
    Format,
  };

  std::string_view to_string(ErrorKind kind) noexcept;

  class Error : public std::runtime_error
  {
  public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

    /// Pipeline stage that raised the error ("compile/complement", ...);
    /// empty when raised outside the pipeline.
    const std::string& stage() const noexcept { return stage_; }

    /// Returns a copy of this error with \a stage prepended to the stage path.
    Error with_stage(std::string_view stage) const;

  private:
    ErrorKind kind_;
    std::string stage_;
    std::string detail_;
  };

  [[noreturn]] void fail(ErrorKind kind, const std::string& message);

}
