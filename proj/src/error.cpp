#include <msotree/error.hpp>

namespace msotree
{

  std::string_view to_string(ErrorKind kind) noexcept
  {
    switch (kind)
      {
      case ErrorKind::NotOrdinal: return "NotOrdinal";
      case ErrorKind::NotPair: return "NotPair";
      case ErrorKind::NotInDomain: return "NotInDomain";
      case ErrorKind::NotFunctional: return "NotFunctional";
      case ErrorKind::TooLarge: return "TooLarge";
      case ErrorKind::MalformedSet: return "MalformedSet";
      case ErrorKind::SyntaxError: return "SyntaxError";
      case ErrorKind::UnknownDirection: return "UnknownDirection";
      case ErrorKind::UnboundVariable: return "UnboundVariable";
      case ErrorKind::NotRelational: return "NotRelational";
      case ErrorKind::NotHfClosed: return "NotHfClosed";
      case ErrorKind::FreeFunctionVariable: return "FreeFunctionVariable";
      case ErrorKind::Unbounded: return "Unbounded";
      case ErrorKind::NotAFunction: return "NotAFunction";
      case ErrorKind::EmptyAlphabet: return "EmptyAlphabet";
      case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
      case ErrorKind::ArityMismatch: return "ArityMismatch";
      case ErrorKind::AlphabetNotProduct: return "AlphabetNotProduct";
      case ErrorKind::InvalidAutomaton: return "InvalidAutomaton";
      case ErrorKind::UnknownLetter: return "UnknownLetter";
      case ErrorKind::AlphabetNotSingleton: return "AlphabetNotSingleton";
      case ErrorKind::IncompleteStrategy: return "IncompleteStrategy";
      case ErrorKind::IllegalMove: return "IllegalMove";
      case ErrorKind::UnknownVertex: return "UnknownVertex";
      case ErrorKind::Format: return "Format";
      }
    return "Unknown";
  }

  Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind), detail_(message)
  {
  }

  Error Error::with_stage(std::string_view stage) const
  {
    std::string path(stage);
    if (!stage_.empty())
      path += "/" + stage_;
    Error e(kind_, "[" + path + "] " + detail_);
    e.stage_ = std::move(path);
    e.detail_ = detail_;
    return e;
  }

  void fail(ErrorKind kind, const std::string& message)
  {
    throw Error(kind, message);
  }

}
