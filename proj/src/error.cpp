#include "lelab/error.hpp"

namespace lelab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "invalid-params";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::UndefinedSingular: return "undefined-singular";
    case ErrorCode::NoRealRoot: return "no-real-root";
    case ErrorCode::InvalidMoserExponent: return "invalid-a";
    case ErrorCode::BadBracket: return "bad-bracket";
    case ErrorCode::InsufficientWindow: return "insufficient-window";
    case ErrorCode::WindowNotCovered: return "window-not-covered";
    case ErrorCode::DerivativesMissing: return "derivatives-missing";
    case ErrorCode::InsufficientDecayWindow: return "insufficient-decay-window";
    case ErrorCode::EmptyTrace: return "empty-trace";
    case ErrorCode::OutputExists: return "output-exists";
  }
  return "unknown";
}

}  // namespace lelab
