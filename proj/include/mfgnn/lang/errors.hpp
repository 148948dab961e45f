#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfgnn::lang {

/// Base class for every diagnostic raised while reading MiniLang source.
class FrontendError : public std::runtime_error {
 public:
  FrontendError(std::string message, int line, int column)
      : std::runtime_error(std::move(message)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class LexError : public FrontendError {
  using FrontendError::FrontendError;
};

class ParseError : public FrontendError {
  using FrontendError::FrontendError;
};

class ResolveError : public FrontendError {
  using FrontendError::FrontendError;
};

/// `file:line:col: severity: message`
std::string format_diagnostic(std::string_view file, int line, int column,
                              std::string_view severity,
                              std::string_view message);

inline std::string format_diagnostic(std::string_view file,
                                     const FrontendError& err) {
  return format_diagnostic(file, err.line(), err.column(), "error", err.what());
}

}  // namespace mfgnn::lang
