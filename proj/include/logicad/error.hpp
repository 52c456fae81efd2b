#pragma once

#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace logicad {

// Root of every error the library raises. `code()` is a stable identifier
// used by the CLI and in report error rows.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, std::string message, std::set<std::string> expected = {})
      : Error("SyntaxError", format(pos, message, expected)),
        pos_(pos),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  SourcePos pos() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(SourcePos pos, const std::string& message, const std::set<std::string>& expected) {
    std::ostringstream os;
    os << pos.line << ":" << pos.column << ": " << message;
    if (!expected.empty()) {
      os << " (expected one of:";
      for (const auto& e : expected) os << " " << e;
      os << ")";
    }
    return os.str();
  }

  SourcePos pos_;
  std::string message_;
  std::set<std::string> expected_;
};

class UnboundVariable : public Error {
 public:
  UnboundVariable(SourcePos pos, const std::string& var)
      : Error("UnboundVariable", std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                                     ": variable " + var + " is not bound by any quantifier"),
        pos_(pos) {}
  SourcePos pos() const noexcept { return pos_; }

 private:
  SourcePos pos_;
};

#define LOGICAD_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& what) : Error(#Name, what) {}      \
  };

LOGICAD_DEFINE_ERROR(InvalidName)
LOGICAD_DEFINE_ERROR(EmptyUniverse)
LOGICAD_DEFINE_ERROR(ResourceLimit)
LOGICAD_DEFINE_ERROR(ArityError)
LOGICAD_DEFINE_ERROR(IrrelInObjectPosition)
LOGICAD_DEFINE_ERROR(IrrelInFacts)
LOGICAD_DEFINE_ERROR(SpecError)
LOGICAD_DEFINE_ERROR(SpecInconsistent)
LOGICAD_DEFINE_ERROR(NotAnomalous)
LOGICAD_DEFINE_ERROR(DegenerateInput)
LOGICAD_DEFINE_ERROR(ZeroVector)
LOGICAD_DEFINE_ERROR(DegenerateLabels)
LOGICAD_DEFINE_ERROR(SummarizeError)
LOGICAD_DEFINE_ERROR(FormalizeError)
LOGICAD_DEFINE_ERROR(MissingFixture)
LOGICAD_DEFINE_ERROR(ConfigError)
LOGICAD_DEFINE_ERROR(SchemaError)

#undef LOGICAD_DEFINE_ERROR

// Raised by remote services after the retry budget is exhausted. `code()`
// carries the service flavour: VisionServiceError, RoiServiceError,
// EmbeddingServiceError or OracleUnavailable.
class ServiceError : public Error {
 public:
  ServiceError(std::string code, const std::string& what, bool transient = true)
      : Error(std::move(code), what), transient_(transient) {}
  bool transient() const noexcept { return transient_; }

 private:
  bool transient_;
};

}  // namespace logicad
