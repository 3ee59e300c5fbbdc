#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace steinchi {

enum class Errc {
  EmptySpec,
  InvalidWeight,
  InvalidDof,
  InvalidSpec,
  BadIndex,
  BadOrder,
  BadCount,
  ModeUnsupported,
  NotIntegrable,
  ParseError,
  // The remaining codes signal implementation bugs, never user errors.
  InternalInconsistency,
  TheoremViolation,
  LemmaViolation,
};

std::string_view errc_name(Errc code) noexcept;

/// True for codes that indicate a failed identity rather than bad input.
constexpr bool is_identity_failure(Errc code) noexcept {
  return code == Errc::InternalInconsistency || code == Errc::TheoremViolation ||
         code == Errc::LemmaViolation;
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(message), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  /// Zero-based position of the offending weight/entry, when there is one.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<std::size_t> index_;
};

}  // namespace steinchi
