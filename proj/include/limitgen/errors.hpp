#ifndef LIMITGEN_ERRORS_HPP
#define LIMITGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace limitgen {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A request ran past the configured probe horizon without a verdict.
struct ProbeExhausted : Error {
  explicit ProbeExhausted(const std::string& what) : Error(what) {}
};

/// Indexing past the end of a finite set.
struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what) : Error(what) {}
};

/// Product refinement would exceed the configured cell budget, or the
/// operands' systems cannot be reconciled.
struct IncompatibleCellSystems : Error {
  explicit IncompatibleCellSystems(const std::string& what) : Error(what) {}
};

/// An element lies in no language of the collection.
struct EmptySignature : Error {
  explicit EmptySignature(const std::string& what) : Error(what) {}
};

/// A finiteness verdict needed by a generator came back Unknown.
struct VerdictUnknown : Error {
  explicit VerdictUnknown(const std::string& what) : Error(what) {}
};

/// A window generator received an element already retained in its window.
struct DuplicateInWindow : Error {
  explicit DuplicateInWindow(const std::string& what) : Error(what) {}
};

/// The element-generator adversary could not certify any proof case within
/// its probe budget.
struct CaseUndetermined : Error {
  explicit CaseUndetermined(const std::string& what) : Error(what) {}
};

/// Input size outside the supported exhaustive regime.
struct SizeLimit : Error {
  explicit SizeLimit(const std::string& what) : Error(what) {}
};

/// A coding-generator state was not a valid codeword.
struct DecodeFailure : Error {
  explicit DecodeFailure(const std::string& what) : Error(what) {}
};

/// Experiment configuration failed schema validation.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace limitgen

#endif
