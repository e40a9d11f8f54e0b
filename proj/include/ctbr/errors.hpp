#pragma once

#include <stdexcept>
#include <string>

namespace ctbr {

// Process exit codes shared by every CLI subcommand.
enum class ExitCode : int {
  kOk = 0,
  kInput = 2,
  kModel = 3,
  kInternal = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const { return ExitCode::kInternal; }
};

// Anything wrong with user-supplied documents, labels, configs or corpora.
class InputError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kInput; }
};

// Missing, unreadable or incompatible model files.
class ModelError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kModel; }
};

class SchemaError : public InputError {
 public:
  SchemaError(std::string path, const std::string& what)
      : InputError(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

class DuplicateIdError : public InputError {
 public:
  using InputError::InputError;
};

class UnknownBlockError : public InputError {
 public:
  explicit UnknownBlockError(std::string block_id)
      : InputError("label references unknown block '" + block_id + "'"),
        block_id_(std::move(block_id)) {}
  const std::string& block_id() const { return block_id_; }

 private:
  std::string block_id_;
};

class DocMismatchError : public InputError {
 public:
  DocMismatchError(const std::string& expected, const std::string& actual)
      : InputError("doc_id mismatch: document '" + expected +
                   "' vs labels '" + actual + "'") {}
};

class IdMismatchError : public InputError {
 public:
  using InputError::InputError;
};

class EmptyDocumentError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateBlockError : public InputError {
 public:
  using InputError::InputError;
};

class NoBodyError : public InputError {
 public:
  using InputError::InputError;
};

class InsufficientClassesError : public InputError {
 public:
  using InputError::InputError;
};

class PageNotFoundError : public InputError {
 public:
  using InputError::InputError;
};

class VersionError : public ModelError {
 public:
  explicit VersionError(long long version)
      : ModelError("unsupported model version " + std::to_string(version)),
        version_(version) {}
  long long version() const { return version_; }

 private:
  long long version_;
};

class CorruptModelError : public ModelError {
 public:
  using ModelError::ModelError;
};

class NoSupplementaryError : public Error {
 public:
  using Error::Error;
};

class UnassignedBlockError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctbr
