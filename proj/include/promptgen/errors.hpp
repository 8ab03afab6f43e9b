#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace promptgen {

// Error classes map 1:1 onto CLI exit codes.
enum class ErrorClass { input = 2, backend = 3, eval = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }
    int exit_code() const noexcept { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorClass::input, what) {}
};

class BackendError : public Error {
public:
    explicit BackendError(const std::string& what) : Error(ErrorClass::backend, what) {}
};

class EvalError : public Error {
public:
    explicit EvalError(const std::string& what) : Error(ErrorClass::eval, what) {}
};

struct MalformedFileError : InputError {
    using InputError::InputError;
};
struct PoolTooSmallError : InputError {
    using InputError::InputError;
};
struct DuplicateIdError : InputError {
    using InputError::InputError;
};
struct MissingGoldError : InputError {
    using InputError::InputError;
};
struct DuplicateColumnError : InputError {
    using InputError::InputError;
};
struct EmptySampleError : InputError {
    using InputError::InputError;
};
struct EmptyCompletionError : InputError {
    using InputError::InputError;
};
struct TooFewCandidatesError : InputError {
    using InputError::InputError;
};

struct BackendUnavailableError : BackendError {
    using BackendError::BackendError;
};
struct TimeoutError : BackendError {
    using BackendError::BackendError;
};
struct AuthError : BackendError {
    using BackendError::BackendError;
};

// A generation request that delivered only part of the batch. Successful
// completions form a prefix of the requested indices; one cause per missing
// completion.
class PartialBatchError : public BackendError {
public:
    PartialBatchError(const std::string& what, std::vector<std::string> completions,
                      std::vector<std::string> causes)
        : BackendError(what), completions_(std::move(completions)), causes_(std::move(causes)) {}

    const std::vector<std::string>& completions() const noexcept { return completions_; }
    const std::vector<std::string>& causes() const noexcept { return causes_; }

private:
    std::vector<std::string> completions_;
    std::vector<std::string> causes_;
};

struct NoGoldError : EvalError {
    using EvalError::EvalError;
};
struct UnparseableError : EvalError {
    using EvalError::EvalError;
};

} // namespace promptgen
