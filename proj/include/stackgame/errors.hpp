#pragma once

#include <stdexcept>
#include <string>

namespace stackgame {

// Stable error identifiers; the CLI maps them one-to-one onto process exit
// codes (see README). Values below 10 are reserved for success / usage errors.
enum class ErrorCode : int {
  ParseError = 10,
  UnknownField = 11,
  ValidationError = 12,
  Io = 13,
  DimensionMismatch = 20,
  NotSymmetric = 21,
  NotPositiveDefinite = 22,
  DiscountOutOfRange = 23,
  SingularMatrix = 30,
  MaxIterationsExceeded = 31,
  UnstableClosedLoop = 32,
  IncentiveInfeasible = 33,
  NotConverged = 34,
  RankDeficient = 40,
  TooFewSamples = 41,
  EmptyGrid = 42,
  LengthMismatch = 43,
  TailRequiresLinearPolicy = 44,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const noexcept { return code_; }
  virtual int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorCode::ParseError, m) {}
};
struct UnknownField : Error {
  explicit UnknownField(const std::string& m) : Error(ErrorCode::UnknownField, m) {}
};
struct Io : Error {
  explicit Io(const std::string& m) : Error(ErrorCode::Io, m) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error(ErrorCode::DimensionMismatch, m) {}
};
struct NotSymmetric : Error {
  explicit NotSymmetric(const std::string& m) : Error(ErrorCode::NotSymmetric, m) {}
};
struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& m) : Error(ErrorCode::NotPositiveDefinite, m) {}
};
struct DiscountOutOfRange : Error {
  explicit DiscountOutOfRange(const std::string& m) : Error(ErrorCode::DiscountOutOfRange, m) {}
};
struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& m) : Error(ErrorCode::SingularMatrix, m) {}
};
struct MaxIterationsExceeded : Error {
  explicit MaxIterationsExceeded(const std::string& m) : Error(ErrorCode::MaxIterationsExceeded, m) {}
};
struct UnstableClosedLoop : Error {
  explicit UnstableClosedLoop(const std::string& m) : Error(ErrorCode::UnstableClosedLoop, m) {}
};
struct IncentiveInfeasible : Error {
  explicit IncentiveInfeasible(const std::string& m) : Error(ErrorCode::IncentiveInfeasible, m) {}
};
struct NotConverged : Error {
  explicit NotConverged(const std::string& m) : Error(ErrorCode::NotConverged, m) {}
};
struct RankDeficient : Error {
  explicit RankDeficient(const std::string& m) : Error(ErrorCode::RankDeficient, m) {}
};
struct TooFewSamples : Error {
  explicit TooFewSamples(const std::string& m) : Error(ErrorCode::TooFewSamples, m) {}
};
struct EmptyGrid : Error {
  explicit EmptyGrid(const std::string& m) : Error(ErrorCode::EmptyGrid, m) {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& m) : Error(ErrorCode::LengthMismatch, m) {}
};
struct TailRequiresLinearPolicy : Error {
  explicit TailRequiresLinearPolicy(const std::string& m) : Error(ErrorCode::TailRequiresLinearPolicy, m) {}
};

// Raised by the config loader when a well-formed file fails semantic checks.
// Carries the underlying error class (e.g. DiscountOutOfRange) so the exit
// code stays specific even through the wrapping.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m)
      : Error(ErrorCode::ValidationError, m), inner_(ErrorCode::ValidationError) {}
  ValidationError(ErrorCode inner, const std::string& m)
      : Error(ErrorCode::ValidationError, m), inner_(inner) {}
  ErrorCode inner_code() const noexcept { return inner_; }
  int exit_code() const noexcept override { return static_cast<int>(inner_); }

 private:
  ErrorCode inner_;
};

}  // namespace stackgame
