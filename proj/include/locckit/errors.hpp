#pragma once

#include <stdexcept>
#include <string>

namespace locckit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct NotNormalized : Error {
  using Error::Error;
};
struct NotRankOne : Error {
  using Error::Error;
};
struct RankOneRequired : Error {
  using Error::Error;
};
struct NotDistinguishable : Error {
  using Error::Error;
};
struct NotCommuting : Error {
  using Error::Error;
};
struct NotNormal : Error {
  using Error::Error;
};
struct NotClosed : Error {
  using Error::Error;
};
struct NonIntegerStructure : Error {
  using Error::Error;
};
struct NotSquareBlocks : Error {
  using Error::Error;
};
struct StrictSubspaceRequired : Error {
  using Error::Error;
};
struct CommutationFailure : Error {
  using Error::Error;
};
struct QubitCountMismatch : Error {
  using Error::Error;
};
struct InvalidParams : Error {
  using Error::Error;
};
struct InconsistentVerdict : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace locckit
