#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ngrank {

enum class ErrorKind {
  kIo,
  kFormat,
  kDimension,
  kZeroVector,
  kEmptySet,
  kUnknownItem,
  kQueryMismatch,
  kEmptyChannelList,
  kDegenerate,
  kClassSize,
  kSize,
  kInvalidInput,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the library. `kind()` is stable and is what
/// the command line tool prints on its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define NGRANK_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(Kind, message) {}   \
  };

NGRANK_DEFINE_ERROR(IoError, ErrorKind::kIo)
NGRANK_DEFINE_ERROR(FormatError, ErrorKind::kFormat)
NGRANK_DEFINE_ERROR(DimensionError, ErrorKind::kDimension)
NGRANK_DEFINE_ERROR(ZeroVectorError, ErrorKind::kZeroVector)
NGRANK_DEFINE_ERROR(EmptySetError, ErrorKind::kEmptySet)
NGRANK_DEFINE_ERROR(UnknownItemError, ErrorKind::kUnknownItem)
NGRANK_DEFINE_ERROR(QueryMismatchError, ErrorKind::kQueryMismatch)
NGRANK_DEFINE_ERROR(EmptyChannelListError, ErrorKind::kEmptyChannelList)
NGRANK_DEFINE_ERROR(DegenerateError, ErrorKind::kDegenerate)
NGRANK_DEFINE_ERROR(ClassSizeError, ErrorKind::kClassSize)
NGRANK_DEFINE_ERROR(SizeError, ErrorKind::kSize)
NGRANK_DEFINE_ERROR(InvalidInputError, ErrorKind::kInvalidInput)

#undef NGRANK_DEFINE_ERROR

}  // namespace ngrank
