#include "ngrank/error.hpp"

#include "ngrank/types.hpp"

namespace ngrank {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kFormat: return "FormatError";
    case ErrorKind::kDimension: return "DimensionError";
    case ErrorKind::kZeroVector: return "ZeroVectorError";
    case ErrorKind::kEmptySet: return "EmptySetError";
    case ErrorKind::kUnknownItem: return "UnknownItemError";
    case ErrorKind::kQueryMismatch: return "QueryMismatchError";
    case ErrorKind::kEmptyChannelList: return "EmptyChannelListError";
    case ErrorKind::kDegenerate: return "DegenerateError";
    case ErrorKind::kClassSize: return "ClassSizeError";
    case ErrorKind::kSize: return "SizeError";
    case ErrorKind::kInvalidInput: return "InvalidInputError";
  }
  return "Error";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kKnn: return "knn";
    case Provenance::kStng: return "stng";
    case Provenance::kTtng: return "ttng";
    case Provenance::kMfr: return "mfr";
  }
  return "?";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "knn") return Provenance::kKnn;
  if (s == "stng") return Provenance::kStng;
  if (s == "ttng") return Provenance::kTtng;
  if (s == "mfr") return Provenance::kMfr;
  throw FormatError("unknown tier tag '" + std::string(s) + "'");
}

}  // namespace ngrank
