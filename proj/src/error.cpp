#include "stratwave/error.hpp"

namespace stratwave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::WindowContaminated: return "WindowContaminated";
    case ErrorCode::InsufficientDecades: return "InsufficientDecades";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoContraction: return "NoContraction";
    case ErrorCode::ExcludedParameters: return "ExcludedParameters";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace stratwave
