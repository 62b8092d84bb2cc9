#include "tailrisk/error.hpp"

namespace tailrisk {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::RankDeficient: return "rank_deficient";
    case ErrorKind::NonPositiveVar: return "non_positive_var";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Disconnected: return "disconnected";
    case ErrorKind::DegenerateScores: return "degenerate_scores";
    case ErrorKind::UnsupportedSize: return "unsupported_size";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace tailrisk
