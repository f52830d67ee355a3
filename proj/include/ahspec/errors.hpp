#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace ahspec {

// Failure taxonomy shared by every operation in the library.  Callers that
// care about the class of failure switch on code(); the message carries the
// offending values.
enum class errc {
  out_of_range,
  degenerate_metric,
  wrong_variant,
  not_in_catalog,
  max_subdivisions,
  nonfinite_integrand,
  stiff_failure,
  not_positive_definite,
  no_convergence,
  insufficient_data,
  mesh_too_coarse,
  fit_failure,
  hypothesis_violation,
  config_error,
  corrupt_cache,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::out_of_range: return "OutOfRange";
    case errc::degenerate_metric: return "DegenerateMetric";
    case errc::wrong_variant: return "WrongVariant";
    case errc::not_in_catalog: return "NotInCatalog";
    case errc::max_subdivisions: return "MaxSubdivisions";
    case errc::nonfinite_integrand: return "NonFiniteIntegrand";
    case errc::stiff_failure: return "StiffFailure";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::no_convergence: return "NoConvergence";
    case errc::insufficient_data: return "InsufficientData";
    case errc::mesh_too_coarse: return "MeshTooCoarse";
    case errc::fit_failure: return "FitFailure";
    case errc::hypothesis_violation: return "HypothesisViolation";
    case errc::config_error: return "ConfigError";
    case errc::corrupt_cache: return "CorruptCache";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

// std::to_string flattens small doubles to 0.000000; error messages use this.
inline std::string num_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

}  // namespace ahspec
