#pragma once

#include <stdexcept>
#include <string>

namespace szego {

// Failure categories. Every category maps to a distinct machine-readable
// cause token so CLI error paths stay distinguishable.
enum class errc {
  degenerate_curve,
  boundary_proximity,
  point_not_interior,
  unknown_domain,
  invalid_domain,
  grid_mismatch,
  singular_matrix,
  convergence_failure,
  basis_quality,
  clearance_violation,
  decomposition_residual,
  zero_count_mismatch,
  degenerate_zeros,
  separation_violation,
  nonpositive_weight,
  dirichlet_residual,
  ill_scaled_samples,
  internal_consistency,
  usage,
  io_failure,
};

inline const char* cause_token(errc c) {
  switch (c) {
    case errc::degenerate_curve:      return "degenerate-curve";
    case errc::boundary_proximity:    return "boundary-proximity";
    case errc::point_not_interior:    return "point-not-interior";
    case errc::unknown_domain:        return "unknown-domain";
    case errc::invalid_domain:        return "invalid-domain";
    case errc::grid_mismatch:         return "grid-mismatch";
    case errc::singular_matrix:       return "singular-matrix";
    case errc::convergence_failure:   return "convergence-failure";
    case errc::basis_quality:         return "basis-quality";
    case errc::clearance_violation:   return "clearance-violation";
    case errc::decomposition_residual:return "decomposition-residual";
    case errc::zero_count_mismatch:   return "zero-count-mismatch";
    case errc::degenerate_zeros:      return "degenerate-zeros";
    case errc::separation_violation:  return "separation-violation";
    case errc::nonpositive_weight:    return "nonpositive-weight";
    case errc::dirichlet_residual:    return "dirichlet-residual";
    case errc::ill_scaled_samples:    return "ill-scaled-samples";
    case errc::internal_consistency:  return "internal-consistency";
    case errc::usage:                 return "usage";
    case errc::io_failure:            return "io-failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }
  const char* token() const { return cause_token(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace szego
