#include "duffmel/quadrature.hpp"

namespace duffmel {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_nodes < 16)
        throw DomainError("invalid quadrature spec: tolerances must be positive and max_nodes >= 16");
}

}  // namespace duffmel
