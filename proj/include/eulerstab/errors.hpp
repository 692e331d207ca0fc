#pragma once

#include <stdexcept>

namespace eulerstab {

// Eigensolver non-convergence, unpairable spectra, broken certificates.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// rho was evaluated on the zero mode. Classes containing (0,0) always have
// alpha == 0 and must be skipped before any rho evaluation.
struct DegenerateClassError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace eulerstab
