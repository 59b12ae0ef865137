#pragma once

#include "semithermo/sphere.hpp"

#include <span>
#include <vector>

namespace semithermo {

/// Polynomial coefficients in ascending degree.
using Coeffs = std::vector<cplx>;

cplx horner(std::span<const cplx> c, cplx z);

/// Evaluates p(z) and p'(z) in one pass.
void horner_with_derivative(std::span<const cplx> c, cplx z, cplx& p, cplx& dp);

/// Sum |c_k| |z|^k, the scale used for backward-error tests.
double abs_horner(std::span<const cplx> c, double r);

Coeffs derivative(std::span<const cplx> c);
Coeffs multiply(std::span<const cplx> a, std::span<const cplx> b);
Coeffs add(std::span<const cplx> a, std::span<const cplx> b);
Coeffs scaled(std::span<const cplx> a, cplx s);

double max_abs(std::span<const cplx> c);

/// Degree after discarding leading coefficients below eps_rel * max|c|.
/// Returns -1 for the zero polynomial.
int effective_degree(std::span<const cplx> c, double eps_rel);

/// Copy truncated to effective_degree + 1 coefficients.
Coeffs trimmed(std::span<const cplx> c, double eps_rel);

} // namespace semithermo
