#pragma once

#include <functional>
#include <string>

#include "mlg/types.hpp"

namespace mlg {

// External solvers receive the feature matrix and params and must return an
// N x N coefficient matrix. The diagonal is zeroed after the call; all other
// stages rely only on that contract.
using SolverFn = std::function<Matrix(const FeatureMatrix&, const SolverParams&)>;

void register_solver(const std::string& name, SolverFn fn);
bool solver_registered(const std::string& name);

// Dispatches on params.id. The built-in reference solver minimizes
// ||X - XC||_F^2 + lambda ||C||_F^2 subject to diag(C) = 0, in closed form:
// with Z = (X^T X + lambda I)^-1, C(i,j) = -Z(i,j)/Z(j,j) off the diagonal.
// External solvers are looked up by params.extra["name"].
RepresentationMatrix solve_self_expressive(const FeatureMatrix& x, const SolverParams& params);

// Column-wise magnitude truncation: keeps the d largest |C(:,j)| entries per
// column (ties keep the lower row index), zeroes the rest. 1 <= d <= N-1.
RepresentationMatrix truncate_ipd(const RepresentationMatrix& c, int d);

// (|C| + |C|^T) / 2; symmetric, entrywise nonnegative, zero diagonal kept.
Matrix symmetrize(const RepresentationMatrix& c);
Matrix symmetrize(const Matrix& c);

}  // namespace mlg
