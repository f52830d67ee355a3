#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "ahspec/errors.hpp"

namespace ahspec {

struct PencilResult {
  double value = 0;
  Eigen::VectorXd vec;
  double residual = 0;
  int iterations = 0;
};

// Common result of the spectral front ends (shooting and variational alike).
// mesh_size is 0 for mesh-free solvers; extrapolated marks R->infinity or
// mesh-limit values produced by a fit rather than a single solve.
struct EigenResult {
  double value = 0;
  double residual = 0;
  int mesh_size = 0;
  bool extrapolated = false;
  std::string diagnostics;
};

// Smallest eigenvalue of the symmetric pencil (A, B), both positive definite
// on the assembled space.  Inverse iteration on the diagonally equilibrated
// pencil; restarts from a shifted factorization if plain iteration stalls.
// The reported residual is that of the solved operator (A - shift B)^{-1} B
// in the B-inner product, the gauge in which the wanted mode is dominant; a
// pencil-form residual would cancel to eps * kappa for stiff high-order
// forms.  Throws NotPositiveDefinite when a factorization reveals an
// indefinite matrix and NoConvergence when the residual never reaches tol.
PencilResult smallest_generalized_eigen(const Eigen::SparseMatrix<double>& A,
                                        const Eigen::SparseMatrix<double>& B, double tol = 1e-10,
                                        int max_iterations = 400);

}  // namespace ahspec
