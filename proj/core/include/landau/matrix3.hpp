#pragma once

#include <stdexcept>

#include "landau/geometry.hpp"

namespace landau::mat3 {

/// Thrown when a matrix required to be PSD has an eigenvalue below -1e-10.
struct NotPsdError : std::runtime_error {
  explicit NotPsdError(double min_eig)
      : std::runtime_error("matrix is not positive semidefinite"),
        min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

struct EigenSym3 {
  std::array<double, 3> eigenvalues;  // ascending
  Mat3 eigenvectors;                  // columns
};

EigenSym3 eigensym(const SymMat3& m);

double min_eigenvalue(const SymMat3& m);

/// Unique symmetric PSD square root. Eigenvalues in [-1e-10, 0) are clamped
/// to 0; below that a NotPsdError is thrown.
SymMat3 sqrt_psd(const SymMat3& m);

/// Eigendecomposition with each eigenvalue lambda replaced by
/// (max(lambda,0) + reg)^{-1/2}.
SymMat3 inv_sqrt_psd(const SymMat3& m, double reg);

/// Rotation aligning the optimal coupling of two centered Gaussians
/// N(0,S1), N(0,S2): U = S2^{-1/2} S1^{-1/2} (S1^{1/2} S2 S1^{1/2})^{1/2}.
/// Falls back to the identity when either matrix has an eigenvalue below
/// reg_threshold (the formula is undefined for singular covariances).
Mat3 coupling_rotation(const SymMat3& s1, const SymMat3& s2, double reg,
                       double reg_threshold = 1e-8);

/// Squared 2-Wasserstein distance between N(0,S1) and N(0,S2):
/// Tr S1 + Tr S2 - 2 Tr((S1^{1/2} S2 S1^{1/2})^{1/2}).
double gaussian_w2sq(const SymMat3& s1, const SymMat3& s2);

}  // namespace landau::mat3
