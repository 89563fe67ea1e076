#pragma once

namespace dskp {

// Global relative tolerance used by the floating-point backend for equality
// and zero tests. The exact backend never reads it.
inline double& float_tolerance() {
  static double tol = 1e-9;
  return tol;
}

// Coplanarity / rank decisions over the float backend compare the smallest
// singular value against this relative threshold.
inline double& coplanarity_tolerance() {
  static double tol = 1e-7;
  return tol;
}

// Upper bound on the Aztec diamond size accepted by the enumeration-based
// partition function; 2^(k(k+1)/2) matchings get expensive fast.
inline int& max_aztec_size() {
  static int k = 6;
  return k;
}

}  // namespace dskp
