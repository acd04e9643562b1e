#pragma once

namespace gsum {

// Angular series coefficient c_n = sum_{k=0}^{n-1} C(n-1, k) / (2k+1),
// evaluated in exact rational arithmetic through n = 20 and by the
// recurrence c_n = (2^(n-1) + (2n-2) c_(n-1)) / (2n-1) beyond.
double c_coeff(int n);

// Squared probability via the angular integral
// 1 - (4/pi) Int_0^(pi/4) exp(-t^2 / (2 cos^2 phi)) dphi,
// adaptive quadrature with absolute tolerance 1e-13.
double p_sq_continuum(double t);

struct SeriesResult {
  double value = 0.0;
  double bound = 0.0;
  // False when the truncation bound exceeds 1 and the value is uninformative.
  bool informative = true;
};

// Truncated alternating series for the squared probability with n_terms terms,
// plus the companion truncation bound t^(2N) / (N! N). Term magnitudes are
// accumulated in the log domain so large inputs degrade gracefully.
SeriesResult p_sq_series(double t, int n_terms);

}  // namespace gsum
