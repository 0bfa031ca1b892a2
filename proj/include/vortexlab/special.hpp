#pragma once

#include <complex>

namespace vortexlab {

/// Generalized Laguerre polynomial L_p^a(x) by three-term recurrence.
double assoc_laguerre(int p, int a, double x);

/// Bessel function of the first kind, integer order, complex argument.
/// Real arguments go to std::cyl_bessel_j; otherwise power series near the
/// origin and Miller backward recurrence elsewhere.
std::complex<double> bessel_j(int n, std::complex<double> w);

/// k-th positive root of J_n (k >= 1), bracketed on a coarse scan then bisected.
double bessel_j_root(int n, int k);

}  // namespace vortexlab
