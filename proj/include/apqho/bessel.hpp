#pragma once

namespace apqho {

/// Bessel function of the first kind, order zero, absolute error below 1e-12.
///
/// Power series for |x| <= 8, Miller backward recurrence on 8 < |x| <= 25 and
/// the Hankel asymptotic expansion beyond. J0 is even, so negative arguments
/// are accepted.
double bessel_j0(double x);

}  // namespace apqho
