#pragma once

namespace efl {

// Bessel functions of the first kind, orders 0 and 1, for x >= 0.
// Ascending power series below the crossover, Hankel asymptotic expansion
// truncated at its smallest term above it; absolute accuracy better than
// 1e-11 over the whole range.
double bessel_j0(double x);
double bessel_j1(double x);

}  // namespace efl
