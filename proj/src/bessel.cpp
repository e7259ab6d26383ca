#include "efl/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace efl {

namespace {

constexpr double kCrossover = 12.0;

// J_nu(x) = sum_k (-1)^k (x/2)^{nu+2k} / (k! (k+nu)!)
double series_j(int nu, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= nu; ++k) term *= h / k;
    double sum = term;
    const double h2 = -h * h;
    for (int k = 1; k < 64; ++k) {
        term *= h2 / (static_cast<double>(k) * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30) && k > 4) break;
    }
    return sum;
}

// Hankel expansion: J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
// chi = x - nu pi/2 - pi/4, with a_k(nu) = prod_{j=1..k}(4nu^2-(2j-1)^2)/(k 8),
// P summing even k and Q odd k. The series is truncated at its smallest
// term, which bounds the truncation error.
double hankel_j(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double t = 1.0;  // t_m = a_m(nu) / x^m
    double smallest = 1.0;
    for (int m = 1; m < 40; ++m) {
        const double odd = 2.0 * m - 1.0;
        t *= (mu - odd * odd) / (8.0 * m * x);
        const double mag = std::abs(t);
        if (mag >= smallest) break;  // asymptotic series started diverging
        smallest = mag;
        const double signed_t = ((m / 2) % 2 == 0) ? t : -t;  // (-1)^{floor(m/2)}
        if (m % 2 == 1)
            q += signed_t;
        else
            p += signed_t;
        if (mag < 1e-17) break;
    }
    const double chi = x - nu * std::numbers::pi / 2.0 - std::numbers::pi / 4.0;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    if (x < 0.0) throw std::invalid_argument("bessel_j0: negative argument");
    return x <= kCrossover ? series_j(0, x) : hankel_j(0, x);
}

double bessel_j1(double x) {
    if (x < 0.0) throw std::invalid_argument("bessel_j1: negative argument");
    return x <= kCrossover ? series_j(1, x) : hankel_j(1, x);
}

}  // namespace efl
