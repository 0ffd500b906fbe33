#include "anypath/rng.hpp"

#include <cmath>

namespace anypath {

double RngStream::next_normal() {
    // Box-Muller, cosine branch only: two uniforms per normal, no cached state.
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 < 1e-300)
        u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double RngStream::next_gamma(double shape) {
    if (shape < 1.0) {
        // boost shape by one, then scale by U^(1/shape)
        double g = next_gamma(shape + 1.0);
        double u = next_unit();
        if (u < 1e-300)
            u = 1e-300;
        return g * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = next_normal();
        double t = 1.0 + c * x;
        if (t <= 0.0)
            continue;
        double v = t * t * t;
        double u = next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double RngStream::next_beta(double alpha, double beta) {
    double x = next_gamma(alpha);
    double y = next_gamma(beta);
    double s = x + y;
    if (s <= 0.0)
        return 0.5;
    return x / s;
}

} // namespace anypath
