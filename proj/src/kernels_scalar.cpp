#include "uflsim/kernels.hpp"

#include <cmath>

/*
 * Scalar reference kernels.  Written for clarity, not speed: the vector
 * variants are validated against these, so they should be obviously correct.
 */
namespace uflsim::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * b[i];
    return acc;
}

void cosine_cycles_scalar(const double* phase_cycles, double* out,
                          std::size_t n, double amplitude)
{
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = phase_cycles[i] - std::nearbyint(phase_cycles[i]);
        out[i] = amplitude * std::cos(two_pi * r);
    }
}

}  // namespace uflsim::kernels::detail
