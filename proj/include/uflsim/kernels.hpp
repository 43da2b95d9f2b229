#pragma once

#include <cstddef>

/*
 * Hot-loop numeric kernels.
 *
 * The two operations that dominate a closed-loop run are the windowed DFT
 * correlations inside the phasor estimator (plain dot products against
 * precomputed tables) and the waveform synthesis cosine evaluation.  Each
 * kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
 * variant.  The backend is picked once at startup from cpuid and can be
 * overridden with the UFLSIM_KERNELS environment variable ("scalar" or
 * "avx2") or programmatically via force_backend(), which the equivalence
 * tests use to exercise both paths.
 *
 * The vector variants are not bit-identical to the references (FMA and
 * different summation order change the rounding); the test suite pins the
 * allowed divergence.
 */
namespace uflsim::kernels {

enum class Backend { scalar, avx2 };

/// Backend selected for this process (after env override, if any).
Backend active_backend();

/// Human-readable backend name ("scalar" / "avx2").
const char* backend_name(Backend b);

/// Test hook: override the runtime choice.  Throws std::invalid_argument if
/// the requested backend is not available on this machine.
void force_backend(Backend b);

/// Sum of a[i]*b[i] for i in [0, n).
double dot(const double* a, const double* b, std::size_t n);

/// out[i] = amplitude * cos(2*pi*wrap(phase_cycles[i])) where wrap() reduces
/// the phase to [-0.5, 0.5] turns.  Keeping phase in cycles until this point
/// avoids the precision loss of accumulating large radian values.
void cosine_cycles(const double* phase_cycles, double* out, std::size_t n,
                   double amplitude);

}  // namespace uflsim::kernels
