#include "uflsim/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace uflsim::kernels {

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
void cosine_cycles_scalar(const double* phase_cycles, double* out,
                          std::size_t n, double amplitude);
#if UFLSIM_HAVE_AVX2
double dot_avx2(const double* a, const double* b, std::size_t n);
void cosine_cycles_avx2(const double* phase_cycles, double* out,
                        std::size_t n, double amplitude);
#endif
}  // namespace detail

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using CosFn = void (*)(const double*, double*, std::size_t, double);

struct Table {
    Backend backend;
    DotFn dot;
    CosFn cosine;
};

bool avx2_available()
{
#if UFLSIM_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Table make_table(Backend b)
{
#if UFLSIM_HAVE_AVX2
    if (b == Backend::avx2)
        return {Backend::avx2, detail::dot_avx2, detail::cosine_cycles_avx2};
#endif
    return {Backend::scalar, detail::dot_scalar, detail::cosine_cycles_scalar};
}

Table resolve_initial()
{
    Backend b = avx2_available() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("UFLSIM_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            b = Backend::scalar;
        else if (std::strcmp(env, "avx2") == 0 && avx2_available())
            b = Backend::avx2;
    }
    return make_table(b);
}

Table& table()
{
    static Table t = resolve_initial();
    return t;
}

}  // namespace

Backend active_backend() { return table().backend; }

const char* backend_name(Backend b)
{
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b)
{
    if (b == Backend::avx2 && !avx2_available())
        throw std::invalid_argument("avx2 kernels not available on this cpu");
    table() = make_table(b);
}

double dot(const double* a, const double* b, std::size_t n)
{
    return table().dot(a, b, n);
}

void cosine_cycles(const double* phase_cycles, double* out, std::size_t n,
                   double amplitude)
{
    table().cosine(phase_cycles, out, n, amplitude);
}

}  // namespace uflsim::kernels
