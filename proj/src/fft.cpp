#include "wfg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace wfg {

namespace {

std::mutex plan_mutex;

// FFTW planning is not thread-safe; execution of an existing plan on new arrays is.
fftw_plan get_plan(int n0, int n1, int sign) {
    static std::map<std::tuple<int, int, int>, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    fftw_complex* a = fftw_alloc_complex(static_cast<size_t>(n0) * (n1 > 0 ? n1 : 1));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = n1 > 0 ? fftw_plan_dft_2d(n0, n1, a, a, sign, flags)
                         : fftw_plan_dft_1d(n0, a, a, sign, flags);
    fftw_free(a);
    plans.emplace(key, p);
    return p;
}

}  // namespace

void dft(const std::complex<double>* in, std::complex<double>* out, int n, int sign) {
    fftw_plan p = get_plan(n, 0, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

void dft2(const std::complex<double>* in, std::complex<double>* out, int n0, int n1, int sign) {
    fftw_plan p = get_plan(n0, n1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace wfg
