#pragma once

#include <complex>
#include <vector>

namespace wfg {

// Unnormalized in-place-capable DFT: out[k] = sum_j in[j] exp(sign * 2 pi i j k / n).
// Plans are cached per (n, sign); execution is thread-safe.
void dft(const std::complex<double>* in, std::complex<double>* out, int n, int sign);
void dft2(const std::complex<double>* in, std::complex<double>* out, int n0, int n1, int sign);

inline void dft(std::vector<std::complex<double>>& buf, int sign) {
    dft(buf.data(), buf.data(), static_cast<int>(buf.size()), sign);
}

}  // namespace wfg
