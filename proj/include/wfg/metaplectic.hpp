#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "wfg/grid.hpp"

namespace wfg {

enum class GenKind { FOURIER, CHIRP, DILATE };

struct Generator {
    GenKind kind = GenKind::FOURIER;
    double param = 0.0;  // c for CHIRP, lambda for DILATE
};

using Mat2 = std::array<double, 4>;  // row-major

// Applied left to right: the first generator acts first, chi = chi_k ... chi_1.
struct SymplecticWord {
    std::vector<Generator> gens;

    Mat2 matrix() const;
    std::array<double, 2> map(const std::array<double, 2>& z) const;
};

Mat2 generator_matrix(const Generator& g);
Mat2 mat_mul(const Mat2& a, const Mat2& b);
// max |chi^T J chi - J|
double symplectic_defect(const Mat2& m);

// KEEP_AXIS resamples onto the input grid (needs the image to fit);
// RESCALE_AXIS lets DILATE relabel the grid L -> lambda L, which is exact.
enum class DilatePolicy { KEEP_AXIS, RESCALE_AXIS };

SampledSignal apply_unitary(const SymplecticWord& word, const SampledSignal& u,
                            DilatePolicy policy = DilatePolicy::KEEP_AXIS);

ConicRegion map_region(const SymplecticWord& word, const ConicRegion& g);

// ["fourier", {"chirp": 1.0}, {"dilate": 2.0}]
SymplecticWord word_from_json(const nlohmann::json& j);
nlohmann::json word_to_json(const SymplecticWord& w);

}  // namespace wfg
