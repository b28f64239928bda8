#pragma once
// Hand-built CellView instances for rate/solver toy tests.

#include <vector>

#include "vcell/rate_core.hpp"

namespace vcell::test {

// gains in (user, bs, band) row-major order; one noise value for all BSs and
// bands, one bandwidth for all bands, one budget for all users
inline CellView toy_view(std::size_t users, std::size_t bs, std::size_t bands,
                         std::vector<double> gains, double noise_mw,
                         double width_hz, double budget_mw) {
    CellView v;
    for (std::size_t u = 0; u < users; ++u) v.users.push_back(u);
    for (std::size_t b = 0; b < bs; ++b) v.bs.push_back(b);
    v.gain = Tensor3(users, bs, bands);
    v.gain.data() = std::move(gains);
    v.noise = Matrix(bs, bands, noise_mw);
    v.band_width.assign(bands, width_hz);
    v.budget_mw.assign(users, budget_mw);
    return v;
}

} // namespace vcell::test
