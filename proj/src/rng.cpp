#include "sedbn/rng.hpp"

#include <cmath>

namespace sedbn {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> sample_flat_dirichlet(std::size_t k, Rng& rng) {
    std::vector<double> out(k);
    double total = 0.0;
    for (auto& x : out) {
        x = -std::log1p(-uniform01(rng));
        total += x;
    }
    if (total <= 0.0) {
        for (auto& x : out) x = 1.0 / static_cast<double>(k);
        return out;
    }
    for (auto& x : out) x /= total;
    return out;
}

std::size_t sample_categorical(const std::vector<double>& probs, Rng& rng) {
    double total = 0.0;
    for (double p : probs) total += p;
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    // Rounding left u at the top edge: take the last state with mass.
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) return i;
    }
    return probs.size() - 1;
}

}  // namespace sedbn
