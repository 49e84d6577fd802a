#include "sehp/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sehp {

Dense::Dense(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), v(std::move(values)) {
    if (v.size() != r * c)
        throw std::invalid_argument("Dense: value count " + std::to_string(v.size()) +
                                    " does not match shape " + std::to_string(r) + "x" +
                                    std::to_string(c));
    ensure_finite("Dense construction");
}

bool Dense::all_finite() const {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

void Dense::ensure_finite(const char* what) const {
    if (!all_finite())
        throw std::runtime_error(std::string(what) + ": non-finite value encountered");
}

}  // namespace sehp
