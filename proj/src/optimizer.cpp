#include "sehp/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sehp/kernels.hpp"

namespace sehp {

void OptState::step(std::span<Dense* const> params, std::span<const Dense* const> grads) {
    if (params.size() != grads.size())
        throw std::invalid_argument("OptState::step: parameter/gradient count mismatch");
    if (m.empty()) {
        for (const Dense* p : params) {
            m.emplace_back(p->rows, p->cols);
            v.emplace_back(p->rows, p->cols);
        }
    }
    if (m.size() != params.size())
        throw std::invalid_argument("OptState::step: parameter count changed between steps");

    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(m[i]))
            throw std::invalid_argument("OptState::step: shape mismatch at slot " +
                                        std::to_string(i));
        if (!grads[i]->all_finite())
            throw std::runtime_error("OptState::step: non-finite gradient at slot " +
                                     std::to_string(i) + " (step " +
                                     std::to_string(step_count + 1) + ")");
    }

    ++step_count;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_count));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_count));
    const auto& K = kernels::active();
    for (std::size_t i = 0; i < params.size(); ++i) {
        K.adam_update(params[i]->v.data(), m[i].v.data(), v[i].v.data(), grads[i]->v.data(),
                      params[i]->size(), cfg.lr, cfg.beta1, cfg.beta2, cfg.eps, bc1, bc2);
        params[i]->ensure_finite("OptState::step: parameters after update");
    }
}

}  // namespace sehp
