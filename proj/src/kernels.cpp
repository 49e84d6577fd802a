#include "sehp/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sehp::kernels {
namespace {

const Backend* g_active = nullptr;

const Backend* pick_default() {
    if (const char* env = std::getenv("SEHP_KERNELS")) {
        std::string want(env);
        if (want == "scalar") return &scalar();
        if (want == "avx2") {
            if (const Backend* t = avx2()) return t;
            throw std::runtime_error("SEHP_KERNELS=avx2 but host lacks AVX2+FMA");
        }
        throw std::runtime_error("unknown SEHP_KERNELS value: " + want);
    }
    if (const Backend* t = avx2()) return t;
    return &scalar();
}

}  // namespace

const Backend& active() {
    if (!g_active) g_active = pick_default();
    return *g_active;
}

void select(std::string_view name) {
    if (name == "scalar") {
        g_active = &scalar();
        return;
    }
    if (name == "avx2") {
        if (const Backend* t = avx2()) {
            g_active = t;
            return;
        }
        throw std::runtime_error("avx2 backend unavailable on this host");
    }
    throw std::runtime_error("unknown kernel backend: " + std::string(name));
}

}  // namespace sehp::kernels
