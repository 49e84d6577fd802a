#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "sehp/dense.hpp"
#include "sehp/mlp.hpp"

namespace sehp {

// Versioned binary container for parameters and training state. Tensors are
// stored as raw little-endian doubles, so save/load round-trips bit-exact.
struct Container {
    std::map<std::string, std::string> meta;
    std::map<std::string, Dense> tensors;

    void put_mlp(const std::string& name, const Mlp& m);
    Mlp get_mlp(const std::string& name) const;  // throws if absent/malformed
    bool has_mlp(const std::string& name) const;
};

void save_container(const std::filesystem::path& path, const Container& c);
Container load_container(const std::filesystem::path& path);

}  // namespace sehp
