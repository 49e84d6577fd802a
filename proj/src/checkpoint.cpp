#include "sehp/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sehp {
namespace {

constexpr char kMagic[8] = {'S', 'E', 'H', 'P', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof(x));
}

void write_u64(std::ostream& os, std::uint64_t x) {
    os.write(reinterpret_cast<const char*>(&x), sizeof(x));
}

void write_str(std::ostream& os, const std::string& s) {
    write_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::istream& is) {
    std::uint32_t x = 0;
    is.read(reinterpret_cast<char*>(&x), sizeof(x));
    return x;
}

std::uint64_t read_u64(std::istream& is) {
    std::uint64_t x = 0;
    is.read(reinterpret_cast<char*>(&x), sizeof(x));
    return x;
}

std::string read_str(std::istream& is) {
    const std::uint32_t n = read_u32(is);
    std::string s(n, '\0');
    is.read(s.data(), n);
    return s;
}

}  // namespace

void Container::put_mlp(const std::string& name, const Mlp& m) {
    std::ostringstream acts;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        if (l) acts << ',';
        acts << activation_name(m.layers[l].act);
        tensors[name + ".w" + std::to_string(l)] = m.layers[l].w;
        tensors[name + ".b" + std::to_string(l)] = m.layers[l].b;
    }
    meta[name + ".acts"] = acts.str();
}

bool Container::has_mlp(const std::string& name) const {
    return meta.count(name + ".acts") > 0;
}

Mlp Container::get_mlp(const std::string& name) const {
    auto it = meta.find(name + ".acts");
    if (it == meta.end()) throw std::runtime_error("checkpoint: missing model " + name);
    std::vector<Activation> acts;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) acts.push_back(activation_from_name(tok));

    Mlp m;
    for (std::size_t l = 0; l < acts.size(); ++l) {
        auto wi = tensors.find(name + ".w" + std::to_string(l));
        auto bi = tensors.find(name + ".b" + std::to_string(l));
        if (wi == tensors.end() || bi == tensors.end())
            throw std::runtime_error("checkpoint: missing tensors for " + name + " layer " +
                                     std::to_string(l));
        m.layers.push_back({wi->second, bi->second, acts[l]});
    }
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l)
        if (m.layers[l + 1].w.cols != m.layers[l].w.rows)
            throw std::runtime_error("checkpoint: inconsistent widths in " + name);
    return m;
}

void save_container(const std::filesystem::path& path, const Container& c) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os.write(kMagic, sizeof(kMagic));
    write_u32(os, kVersion);
    write_u32(os, static_cast<std::uint32_t>(c.meta.size()));
    for (const auto& [k, v] : c.meta) {
        write_str(os, k);
        write_str(os, v);
    }
    write_u32(os, static_cast<std::uint32_t>(c.tensors.size()));
    for (const auto& [name, t] : c.tensors) {
        write_str(os, name);
        write_u64(os, t.rows);
        write_u64(os, t.cols);
        os.write(reinterpret_cast<const char*>(t.v.data()),
                 static_cast<std::streamsize>(t.v.size() * sizeof(double)));
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

Container load_container(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path.string());
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a checkpoint file: " + path.string());
    const std::uint32_t version = read_u32(is);
    if (version != kVersion)
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    Container c;
    const std::uint32_t n_meta = read_u32(is);
    for (std::uint32_t i = 0; i < n_meta; ++i) {
        std::string k = read_str(is);
        c.meta[k] = read_str(is);
    }
    const std::uint32_t n_tensors = read_u32(is);
    for (std::uint32_t i = 0; i < n_tensors; ++i) {
        std::string name = read_str(is);
        const std::uint64_t rows = read_u64(is);
        const std::uint64_t cols = read_u64(is);
        Dense t(rows, cols);
        is.read(reinterpret_cast<char*>(t.v.data()),
                static_cast<std::streamsize>(t.v.size() * sizeof(double)));
        c.tensors[name] = std::move(t);
    }
    if (!is) throw std::runtime_error("truncated checkpoint: " + path.string());
    return c;
}

}  // namespace sehp
