#include "sehp/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sehp/rng.hpp"

namespace sehp {

double Hypergraph::mean_edge_size() const {
    if (edges.empty()) return 0.0;
    std::size_t total = 0;
    for (const auto& e : edges) total += e.size();
    return static_cast<double>(total) / static_cast<double>(edges.size());
}

void Hypergraph::finalize() {
    node_edges.assign(node_count, {});
    for (EdgeId j = 0; j < edges.size(); ++j) {
        auto& e = edges[j];
        if (e.size() < 2)
            throw std::invalid_argument("hyperedge " + std::to_string(j) + " has size " +
                                        std::to_string(e.size()) + " (< 2)");
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw std::invalid_argument("hyperedge " + std::to_string(j) +
                                        " contains a duplicate node");
        for (NodeId v : e) {
            if (v >= node_count)
                throw std::invalid_argument("hyperedge " + std::to_string(j) + " references node " +
                                            std::to_string(v) + " outside [0, " +
                                            std::to_string(node_count) + ")");
            node_edges[v].push_back(j);
        }
    }
    if (features.rows != 0 && features.rows != node_count)
        throw std::invalid_argument("feature row count does not match node count");
}

BipartiteView to_bipartite(const Hypergraph& g) {
    BipartiteView bv;
    bv.left_count = g.node_count;
    bv.right_count = g.edge_count();
    for (EdgeId j = 0; j < g.edges.size(); ++j)
        for (NodeId v : g.edges[j]) bv.edges.emplace_back(v, j);
    return bv;
}

Split split_dataset(const Hypergraph& g, std::uint64_t seed) {
    const std::size_t m = g.edge_count();
    if (m < 5) throw std::invalid_argument("too few hyperedges to split");
    std::vector<EdgeId> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = static_cast<EdgeId>(i);
    Rng rng(derive_seed(seed, "split"));
    rng.shuffle(order);

    const auto n_train = static_cast<std::size_t>(std::llround(0.6 * static_cast<double>(m)));
    const auto n_val = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(m)));
    Split s;
    s.train.assign(order.begin(), order.begin() + n_train);
    s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    s.test.assign(order.begin() + n_train + n_val, order.end());
    return s;
}

namespace {

Dense degree_bucket_features(const Hypergraph& g) {
    constexpr std::size_t kBuckets = 16;
    Dense f(g.node_count, kBuckets);
    for (NodeId v = 0; v < g.node_count; ++v) {
        const double deg = static_cast<double>(g.node_edges[v].size());
        const auto bucket = std::min<std::size_t>(
            kBuckets - 1, static_cast<std::size_t>(std::floor(std::log2(deg + 1.0))));
        f.at(v, bucket) = 1.0;
    }
    return f;
}

}  // namespace

Hypergraph load_hypergraph(const std::filesystem::path& edge_file,
                           const std::optional<std::filesystem::path>& feature_file,
                           LoadReport* report) {
    std::ifstream is(edge_file);
    if (!is) throw std::runtime_error("cannot open hyperedge file: " + edge_file.string());

    LoadReport rep;
    std::vector<std::vector<NodeId>> raw_edges;
    std::set<NodeId> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::vector<NodeId> ids;
        std::string tok;
        while (ss >> tok) {
            try {
                std::size_t pos = 0;
                const unsigned long value = std::stoul(tok, &pos);
                if (pos != tok.size() || tok[0] == '-') throw std::invalid_argument(tok);
                ids.push_back(static_cast<NodeId>(value));
            } catch (const std::exception&) {
                throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                         " of " + edge_file.string() + ": bad token '" + tok +
                                         "'");
            }
        }
        if (ids.empty()) continue;
        std::sort(ids.begin(), ids.end());
        const auto last = std::unique(ids.begin(), ids.end());
        rep.deduplicated += static_cast<std::size_t>(ids.end() - last);
        ids.erase(last, ids.end());
        if (ids.size() < 2) {
            ++rep.rejected_small;
            continue;
        }
        seen_ids.insert(ids.begin(), ids.end());
        raw_edges.push_back(std::move(ids));
    }

    Hypergraph g;
    std::map<NodeId, NodeId> remap;
    if (feature_file) {
        // the feature file defines the node set, so IDs are already
        // canonical and isolated nodes stay representable
        g.features = load_features(*feature_file);
        g.node_count = g.features.rows;
        const NodeId max_seen = seen_ids.empty() ? 0 : *seen_ids.rbegin();
        if (!seen_ids.empty() && max_seen >= g.node_count)
            throw std::runtime_error("hyperedge file references node " +
                                     std::to_string(max_seen) + " but the feature file has " +
                                     std::to_string(g.node_count) + " rows");
        g.edges = std::move(raw_edges);
        g.finalize();
    } else {
        // compact gapped IDs, preserving order
        NodeId next = 0;
        for (NodeId id : seen_ids) remap[id] = next++;
        rep.remapped = !seen_ids.empty() && (*seen_ids.rbegin() != next - 1);
        g.node_count = remap.size();
        for (auto& e : raw_edges) {
            for (NodeId& v : e) v = remap.at(v);
            g.edges.push_back(std::move(e));
        }
        g.finalize();
        g.features = degree_bucket_features(g);
    }

    rep.node_count = g.node_count;
    rep.edge_count = g.edge_count();
    rep.mean_edge_size = g.mean_edge_size();
    if (rep.remapped)
        for (const auto& [orig, compacted] : remap) rep.remap.emplace_back(orig, compacted);
    if (report) *report = std::move(rep);
    return g;
}

void save_hyperedges(const Hypergraph& g, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const auto& e : g.edges) {
        for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
        os << '\n';
    }
}

void save_features(const Dense& features, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os.precision(17);
    os << features.rows << ' ' << features.cols << '\n';
    for (std::size_t r = 0; r < features.rows; ++r) {
        for (std::size_t c = 0; c < features.cols; ++c)
            os << (c ? " " : "") << features.at(r, c);
        os << '\n';
    }
}

Dense load_features(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open feature file: " + path.string());
    std::size_t n = 0, d = 0;
    if (!(is >> n >> d)) throw std::runtime_error("feature file missing 'n d' header");
    Dense f(n, d);
    for (std::size_t i = 0; i < n * d; ++i)
        if (!(is >> f.v[i]))
            throw std::runtime_error("feature file truncated at value " + std::to_string(i));
    f.ensure_finite("feature file");
    return f;
}

void save_remap(const std::vector<std::pair<NodeId, NodeId>>& remap,
                const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const auto& [orig, compacted] : remap) os << orig << ' ' << compacted << '\n';
}

void save_split(const Split& s, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    const auto dump = [&os](const char* name, const std::vector<EdgeId>& idx) {
        os << name;
        for (EdgeId i : idx) os << ' ' << i;
        os << '\n';
    };
    dump("train", s.train);
    dump("val", s.val);
    dump("test", s.test);
}

Split load_split(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open split file: " + path.string());
    Split s;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ss(line);
        std::string name;
        ss >> name;
        std::vector<EdgeId>* target = nullptr;
        if (name == "train") target = &s.train;
        else if (name == "val") target = &s.val;
        else if (name == "test") target = &s.test;
        else if (name.empty()) continue;
        else throw std::runtime_error("unknown split section: " + name);
        EdgeId idx;
        while (ss >> idx) target->push_back(idx);
    }
    return s;
}

Hypergraph synth_hypergraph(std::size_t n, std::size_t m, std::size_t kmin, std::size_t kmax,
                            std::size_t communities, std::uint64_t seed) {
    if (kmin < 2 || kmax < kmin || n < kmax || communities < 1)
        throw std::invalid_argument("synth_hypergraph: infeasible sizes");
    if (n / communities < kmax)
        throw std::invalid_argument("synth_hypergraph: community blocks smaller than kmax");

    constexpr double kIntraProb = 0.9;
    Rng rng(derive_seed(seed, "synth"));

    // contiguous community blocks
    const std::size_t base = n / communities;
    const std::size_t extra = n % communities;
    std::vector<std::pair<NodeId, NodeId>> block(communities);  // [begin, end)
    NodeId cursor = 0;
    for (std::size_t c = 0; c < communities; ++c) {
        const auto width = static_cast<NodeId>(base + (c < extra ? 1 : 0));
        block[c] = {cursor, cursor + width};
        cursor += width;
    }

    Hypergraph g;
    g.node_count = n;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = kmin + rng.uniform_index(kmax - kmin + 1);
        const std::size_t c = rng.uniform_index(communities);
        std::set<NodeId> members;
        while (members.size() < k) {
            NodeId v;
            if (rng.uniform_real() < kIntraProb) {
                const auto [lo, hi] = block[c];
                v = lo + static_cast<NodeId>(rng.uniform_index(hi - lo));
            } else {
                v = static_cast<NodeId>(rng.uniform_index(n));
            }
            members.insert(v);
        }
        g.edges.emplace_back(members.begin(), members.end());
    }

    g.features = Dense(n, communities);
    for (NodeId v = 0; v < n; ++v) {
        std::size_t c = 0;
        while (!(v >= block[c].first && v < block[c].second)) ++c;
        for (std::size_t d = 0; d < communities; ++d)
            g.features.at(v, d) = (d == c ? 1.0 : 0.0) + rng.uniform_real(0.0, 0.1);
    }
    g.finalize();
    return g;
}

}  // namespace sehp
