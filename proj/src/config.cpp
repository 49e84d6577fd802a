#include "sehp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sehp {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::SEHP: return "SEHP";
        case Variant::Gns: return "SEHP-gns";
        case Variant::Epre: return "SEHP-epre";
        case Variant::None: return "SEHP-None";
        case Variant::Stru: return "SEHP-Stru";
        case Variant::Node: return "SEHP-Node";
    }
    throw std::invalid_argument("unknown variant");
}

Variant variant_from_name(const std::string& name) {
    if (name == "SEHP") return Variant::SEHP;
    if (name == "SEHP-gns") return Variant::Gns;
    if (name == "SEHP-epre") return Variant::Epre;
    if (name == "SEHP-None") return Variant::None;
    if (name == "SEHP-Stru") return Variant::Stru;
    if (name == "SEHP-Node") return Variant::Node;
    throw std::invalid_argument("unknown variant: " + name +
                                " (expected SEHP, SEHP-gns, SEHP-epre, SEHP-None, SEHP-Stru, "
                                "or SEHP-Node)");
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
    if (diffusion_steps < 1) throw std::invalid_argument("config: diffusion_steps must be >= 1");
    if (embed_dim < 2) throw std::invalid_argument("config: embed_dim must be >= 2");
    if (encoder_layers < 1) throw std::invalid_argument("config: encoder_layers must be >= 1");
    if (lr_dis <= 0.0 || lr_gen <= 0.0)
        throw std::invalid_argument("config: learning rates must be positive");
    if (eval_every < 1) throw std::invalid_argument("config: eval_every must be >= 1");
    if (eval_strategies.empty())
        throw std::invalid_argument("config: need at least one evaluation strategy");
}

namespace {

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: bad boolean value '" + v + "'");
}

std::vector<NegStrategy> parse_strategies(const std::string& v) {
    std::vector<NegStrategy> out;
    std::istringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(strategy_from_name(tok));
    return out;
}

}  // namespace

void apply_config_line(TrainConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "epochs") cfg.epochs = std::stoul(value);
    else if (key == "batch_size") cfg.batch_size = std::stoul(value);
    else if (key == "diffusion_steps") cfg.diffusion_steps = std::stoul(value);
    else if (key == "embed_dim") cfg.embed_dim = std::stoul(value);
    else if (key == "encoder_layers") cfg.encoder_layers = std::stoul(value);
    else if (key == "lr_dis") cfg.lr_dis = std::stod(value);
    else if (key == "lr_gen") cfg.lr_gen = std::stod(value);
    else if (key == "variant") cfg.variant = variant_from_name(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "eval_every") cfg.eval_every = std::stoul(value);
    else if (key == "extra_sns_negatives") cfg.extra_sns_negatives = parse_bool(value);
    else if (key == "use_generated_negatives") cfg.use_generated_negatives = parse_bool(value);
    else if (key == "timestep_input") cfg.timestep_input = parse_bool(value);
    else if (key == "eval_strategies") cfg.eval_strategies = parse_strategies(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

TrainConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path.string());
    TrainConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string key, value;
        if (!(ss >> key)) continue;
        if (!(ss >> value))
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": missing value for '" + key + "'");
        try {
            apply_config_line(cfg, key, value);
        } catch (const std::exception& e) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

std::string config_to_string(const TrainConfig& cfg) {
    std::ostringstream os;
    os << "epochs " << cfg.epochs << '\n'
       << "batch_size " << cfg.batch_size << '\n'
       << "diffusion_steps " << cfg.diffusion_steps << '\n'
       << "embed_dim " << cfg.embed_dim << '\n'
       << "encoder_layers " << cfg.encoder_layers << '\n'
       << "lr_dis " << cfg.lr_dis << '\n'
       << "lr_gen " << cfg.lr_gen << '\n'
       << "variant " << variant_name(cfg.variant) << '\n'
       << "seed " << cfg.seed << '\n'
       << "eval_every " << cfg.eval_every << '\n'
       << "extra_sns_negatives " << (cfg.extra_sns_negatives ? "true" : "false") << '\n'
       << "use_generated_negatives " << (cfg.use_generated_negatives ? "true" : "false") << '\n'
       << "timestep_input " << (cfg.timestep_input ? "true" : "false") << '\n';
    os << "eval_strategies ";
    for (std::size_t i = 0; i < cfg.eval_strategies.size(); ++i)
        os << (i ? "," : "") << strategy_name(cfg.eval_strategies[i]);
    os << '\n';
    return os.str();
}

void save_config(const TrainConfig& cfg, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << config_to_string(cfg);
}

}  // namespace sehp
