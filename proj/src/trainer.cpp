#include "sehp/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sehp/kernels.hpp"
#include "sehp/losses.hpp"

namespace sehp {

Models Models::create(std::size_t feature_dim, const TrainConfig& cfg) {
    Models m;
    {
        Rng rng(derive_seed(cfg.seed, "init_encoder"));
        m.encoder = make_encoder(feature_dim, cfg.embed_dim, cfg.encoder_layers, rng);
    }
    {
        Rng rng(derive_seed(cfg.seed, "init_classifier"));
        m.classifier = make_classifier(cfg.embed_dim, rng);
    }
    {
        Rng rng(derive_seed(cfg.seed, "init_denoiser"));
        m.denoiser = make_denoiser(cfg.embed_dim, cfg.timestep_input, rng);
    }
    {
        Rng rng(derive_seed(cfg.seed, "init_extractor"));
        m.extractor = make_extractor(cfg.embed_dim, rng);
    }
    {
        Rng rng(derive_seed(cfg.seed, "init_noise_gen"));
        m.noise_gen = make_noise_generator(cfg.embed_dim, rng);
    }
    return m;
}

Models Models::zeros(std::size_t feature_dim, const TrainConfig& cfg) {
    Models m;
    m.encoder = make_zero_encoder(feature_dim, cfg.embed_dim, cfg.encoder_layers);
    m.classifier = make_zero_classifier(cfg.embed_dim);
    m.denoiser = make_zero_denoiser(cfg.embed_dim, cfg.timestep_input);
    Rng rng(derive_seed(cfg.seed, "init_extractor"));
    m.extractor = make_extractor(cfg.embed_dim, rng);
    Rng rng2(derive_seed(cfg.seed, "init_noise_gen"));
    m.noise_gen = make_noise_generator(cfg.embed_dim, rng2);
    return m;
}

std::vector<Dense*> Models::discriminator_params() {
    std::vector<Dense*> out = encoder.params();
    for (Dense* p : classifier.params()) out.push_back(p);
    return out;
}

std::vector<Dense*> Models::generator_params(Variant variant) {
    return variant == Variant::Gns ? noise_gen.params() : denoiser.params();
}

bool Models::operator==(const Models& o) const {
    if (encoder.layers.size() != o.encoder.layers.size()) return false;
    for (std::size_t i = 0; i < encoder.layers.size(); ++i)
        if (!(encoder.layers[i] == o.encoder.layers[i])) return false;
    return classifier == o.classifier && denoiser == o.denoiser && extractor == o.extractor &&
           noise_gen == o.noise_gen;
}

void models_to_container(const Models& m, Container& c) {
    for (std::size_t l = 0; l < m.encoder.layers.size(); ++l)
        c.put_mlp("encoder." + std::to_string(l), m.encoder.layers[l]);
    c.meta["encoder.depth"] = std::to_string(m.encoder.layers.size());
    c.put_mlp("classifier", m.classifier);
    c.put_mlp("denoiser", m.denoiser);
    c.put_mlp("extractor", m.extractor);
    c.put_mlp("noise_gen", m.noise_gen);
}

Models models_from_container(const Container& c) {
    Models m;
    auto it = c.meta.find("encoder.depth");
    if (it == c.meta.end()) throw std::runtime_error("checkpoint: missing encoder depth");
    const std::size_t depth = std::stoul(it->second);
    for (std::size_t l = 0; l < depth; ++l)
        m.encoder.layers.push_back(c.get_mlp("encoder." + std::to_string(l)));
    m.classifier = c.get_mlp("classifier");
    m.denoiser = c.get_mlp("denoiser");
    m.extractor = c.get_mlp("extractor");
    m.noise_gen = c.get_mlp("noise_gen");
    return m;
}

TrainState make_train_state(const Hypergraph& g, const TrainConfig& cfg) {
    TrainState s;
    s.models = Models::create(g.feature_dim(), cfg);
    s.opt_dis = OptState({cfg.lr_dis});
    s.opt_gen = OptState({cfg.lr_gen});
    return s;
}

namespace {

void opt_to_container(const OptState& o, const std::string& prefix, Container& c) {
    c.meta[prefix + ".steps"] = std::to_string(o.step_count);
    c.meta[prefix + ".slots"] = std::to_string(o.m.size());
    c.meta[prefix + ".lr"] = std::to_string(o.cfg.lr);
    for (std::size_t i = 0; i < o.m.size(); ++i) {
        c.tensors[prefix + ".m" + std::to_string(i)] = o.m[i];
        c.tensors[prefix + ".v" + std::to_string(i)] = o.v[i];
    }
}

OptState opt_from_container(const Container& c, const std::string& prefix) {
    OptState o;
    o.step_count = std::stoull(c.meta.at(prefix + ".steps"));
    o.cfg.lr = std::stod(c.meta.at(prefix + ".lr"));
    const std::size_t slots = std::stoul(c.meta.at(prefix + ".slots"));
    for (std::size_t i = 0; i < slots; ++i) {
        o.m.push_back(c.tensors.at(prefix + ".m" + std::to_string(i)));
        o.v.push_back(c.tensors.at(prefix + ".v" + std::to_string(i)));
    }
    return o;
}

}  // namespace

void state_to_container(const TrainState& s, Container& c) {
    models_to_container(s.models, c);
    opt_to_container(s.opt_dis, "opt_dis", c);
    opt_to_container(s.opt_gen, "opt_gen", c);
    c.meta["global_step"] = std::to_string(s.global_step);
}

TrainState state_from_container(const Container& c) {
    TrainState s;
    s.models = models_from_container(c);
    s.opt_dis = opt_from_container(c, "opt_dis");
    s.opt_gen = opt_from_container(c, "opt_gen");
    s.global_step = std::stoull(c.meta.at("global_step"));
    return s;
}

namespace {

GenOptions options_for(const TrainConfig& cfg) {
    GenOptions opts;
    opts.steps = cfg.diffusion_steps;
    opts.timestep_input = cfg.timestep_input;
    switch (cfg.variant) {
        case Variant::SEHP:
        case Variant::Gns:  // diffusion path unused; defaults keep the trace command sane
            break;
        case Variant::Epre:
            opts.mode = GenMode::Latent;
            break;
        case Variant::None:
            opts.use_condition = false;
            opts.query_node_embeddings = false;
            break;
        case Variant::Stru:
            opts.query_node_embeddings = false;
            break;
        case Variant::Node:
            opts.use_condition = false;
            break;
    }
    return opts;
}

// d(BCE)/d(score); zero where the clamp saturates the log
double bce_score_grad(double s, int label, std::size_t n) {
    if (s <= kScoreClampEps || s >= 1.0 - kScoreClampEps) return 0.0;
    const double g = label ? -1.0 / s : 1.0 / (1.0 - s);
    return g / static_cast<double>(n);
}

struct DiscCandidate {
    std::vector<std::uint32_t> members;  // local node ids; empty for latent rows
    std::vector<double> latent;          // non-empty for latent rows
    int label = 0;
    bool is_latent() const { return !latent.empty(); }
};

}  // namespace

StepLosses train_step(TrainState& state, const Hypergraph& g, std::span<const EdgeId> train,
                      const TrainConfig& cfg) {
    const std::uint64_t step_seed = derive_seed(cfg.seed, "step", state.global_step);
    Models& m = state.models;
    const std::size_t h = cfg.embed_dim;

    if (cfg.batch_size > train.size() && state.global_step == 0)
        std::fprintf(stderr, "warning: batch_size %zu exceeds training set size %zu; clamping\n",
                     cfg.batch_size, train.size());

    SubHypergraph sub =
        sample_sub_hypergraph(g, train, cfg.batch_size, derive_seed(step_seed, "sub"));
    const std::size_t n_pos = sub.edge_ids.size();

    // heuristic negatives for the discriminator, when requested
    std::vector<CandidateHyperedge> sns_extras;
    if (cfg.extra_sns_negatives || !cfg.use_generated_negatives) {
        ForbiddenSet observed(g);
        NegSpec spec{NegStrategy::SNS, n_pos, derive_seed(step_seed, "sns")};
        sns_extras = sample_negatives(g, spec, observed);
        for (const auto& c : sns_extras) sub.extend_nodes(c.nodes);
    }

    EncodeCache enc_cache;
    const Dense features = sub.gather_features();
    const Dense V = encode_nodes(m.encoder, sub, features, &enc_cache);

    // --- negative generation ------------------------------------------------
    GeneratedBatch gen;
    Dense gns_noise, gns_latents;
    MlpCache gns_cache;
    if (cfg.use_generated_negatives) {
        if (cfg.variant == Variant::Gns) {
            Rng noise_rng(derive_seed(step_seed, "gns_noise"));
            gns_noise = Dense(n_pos, h);
            for (double& x : gns_noise.v) x = noise_rng.normal();
            gns_latents = mlp_forward(m.noise_gen, gns_noise, &gns_cache);
            gns_latents.ensure_finite("noise generator output");
            ForbiddenSet observed(g);
            for (std::size_t p = 0; p < n_pos; ++p) {
                CandidateHyperedge c = extract_node_ids(
                    m.extractor, gns_latents.row_span(p), sub, V,
                    sub.local_edges[p].size(), true);
                c.source_edge = sub.edge_ids[p];
                c.collides_observed = observed.contains(c.nodes);
                gen.discrete.push_back(std::move(c));
            }
            gen.mode = GenMode::NodeId;
        } else {
            ForbiddenSet observed(g);
            gen = generate_negatives(sub, V, m.denoiser, m.extractor, m.classifier,
                                     options_for(cfg), observed);
        }
    }

    // --- discriminator update ------------------------------------------------
    std::vector<DiscCandidate> cands;
    for (std::size_t p = 0; p < n_pos; ++p) cands.push_back({sub.local_edges[p], {}, 1});
    if (cfg.use_generated_negatives) {
        if (gen.mode == GenMode::Latent) {
            for (const auto& chain : gen.chains)
                cands.push_back({{}, chain.states.back(), 0});
        } else {
            for (const auto& c : gen.discrete) {
                std::vector<std::uint32_t> locals;
                for (NodeId v : c.nodes) locals.push_back(sub.local_of(v));
                cands.push_back({std::move(locals), {}, 0});
            }
            // the generated latents are scored by this classifier at every
            // chain step, so it must see them as negatives too; otherwise
            // the generator saturates them unopposed and the per-step score
            // signal stops meaning anything
            std::size_t latent_rows = 0;
            for (const auto& chain : gen.chains)
                for (std::size_t t = 1; t < chain.states.size(); ++t) {
                    cands.push_back({{}, chain.states[t], 0});
                    ++latent_rows;
                }
            for (std::size_t p = 0; p < gns_latents.rows; ++p) {
                const double* row = gns_latents.row(p);
                cands.push_back({{}, std::vector<double>(row, row + h), 0});
                ++latent_rows;
            }
            // keep the classes balanced: one positive copy per negative row
            for (std::size_t i = 0; i < latent_rows; ++i)
                cands.push_back({sub.local_edges[i % n_pos], {}, 1});
        }
    }
    for (const auto& c : sns_extras) {
        std::vector<std::uint32_t> locals;
        for (NodeId v : c.nodes) locals.push_back(sub.local_of(v));
        cands.push_back({std::move(locals), {}, 0});
    }

    const std::size_t n_cand = cands.size();
    Dense emb(n_cand, h);
    std::vector<AggregateCache> agg_caches(n_cand);
    for (std::size_t i = 0; i < n_cand; ++i) {
        if (cands[i].is_latent()) {
            std::copy(cands[i].latent.begin(), cands[i].latent.end(), emb.row(i));
        } else {
            const auto e = aggregate_hyperedge(V, cands[i].members, agg_caches[i]);
            std::copy(e.begin(), e.end(), emb.row(i));
        }
    }

    MlpCache clf_cache;
    const Dense score_col = mlp_forward(m.classifier, emb, &clf_cache);
    std::vector<double> scores(score_col.v);
    std::vector<int> labels(n_cand);
    for (std::size_t i = 0; i < n_cand; ++i) labels[i] = cands[i].label;

    StepLosses losses;
    losses.dis = discriminator_loss(scores, labels);
    if (!std::isfinite(losses.dis))
        throw std::runtime_error("train_step: non-finite discriminator loss");

    {
        Dense upstream(n_cand, 1);
        for (std::size_t i = 0; i < n_cand; ++i)
            upstream.v[i] = bce_score_grad(scores[i], labels[i], n_cand);

        MlpGrads clf_grads = MlpGrads::zeros_like(m.classifier);
        Dense d_emb = mlp_backward(m.classifier, clf_cache, upstream, clf_grads);

        Dense dV(V.rows, V.cols);
        for (std::size_t i = 0; i < n_cand; ++i) {
            if (cands[i].is_latent()) continue;  // generated latents are constants here
            const double* row = d_emb.row(i);
            for (std::size_t c = 0; c < h; ++c) {
                dV.at(agg_caches[i].argmax[c], c) += row[c];
                dV.at(agg_caches[i].argmin[c], c) -= row[c];
            }
        }
        EncoderGrads enc_grads = EncoderGrads::zeros_like(m.encoder);
        encode_backward(m.encoder, sub, enc_cache, dV, enc_grads);

        std::vector<Dense*> params = m.discriminator_params();
        std::vector<Dense*> grad_ptrs = enc_grads.flat();
        for (Dense* p : clf_grads.flat()) grad_ptrs.push_back(p);
        std::vector<const Dense*> grads_const(grad_ptrs.begin(), grad_ptrs.end());
        state.opt_dis.step(params, grads_const);
    }

    // --- generator update ------------------------------------------------
    if (cfg.use_generated_negatives) {
        MlpGrads clf_scratch = MlpGrads::zeros_like(m.classifier);
        if (cfg.variant == Variant::Gns) {
            MlpCache score_cache;
            const Dense s_col = mlp_forward(m.classifier, gns_latents, &score_cache);
            losses.neg = generator_adversarial_loss(s_col.v);
            losses.diff = 0.0;
            Dense upstream(n_pos, 1);
            upstream.fill(-1.0 / static_cast<double>(n_pos));
            Dense d_latents = mlp_backward(m.classifier, score_cache, upstream, clf_scratch);
            MlpGrads ng_grads = MlpGrads::zeros_like(m.noise_gen);
            mlp_backward(m.noise_gen, gns_cache, d_latents, ng_grads);
            std::vector<Dense*> params = m.noise_gen.params();
            std::vector<Dense*> grad_ptrs = ng_grads.flat();
            std::vector<const Dense*> grads_const(grad_ptrs.begin(), grad_ptrs.end());
            state.opt_gen.step(params, grads_const);
        } else {
            const std::size_t T = cfg.diffusion_steps;
            const std::size_t rows_per = T + 1;
            Dense states(n_pos * rows_per, h);
            for (std::size_t p = 0; p < n_pos; ++p)
                for (std::size_t t = 0; t <= T; ++t)
                    std::copy(gen.chains[p].states[t].begin(), gen.chains[p].states[t].end(),
                              states.row(p * rows_per + t));

            MlpCache score_cache;
            const Dense s_col = mlp_forward(m.classifier, states, &score_cache);

            std::vector<double> final_scores(n_pos);
            std::vector<std::vector<double>> chains_scores(n_pos,
                                                           std::vector<double>(rows_per));
            for (std::size_t p = 0; p < n_pos; ++p) {
                for (std::size_t t = 0; t <= T; ++t)
                    chains_scores[p][t] = s_col.v[p * rows_per + t];
                final_scores[p] = chains_scores[p][T];
            }
            losses.neg = generator_adversarial_loss(final_scores);
            losses.diff = boundary_loss(chains_scores);
            if (!std::isfinite(losses.neg) || !std::isfinite(losses.diff))
                throw std::runtime_error("train_step: non-finite generator loss");

            // d(L_gen)/d(s^t): adversarial term on the final state, boundary
            // term through each log ratio (zero where the clamp saturates)
            Dense upstream(n_pos * rows_per, 1);
            const double inv_n = 1.0 / static_cast<double>(n_pos);
            const double inv_nt = 1.0 / static_cast<double>(n_pos * T);
            const auto in_range = [](double s) {
                return s > kScoreClampEps && s < 1.0 - kScoreClampEps;
            };
            for (std::size_t p = 0; p < n_pos; ++p) {
                double* u = &upstream.v[p * rows_per];
                u[T] += -inv_n;
                for (std::size_t t = 1; t <= T; ++t) {
                    const double prev = chains_scores[p][t - 1];
                    const double cur = chains_scores[p][t];
                    if (in_range(prev)) u[t - 1] += inv_nt / prev;
                    if (in_range(cur)) u[t] += -inv_nt / cur;
                }
            }

            Dense d_states = mlp_backward(m.classifier, score_cache, upstream, clf_scratch);
            MlpGrads den_grads = MlpGrads::zeros_like(m.denoiser);
            for (std::size_t p = 0; p < n_pos; ++p) {
                std::vector<std::vector<double>> ds(rows_per);
                for (std::size_t t = 0; t <= T; ++t) {
                    const double* row = d_states.row(p * rows_per + t);
                    ds[t].assign(row, row + h);
                }
                denoise_chain_backward(m.denoiser, gen.chain_caches[p], ds, den_grads,
                                       cfg.timestep_input);
            }
            std::vector<Dense*> params = m.denoiser.params();
            std::vector<Dense*> grad_ptrs = den_grads.flat();
            std::vector<const Dense*> grads_const(grad_ptrs.begin(), grad_ptrs.end());
            state.opt_gen.step(params, grads_const);
        }
    }

    ++state.global_step;
    return losses;
}

EvalTable evaluate(const Models& models, const Hypergraph& g,
                   std::span<const EdgeId> positive_ids, const TrainConfig& cfg,
                   std::span<const NegStrategy> strategies, std::uint64_t seed,
                   bool strict_precision) {
    if (positive_ids.empty()) throw std::invalid_argument("evaluate: empty positive set");
    const ForbiddenSet observed(g);

    std::vector<EvalSet> sets;
    for (NegStrategy s : strategies)
        sets.push_back(build_eval_set(g, positive_ids, s, observed,
                                      derive_seed(seed, "neg:" + strategy_name(s))));

    // cover the positive set in batches of batch_size, negatives routed with
    // their paired positive
    std::vector<std::size_t> order(positive_ids.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, "order"));
    rng.shuffle(order);

    std::vector<double> pos_scores(positive_ids.size());
    std::vector<std::vector<double>> neg_scores(sets.size(),
                                                std::vector<double>(positive_ids.size()));

    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
        const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
        std::vector<EdgeId> chunk_edges;
        for (std::size_t i = begin; i < end; ++i)
            chunk_edges.push_back(positive_ids[order[i]]);
        SubHypergraph sub = SubHypergraph::from_edges(g, chunk_edges);
        for (std::size_t si = 0; si < sets.size(); ++si)
            for (std::size_t i = begin; i < end; ++i)
                sub.extend_nodes(sets[si].negatives[order[i]].nodes);

        const Dense V = encode_nodes(models.encoder, sub, sub.gather_features());

        const std::size_t chunk = end - begin;
        const std::size_t rows = chunk * (1 + sets.size());
        Dense emb(rows, V.cols);
        std::size_t r = 0;
        for (std::size_t i = begin; i < end; ++i, ++r) {
            const auto e = aggregate_hyperedge(V, sub.local_edges[i - begin]);
            std::copy(e.begin(), e.end(), emb.row(r));
        }
        for (std::size_t si = 0; si < sets.size(); ++si) {
            for (std::size_t i = begin; i < end; ++i, ++r) {
                std::vector<std::uint32_t> locals;
                for (NodeId v : sets[si].negatives[order[i]].nodes)
                    locals.push_back(sub.local_of(v));
                const auto e = aggregate_hyperedge(V, locals);
                std::copy(e.begin(), e.end(), emb.row(r));
            }
        }
        const Dense s_col = mlp_forward(models.classifier, emb);
        r = 0;
        for (std::size_t i = begin; i < end; ++i, ++r) pos_scores[order[i]] = s_col.v[r];
        for (std::size_t si = 0; si < sets.size(); ++si)
            for (std::size_t i = begin; i < end; ++i, ++r)
                neg_scores[si][order[i]] = s_col.v[r];
    }

    EvalTable table;
    for (std::size_t si = 0; si < sets.size(); ++si) {
        std::vector<double> scores = pos_scores;
        scores.insert(scores.end(), neg_scores[si].begin(), neg_scores[si].end());
        std::vector<int> labels(pos_scores.size(), 1);
        labels.resize(scores.size(), 0);
        StrategyResult row;
        row.strategy = sets[si].strategy;
        row.auroc = auroc(scores, labels);
        const bool any_predicted =
            std::any_of(scores.begin(), scores.end(), [](double s) { return s >= 0.5; });
        if (any_predicted || strict_precision)
            row.precision = precision_at(scores, labels, 0.5);
        else
            row.precision = std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back(row);
        table.ave_auroc += row.auroc;
        table.ave_precision += row.precision;
    }
    table.ave_auroc /= static_cast<double>(table.rows.size());
    table.ave_precision /= static_cast<double>(table.rows.size());
    return table;
}

std::vector<std::vector<double>> boundary_trace(const Models& models, const Hypergraph& g,
                                                std::span<const EdgeId> edge_ids,
                                                const TrainConfig& cfg, std::size_t batches,
                                                std::uint64_t seed) {
    GenOptions opts = options_for(cfg);
    std::vector<std::vector<double>> trace;
    for (std::size_t b = 0; b < batches; ++b) {
        SubHypergraph sub = sample_sub_hypergraph(g, edge_ids, cfg.batch_size,
                                                  derive_seed(seed, "trace", b));
        const Dense V = encode_nodes(models.encoder, sub, sub.gather_features());
        std::vector<double> condition(V.cols, 0.0);
        if (opts.use_condition) condition = readout_condition(V);

        std::vector<double> mean(cfg.diffusion_steps + 1, 0.0);
        for (std::size_t p = 0; p < sub.edge_ids.size(); ++p) {
            const auto h0 = aggregate_hyperedge(V, sub.local_edges[p]);
            const LatentNegative chain =
                denoise_chain(models.denoiser, h0, condition, cfg.diffusion_steps,
                              models.classifier, cfg.timestep_input);
            for (std::size_t t = 0; t < chain.scores.size(); ++t) mean[t] += chain.scores[t];
        }
        for (double& x : mean) x /= static_cast<double>(sub.edge_ids.size());
        trace.push_back(std::move(mean));
    }
    return trace;
}

TrainResult train(const Hypergraph& g, const Split& split, const TrainConfig& cfg) {
    return train_from_state(make_train_state(g, cfg), g, split, cfg);
}

TrainResult train_from_state(TrainState state, const Hypergraph& g, const Split& split,
                             const TrainConfig& cfg, double best_so_far) {
    cfg.validate();
    if (split.train.empty()) throw std::invalid_argument("train: empty training split");

    const std::size_t steps_per_epoch =
        (split.train.size() + cfg.batch_size - 1) / cfg.batch_size;
    const std::uint64_t val_seed = derive_seed(cfg.seed, "val_eval");

    TrainResult result;
    result.best = state.models;
    result.best_val_auroc = best_so_far;

    double train_seconds = 0.0;
    const std::size_t first_epoch = state.global_step / steps_per_epoch;
    for (std::size_t epoch = first_epoch; epoch < cfg.epochs; ++epoch) {
        double sum_dis = 0.0, sum_neg = 0.0, sum_diff = 0.0;
        std::size_t steps_done = 0;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t s = 0; s < steps_per_epoch; ++s) {
                const StepLosses l = train_step(state, g, split.train, cfg);
                sum_dis += l.dis;
                sum_neg += l.neg;
                sum_diff += l.diff;
                ++steps_done;
            }
            train_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                 .count();
        } catch (const std::runtime_error& e) {
            std::fprintf(stderr, "training aborted at epoch %zu: %s\n", epoch, e.what());
            result.aborted = true;
            break;
        }

        const bool last_epoch = epoch + 1 == cfg.epochs;
        if ((epoch + 1) % cfg.eval_every == 0 || last_epoch) {
            const EvalTable table = evaluate(state.models, g, split.val, cfg,
                                             cfg.eval_strategies, val_seed,
                                             /*strict_precision=*/false);
            HistoryRow row;
            row.epoch = epoch;
            row.step = state.global_step;
            row.loss_dis = sum_dis / static_cast<double>(steps_done);
            row.loss_neg = sum_neg / static_cast<double>(steps_done);
            row.loss_diff = sum_diff / static_cast<double>(steps_done);
            row.val = table.rows;
            row.val_ave_auroc = table.ave_auroc;
            row.val_ave_precision = table.ave_precision;
            row.wall_seconds = train_seconds;
            result.history.push_back(row);
            if (table.ave_auroc > result.best_val_auroc) {
                result.best_val_auroc = table.ave_auroc;
                result.best = state.models;
            }
        }
    }
    result.final_state = std::move(state);
    return result;
}

void save_history_csv(std::span<const HistoryRow> history,
                      std::span<const NegStrategy> strategies,
                      const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << "epoch,step,L_dis,L_neg,L_diff";
    for (NegStrategy s : strategies) os << ",val_auroc_" << strategy_name(s);
    for (NegStrategy s : strategies) os << ",val_precision_" << strategy_name(s);
    os << ",wall_seconds\n";
    os.precision(10);
    for (const HistoryRow& row : history) {
        os << row.epoch << ',' << row.step << ',' << row.loss_dis << ',' << row.loss_neg << ','
           << row.loss_diff;
        for (const StrategyResult& r : row.val) os << ',' << r.auroc;
        for (const StrategyResult& r : row.val) os << ',' << r.precision;
        os << ',' << row.wall_seconds << '\n';
    }
}

}  // namespace sehp
