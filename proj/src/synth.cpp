#include "artforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "artforge/errors.hpp"
#include "artforge/io_util.hpp"
#include "artforge/rng.hpp"

namespace artforge {

namespace {

constexpr std::uint64_t kFeeLo = 1'000'000;
constexpr std::uint64_t kFeeHi = 50'000'000;
constexpr std::int64_t kPhaseJitter = 10'800;  // +/- 3 h around each phase time
// Blocks of background history guaranteed before the first planted tx, so
// entering transactions always find spendable outputs and decoy candidates.
constexpr std::uint64_t kPatternLeadBlocks = 64;
// Rebase the recency weights before exp() can overflow.
constexpr double kMaxExponent = 600.0;

std::string random_tx_id(Rng& rng) {
    static const char* hex = "0123456789abcdef";
    std::string id(64, '0');
    for (int w = 0; w < 4; ++w) {
        std::uint64_t v = rng.next_u64();
        for (int i = 0; i < 16; ++i) {
            id[w * 16 + i] = hex[v & 0xf];
            v >>= 4;
        }
    }
    return id;
}

// Weighted decoy sampling over prior outputs, weight exp(-age/scale).
// Weights are stored as prefix sums of exp((t - base)/scale); the base moves
// forward when exponents grow too large, which underflows outputs whose
// relative weight is below ~1e-260 anyway.
struct DecoySampler {
    SynthChain& chain;

    double weight(std::uint64_t t) const {
        return std::exp((static_cast<double>(t) - chain.weight_base) /
                        chain.cfg.decoy_recency_scale);
    }

    void push_background(std::uint64_t t) {
        const double scale = chain.cfg.decoy_recency_scale;
        if (chain.cum_weight.empty()) chain.weight_base = static_cast<double>(t);
        double expo = (static_cast<double>(t) - chain.weight_base) / scale;
        if (expo > kMaxExponent) {
            const double new_base = static_cast<double>(t) - kMaxExponent / 2.0 * scale;
            const double factor = std::exp((chain.weight_base - new_base) / scale);
            for (double& c : chain.cum_weight) c *= factor;
            chain.weight_base = new_base;
        }
        const double prev = chain.cum_weight.empty() ? 0.0 : chain.cum_weight.back();
        chain.cum_weight.push_back(prev + weight(t));
        ++chain.bg_output_count;
    }

    // Number of background outputs produced strictly below `height`
    // (allocation order is height order for background outputs).
    std::size_t background_cut(std::uint64_t height) const {
        auto begin = chain.outputs.begin();
        auto end = begin + static_cast<std::ptrdiff_t>(chain.bg_output_count);
        auto it = std::lower_bound(begin, end, height,
                                   [](const SynthChain::OutputInfo& info, std::uint64_t h) {
                                       return info.height < h;
                                   });
        return static_cast<std::size_t>(it - begin);
    }

    std::vector<OutputIndex> eligible_planted(std::uint64_t height) const {
        std::vector<OutputIndex> out;
        for (OutputIndex g : chain.planted_outputs)
            if (chain.outputs[g].height < height) out.push_back(g);
        return out;
    }

    // One draw among all outputs produced strictly below `height`.
    OutputIndex sample(std::uint64_t height, Rng& rng) const {
        const std::size_t cut = background_cut(height);
        const auto planted = eligible_planted(height);
        const double bg_total = cut == 0 ? 0.0 : chain.cum_weight[cut - 1];
        double planted_total = 0.0;
        for (OutputIndex g : planted) planted_total += weight(chain.outputs[g].timestamp);
        const double total = bg_total + planted_total;
        if (!(total > 0.0) || !std::isfinite(total)) {
            // Every candidate underflowed; their relative weights are
            // numerically indistinguishable, fall back to uniform.
            const std::size_t n = cut + planted.size();
            if (n == 0) throw InfeasibleError("no prior outputs available for decoys");
            const std::size_t k = static_cast<std::size_t>(rng.below(n));
            return k < cut ? static_cast<OutputIndex>(k) : planted[k - cut];
        }
        const double r = rng.real01() * total;
        if (r < bg_total) {
            auto begin = chain.cum_weight.begin();
            auto it = std::upper_bound(begin, begin + static_cast<std::ptrdiff_t>(cut), r);
            std::size_t idx = static_cast<std::size_t>(it - begin);
            if (idx >= cut) idx = cut - 1;
            return static_cast<OutputIndex>(idx);
        }
        double acc = bg_total;
        for (OutputIndex g : planted) {
            acc += weight(chain.outputs[g].timestamp);
            if (r < acc) return g;
        }
        return planted.back();
    }

    std::size_t eligible_count(std::uint64_t height) const {
        return background_cut(height) + eligible_planted(height).size();
    }
};

// Fills `members` (already holding the true spend and any forced member) with
// weighted decoys up to ring_size, all distinct.
Ring assemble_ring(SynthChain& chain, const DecoySampler& sampler, std::uint64_t height,
                   std::vector<OutputIndex> members, Rng& rng) {
    const std::uint32_t ring_size = chain.cfg.ring_size;
    if (sampler.eligible_count(height) < ring_size)
        throw InfeasibleError("fewer prior outputs than ring_size");
    std::unordered_set<OutputIndex> taken(members.begin(), members.end());
    while (members.size() < ring_size) {
        bool placed = false;
        for (int attempt = 0; attempt < 64; ++attempt) {
            const OutputIndex g = sampler.sample(height, rng);
            if (taken.insert(g).second) {
                members.push_back(g);
                placed = true;
                break;
            }
        }
        if (!placed) {
            // Exact conditional draw over the not-yet-taken candidates.
            const std::size_t cut = sampler.background_cut(height);
            const auto planted = sampler.eligible_planted(height);
            std::vector<OutputIndex> candidates;
            std::vector<double> weights;
            double total = 0.0;
            for (std::size_t g = 0; g < cut; ++g) {
                if (taken.count(g)) continue;
                candidates.push_back(static_cast<OutputIndex>(g));
                total += sampler.weight(chain.outputs[g].timestamp);
                weights.push_back(total);
            }
            for (OutputIndex g : planted) {
                if (taken.count(g)) continue;
                candidates.push_back(g);
                total += sampler.weight(chain.outputs[g].timestamp);
                weights.push_back(total);
            }
            if (candidates.empty()) throw InfeasibleError("decoy candidates exhausted");
            std::size_t idx;
            if (!(total > 0.0) || !std::isfinite(total)) {
                idx = static_cast<std::size_t>(rng.below(candidates.size()));
            } else {
                const double r = rng.real01() * total;
                idx = static_cast<std::size_t>(
                    std::upper_bound(weights.begin(), weights.end(), r) - weights.begin());
                if (idx >= candidates.size()) idx = candidates.size() - 1;
            }
            taken.insert(candidates[idx]);
            members.push_back(candidates[idx]);
        }
    }
    Ring ring;
    ring.members = std::move(members);
    std::sort(ring.members.begin(), ring.members.end());
    return ring;
}

std::uint32_t member_position(const Ring& ring, OutputIndex g) {
    const auto it = std::find(ring.members.begin(), ring.members.end(), g);
    return static_cast<std::uint32_t>(it - ring.members.begin());
}

}  // namespace

void GenConfig::validate() const {
    if (ring_size < 1) throw ConfigError("ring_size must be >= 1");
    if (outputs_per_tx < 1) throw ConfigError("outputs_per_tx must be >= 1");
    if (inputs_min < 1) throw ConfigError("inputs_per_tx min must be >= 1");
    if (inputs_min > inputs_max) throw ConfigError("inputs_per_tx range is inverted");
    if (block_interval < 1) throw ConfigError("block_interval must be >= 1");
    if (!(decoy_recency_scale > 0.0)) throw ConfigError("decoy_recency_scale must be > 0");
}

void PatternConfig::validate() const {
    if (n_entering < 1 || n_consolidating < 1 || n_exiting < 1)
        throw ConfigError("every pattern phase needs at least one transaction");
    // Phases must stay ordered after +/-3h jitter on both ends.
    if (gap_enter_to_consolidate <= 2 * kPhaseJitter ||
        gap_consolidate_to_exit <= 2 * kPhaseJitter)
        throw ConfigError("pattern gaps must exceed the 6-hour jitter window");
}

SynthChain generate_chain(const GenConfig& cfg) {
    cfg.validate();
    SynthChain chain;
    chain.cfg = cfg;
    Rng rng(cfg.rng_seed);
    DecoySampler sampler{chain};
    std::vector<OutputIndex> unspent;

    auto allocate_outputs = [&](TxRecord& tx, std::uint64_t ts, std::uint64_t height,
                                bool background) {
        for (std::uint32_t i = 0; i < cfg.outputs_per_tx; ++i) {
            const OutputIndex g = chain.outputs.size();
            tx.outputs.push_back(g);
            chain.outputs.push_back({ts, height, false});
            if (background) sampler.push_background(ts);
            unspent.push_back(g);
        }
    };

    const std::uint64_t need_outputs =
        static_cast<std::uint64_t>(std::max(cfg.ring_size, cfg.inputs_max)) + 2;
    chain.bootstrap_blocks = (need_outputs + cfg.outputs_per_tx - 1) / cfg.outputs_per_tx;

    for (std::uint64_t b = 0; b < chain.bootstrap_blocks; ++b) {
        TxRecord tx;
        tx.tx_id = random_tx_id(rng);
        tx.height = b;
        tx.timestamp = kGenesisTimestamp + b * cfg.block_interval;
        tx.fee = 0;
        allocate_outputs(tx, tx.timestamp, tx.height, true);
        chain.truth.emplace(tx.tx_id, std::vector<std::uint32_t>{});
        chain.txs.push_back(std::move(tx));
    }

    for (std::uint64_t i = 0; i < cfg.n_background_txs; ++i) {
        const std::uint64_t height = chain.bootstrap_blocks + i;
        const std::uint64_t ts = kGenesisTimestamp + height * cfg.block_interval;

        TxRecord tx;
        tx.tx_id = random_tx_id(rng);
        tx.height = height;
        tx.timestamp = ts;
        tx.fee = rng.between(kFeeLo, kFeeHi);

        if (unspent.size() < cfg.inputs_min)
            throw InfeasibleError("unspent pool exhausted at background tx " +
                                  std::to_string(i));
        const std::uint64_t hi =
            std::min<std::uint64_t>(cfg.inputs_max, unspent.size());
        const std::uint64_t n_inputs = rng.between(cfg.inputs_min, hi);

        std::vector<std::uint32_t> true_positions;
        for (std::uint64_t r = 0; r < n_inputs; ++r) {
            const std::size_t pick = static_cast<std::size_t>(rng.below(unspent.size()));
            const OutputIndex spend = unspent[pick];
            unspent[pick] = unspent.back();
            unspent.pop_back();
            chain.outputs[spend].spent = true;

            Ring ring = assemble_ring(chain, sampler, height, {spend}, rng);
            true_positions.push_back(member_position(ring, spend));
            tx.rings.push_back(std::move(ring));
        }
        allocate_outputs(tx, ts, height, true);
        chain.truth.emplace(tx.tx_id, std::move(true_positions));
        chain.txs.push_back(std::move(tx));
    }

    chain.last_height = chain.txs.empty() ? 0 : chain.txs.back().height;
    return chain;
}

PlantResult inject_pattern(SynthChain& chain, const PatternConfig& p) {
    p.validate();
    if (chain.txs.empty()) throw InfeasibleError("cannot inject into an empty chain");

    const GenConfig& cfg = chain.cfg;
    const std::uint64_t interval = cfg.block_interval;
    const std::uint64_t t_max = chain.txs.back().timestamp;
    const std::uint64_t enter_center = kGenesisTimestamp +
                                       (chain.bootstrap_blocks + kPatternLeadBlocks) * interval +
                                       kPhaseJitter;
    const std::uint64_t cons_center =
        enter_center + static_cast<std::uint64_t>(p.gap_enter_to_consolidate);
    const std::uint64_t exit_center =
        cons_center + static_cast<std::uint64_t>(p.gap_consolidate_to_exit);
    if (exit_center + kPhaseJitter > t_max)
        throw InfeasibleError("window too short: chain ends before the exit phase");

    Rng rng(p.rng_seed);
    DecoySampler sampler{chain};

    auto phase_heights = [&](std::uint32_t count, std::uint64_t center) {
        std::vector<std::uint64_t> heights;
        heights.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            const double offset = rng.real01() * (2.0 * kPhaseJitter);
            const std::uint64_t t =
                center - kPhaseJitter + static_cast<std::uint64_t>(offset);
            std::uint64_t h = (t - kGenesisTimestamp) / interval;
            h = std::clamp<std::uint64_t>(h, chain.bootstrap_blocks, chain.last_height);
            heights.push_back(h);
        }
        std::sort(heights.begin(), heights.end());
        return heights;
    };

    // Planted fallback spends draw from background outputs only, so feed
    // outputs can never be true-spent twice.
    auto pick_unspent_below = [&](std::uint64_t height) -> OutputIndex {
        std::vector<OutputIndex> eligible;
        for (OutputIndex g = 0; g < chain.bg_output_count; ++g)
            if (!chain.outputs[g].spent && chain.outputs[g].height < height)
                eligible.push_back(g);
        if (eligible.empty())
            throw InfeasibleError("no unspent outputs available for a planted tx");
        return eligible[rng.below(eligible.size())];
    };

    auto insert_tx = [&](TxRecord tx) {
        auto it = std::upper_bound(chain.txs.begin(), chain.txs.end(), tx.height,
                                   [](std::uint64_t h, const TxRecord& t) {
                                       return h < t.height;
                                   });
        chain.txs.insert(it, std::move(tx));
    };

    // feed: outputs of the previous phase, consumed round-robin across that
    // phase's transactions so every one of them gets referenced.
    struct PhaseFeed {
        std::vector<OutputIndex> order;
        std::size_t cursor = 0;
    };
    auto make_feed = [&](const std::vector<std::vector<OutputIndex>>& per_tx) {
        PhaseFeed feed;
        for (std::uint32_t pos = 0; pos < cfg.outputs_per_tx; ++pos)
            for (const auto& outs : per_tx) feed.order.push_back(outs[pos]);
        return feed;
    };

    std::vector<std::vector<OutputIndex>> phase_outputs;
    auto build_phase = [&](std::uint32_t count, std::uint64_t center, PhaseFeed* feed,
                           std::uint32_t fixed_inputs) {
        std::vector<std::string> ids;
        std::vector<std::vector<OutputIndex>> new_outputs;
        for (std::uint64_t height : phase_heights(count, center)) {
            const std::uint64_t ts = kGenesisTimestamp + height * interval;
            TxRecord tx;
            tx.tx_id = random_tx_id(rng);
            tx.height = height;
            tx.timestamp = ts;
            tx.fee = rng.between(kFeeLo, kFeeHi);

            std::uint64_t n_inputs = fixed_inputs;
            if (n_inputs == 0) n_inputs = rng.between(cfg.inputs_min, cfg.inputs_max);

            bool linked = feed == nullptr;  // entering txs have no feed to link to
            std::vector<std::uint32_t> true_positions;
            for (std::uint64_t r = 0; r < n_inputs; ++r) {
                OutputIndex spend;
                std::vector<OutputIndex> seed_members;
                if (feed && feed->cursor < feed->order.size()) {
                    spend = feed->order[feed->cursor++];
                    linked = true;
                    seed_members = {spend};
                } else {
                    spend = pick_unspent_below(height);
                    seed_members = {spend};
                    // Last chance to satisfy the phase linkage: reference a
                    // previous-phase output as a decoy.
                    if (feed && !linked && r + 1 == n_inputs) {
                        if (cfg.ring_size < 2)
                            throw InfeasibleError(
                                "pattern linkage needs ring_size >= 2 once previous-phase "
                                "outputs are all spent");
                        OutputIndex forced =
                            feed->order[rng.below(feed->order.size())];
                        if (forced != spend) seed_members.push_back(forced);
                        linked = true;
                    }
                }
                chain.outputs[spend].spent = true;
                Ring ring = assemble_ring(chain, sampler, height, std::move(seed_members), rng);
                true_positions.push_back(member_position(ring, spend));
                tx.rings.push_back(std::move(ring));
            }

            std::vector<OutputIndex> outs;
            for (std::uint32_t i = 0; i < cfg.outputs_per_tx; ++i) {
                const OutputIndex g = chain.outputs.size();
                tx.outputs.push_back(g);
                outs.push_back(g);
                chain.outputs.push_back({ts, height, false});
                chain.planted_outputs.push_back(g);
            }
            new_outputs.push_back(std::move(outs));

            chain.truth.emplace(tx.tx_id, std::move(true_positions));
            ids.push_back(tx.tx_id);
            insert_tx(std::move(tx));
        }
        phase_outputs = std::move(new_outputs);
        return ids;
    };

    PlantResult result;
    result.entering = build_phase(p.n_entering, enter_center, nullptr, 0);
    PhaseFeed entering_feed = make_feed(phase_outputs);

    std::uint32_t cons_inputs = p.consolidating_inputs;
    if (cons_inputs == 0)
        cons_inputs = (p.n_entering + p.n_consolidating - 1) / p.n_consolidating;
    result.consolidating = build_phase(p.n_consolidating, cons_center, &entering_feed, cons_inputs);
    PhaseFeed cons_feed = make_feed(phase_outputs);

    result.exiting = build_phase(p.n_exiting, exit_center, &cons_feed, 0);
    return result;
}

std::vector<std::string> PlantResult::all() const {
    std::vector<std::string> ids;
    ids.reserve(entering.size() + consolidating.size() + exiting.size());
    ids.insert(ids.end(), entering.begin(), entering.end());
    ids.insert(ids.end(), consolidating.begin(), consolidating.end());
    ids.insert(ids.end(), exiting.begin(), exiting.end());
    return ids;
}

std::string SynthChain::snapshot_bytes() const {
    std::string out;
    out.reserve(txs.size() * 192);
    for (const TxRecord& tx : txs) append_snapshot_line(out, tx);
    return out;
}

std::string SynthChain::truth_bytes() const {
    std::string out;
    for (const TxRecord& tx : txs) {
        const auto it = truth.find(tx.tx_id);
        if (it == truth.end()) continue;
        for (std::size_t r = 0; r < it->second.size(); ++r) {
            out += "{\"tx_id\":\"";
            out += tx.tx_id;
            out += "\",\"ring\":";
            append_u64(out, r);
            out += ",\"true_member_pos\":";
            append_u64(out, it->second[r]);
            out += "}\n";
        }
    }
    return out;
}

std::string labels_csv(const std::vector<std::pair<std::string, int>>& rows) {
    std::string out = "tx_id,label\n";
    for (const auto& [id, label] : rows) {
        out += id;
        out += ',';
        append_u64(out, static_cast<std::uint64_t>(label));
        out += '\n';
    }
    return out;
}

}  // namespace artforge
