#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "artforge/chain.hpp"

namespace artforge {

// All generated blocks tick at block_interval seconds from this epoch.
constexpr std::uint64_t kGenesisTimestamp = 1'500'000'000;

struct GenConfig {
    std::uint64_t n_background_txs = 0;
    std::uint32_t ring_size = 5;
    std::uint32_t outputs_per_tx = 2;
    std::uint32_t inputs_min = 1;
    std::uint32_t inputs_max = 2;
    std::uint64_t block_interval = 120;        // seconds
    double decoy_recency_scale = 259'200.0;    // seconds; exponential age scale
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws ConfigError
};

// Three-phase planted behavior: entering -> consolidating -> exiting.
// Defaults: 8 + 3 + 8 transactions, 14 days to consolidation, 77 more to exit.
struct PatternConfig {
    std::uint32_t n_entering = 8;
    std::uint32_t n_consolidating = 3;
    std::uint32_t n_exiting = 8;
    std::int64_t gap_enter_to_consolidate = 14 * 86'400;
    std::int64_t gap_consolidate_to_exit = 77 * 86'400;
    // Rings per consolidating tx; 0 = ceil(n_entering / n_consolidating).
    std::uint32_t consolidating_inputs = 0;
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws ConfigError
};

// A generated ledger plus its spend ground truth. The bookkeeping fields keep
// enough state for inject_pattern to extend the chain consistently; they are
// never serialized into the snapshot, so the analysis side cannot cheat.
struct SynthChain {
    GenConfig cfg;
    std::vector<TxRecord> txs;  // snapshot file order: (height, intra-block)

    // tx_id -> true-spend member position, one entry per ring.
    std::unordered_map<std::string, std::vector<std::uint32_t>> truth;

    struct OutputInfo {
        std::uint64_t timestamp = 0;
        std::uint64_t height = 0;
        bool spent = false;  // spent by ground truth
    };
    std::vector<OutputInfo> outputs;  // dense, indexed by global output index

    std::uint64_t bootstrap_blocks = 0;
    std::uint64_t last_height = 0;

    // Decoy sampler state: prefix sums of exp((t - weight_base)/scale) over
    // the first bg_output_count outputs (allocation order == height order).
    std::vector<double> cum_weight;
    double weight_base = 0.0;
    std::uint64_t bg_output_count = 0;
    std::vector<OutputIndex> planted_outputs;

    std::string snapshot_bytes() const;
    // `.truth.jsonl`: {"tx_id":...,"ring":...,"true_member_pos":...} per ring,
    // in snapshot file order.
    std::string truth_bytes() const;
};

struct PlantResult {
    std::vector<std::string> entering;
    std::vector<std::string> consolidating;
    std::vector<std::string> exiting;

    std::vector<std::string> all() const;
};

// Deterministic for a fixed cfg.rng_seed. Bootstraps with enough coinbase
// outputs to make the first rings feasible; throws InfeasibleError when the
// unspent pool cannot cover a transaction's inputs.
SynthChain generate_chain(const GenConfig& cfg);

// Plants the three-phase pattern inside the existing chain span. Planted
// transactions are inserted into existing blocks (block-aligned timestamps,
// fresh global output indexes), so the augmented snapshot re-parses cleanly
// and every pre-existing record stays byte-identical in its original order.
PlantResult inject_pattern(SynthChain& chain, const PatternConfig& p);

// `tx_id,label` CSV, one row per id.
std::string labels_csv(const std::vector<std::pair<std::string, int>>& rows);

}  // namespace artforge
