#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace artforge {

// Chain-wide sequential identifier of a transaction output. One-time stealth
// addresses are modeled as these opaque indexes; no key material is kept.
using OutputIndex = std::uint64_t;

// One transaction input: the referenced outputs, exactly one of which is the
// real spend and the rest decoys. Members are unique within a ring.
struct Ring {
    std::vector<OutputIndex> members;
};

struct TxRecord {
    std::string tx_id;
    std::uint64_t height = 0;
    std::uint64_t timestamp = 0;  // seconds since epoch
    std::uint64_t fee = 0;        // atomic units
    std::vector<Ring> rings;      // empty for coinbase
    std::vector<OutputIndex> outputs;

    bool is_coinbase() const { return rings.empty(); }

    bool operator==(const TxRecord& other) const = default;
};

// Where an output was created: transaction + position in its output list.
struct OutputSite {
    std::uint32_t tx_index = 0;  // index into ChainStore order
    std::uint32_t position = 0;
};

// One ring referencing an output: transaction + ring position.
struct RingSite {
    std::uint32_t tx_index = 0;
    std::uint32_t ring_pos = 0;

    bool operator==(const RingSite&) const = default;
};

// Immutable, fully indexed snapshot of a chain. Construction validates every
// invariant; afterwards the store is safe for unlimited concurrent readers.
class ChainStore {
public:
    static ChainStore parse_snapshot(std::istream& in);
    static ChainStore parse_snapshot_file(const std::string& path);

    std::size_t tx_count() const { return txs_.size(); }
    const std::vector<TxRecord>& transactions() const { return txs_; }
    const TxRecord& tx_at(std::size_t index) const { return txs_[index]; }

    bool contains(const std::string& tx_id) const { return by_id_.count(tx_id) != 0; }
    // Throws UnknownTxError.
    const TxRecord& tx(const std::string& tx_id) const;
    std::size_t tx_index(const std::string& tx_id) const;

    bool has_output(OutputIndex g) const { return producer_.count(g) != 0; }

    // The unique transaction that created output g. Throws UnknownOutputError.
    const TxRecord& producing_tx(OutputIndex g) const;
    OutputSite producer_site(OutputIndex g) const;

    // Every ring containing g, ordered by (height, tx_id, ring position).
    // Empty for outputs that were never referenced. Throws UnknownOutputError
    // if g was never produced.
    const std::vector<RingSite>& rings_referencing(OutputIndex g) const;

    std::pair<std::uint64_t, std::uint64_t> span() const { return span_; }
    std::uint64_t output_count() const { return producer_.size(); }

    // Canonical snapshot form: one line per transaction in store order, keys
    // in fixed order, no whitespace. parse(serialize(s)) == s, bit for bit.
    void serialize_snapshot(std::ostream& out) const;

private:
    std::vector<TxRecord> txs_;  // file order: (height, intra-block position)
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<OutputIndex, OutputSite> producer_;
    std::unordered_map<OutputIndex, std::vector<RingSite>> referencing_;
    std::pair<std::uint64_t, std::uint64_t> span_{0, 0};

    static const std::vector<RingSite>& empty_ring_list();
};

// Canonical one-line JSON encoding of a transaction record.
void append_snapshot_line(std::string& out, const TxRecord& tx);

}  // namespace artforge
