#include "artforge/chain.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "artforge/errors.hpp"
#include "artforge/io_util.hpp"

namespace artforge {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t require_u64(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(line_no, std::string("missing key '") + key + "'");
    if (!it->is_number_unsigned())
        fail(line_no, std::string("'") + key + "' must be a non-negative integer");
    return it->get<std::uint64_t>();
}

bool valid_tx_id(const std::string& id) {
    if (id.empty()) return false;
    for (unsigned char c : id)
        if (c <= 0x20 || c == 0x7f) return false;  // no whitespace or control chars
    return true;
}

}  // namespace

void append_snapshot_line(std::string& out, const TxRecord& tx) {
    out += "{\"tx_id\":\"";
    out += tx.tx_id;
    out += "\",\"height\":";
    append_u64(out, tx.height);
    out += ",\"timestamp\":";
    append_u64(out, tx.timestamp);
    out += ",\"fee\":";
    append_u64(out, tx.fee);
    out += ",\"rings\":[";
    for (std::size_t r = 0; r < tx.rings.size(); ++r) {
        if (r) out += ',';
        out += '[';
        const auto& members = tx.rings[r].members;
        for (std::size_t m = 0; m < members.size(); ++m) {
            if (m) out += ',';
            append_u64(out, members[m]);
        }
        out += ']';
    }
    out += "],\"outputs\":[";
    for (std::size_t o = 0; o < tx.outputs.size(); ++o) {
        if (o) out += ',';
        append_u64(out, tx.outputs[o]);
    }
    out += "]}\n";
}

ChainStore ChainStore::parse_snapshot(std::istream& in) {
    ChainStore store;
    std::string line;
    std::size_t line_no = 0;
    bool have_prev = false;
    std::uint64_t prev_height = 0;
    std::uint64_t prev_timestamp = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) fail(line_no, "empty line");

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) fail(line_no, "record must be a JSON object");
        if (obj.size() != 6)
            fail(line_no, "record must have exactly the keys tx_id, height, timestamp, fee, rings, outputs");

        TxRecord tx;
        {
            auto it = obj.find("tx_id");
            if (it == obj.end() || !it->is_string()) fail(line_no, "'tx_id' must be a string");
            tx.tx_id = it->get<std::string>();
            if (!valid_tx_id(tx.tx_id))
                fail(line_no, "'tx_id' must be non-empty printable text without spaces");
        }
        tx.height = require_u64(obj, "height", line_no);
        tx.timestamp = require_u64(obj, "timestamp", line_no);
        tx.fee = require_u64(obj, "fee", line_no);

        if (store.by_id_.count(tx.tx_id)) fail(line_no, "duplicate tx_id '" + tx.tx_id + "'");

        if (have_prev) {
            if (tx.height < prev_height)
                fail(line_no, "records not ordered by height");
            if (tx.timestamp < prev_timestamp)
                fail(line_no, "non-monotone block timestamps");
        }

        // Outputs first: non-empty, strictly increasing, unique chain-wide.
        {
            auto it = obj.find("outputs");
            if (it == obj.end() || !it->is_array()) fail(line_no, "'outputs' must be an array");
            for (const auto& o : *it) {
                if (!o.is_number_unsigned())
                    fail(line_no, "output indexes must be non-negative integers");
                tx.outputs.push_back(o.get<std::uint64_t>());
            }
        }
        if (tx.outputs.empty()) fail(line_no, "transaction has no outputs");
        for (std::size_t i = 1; i < tx.outputs.size(); ++i)
            if (tx.outputs[i] <= tx.outputs[i - 1])
                fail(line_no, "output indexes must be strictly increasing");
        const OutputIndex own_min = tx.outputs.front();

        {
            auto it = obj.find("rings");
            if (it == obj.end() || !it->is_array()) fail(line_no, "'rings' must be an array");
            for (const auto& ring_json : *it) {
                if (!ring_json.is_array()) fail(line_no, "each ring must be an array");
                Ring ring;
                for (const auto& m : ring_json) {
                    if (!m.is_number_unsigned())
                        fail(line_no, "ring members must be non-negative integers");
                    const OutputIndex g = m.get<std::uint64_t>();
                    if (std::find(ring.members.begin(), ring.members.end(), g) !=
                        ring.members.end())
                        fail(line_no, "duplicate ring member " + std::to_string(g));
                    if (g >= own_min)
                        fail(line_no, "ring member " + std::to_string(g) +
                                          " does not precede this transaction's outputs");
                    if (!store.producer_.count(g))
                        fail(line_no, "ring references unknown output " + std::to_string(g));
                    ring.members.push_back(g);
                }
                if (ring.members.empty()) fail(line_no, "empty ring");
                tx.rings.push_back(std::move(ring));
            }
        }

        const auto tx_index = static_cast<std::uint32_t>(store.txs_.size());
        for (std::uint32_t pos = 0; pos < tx.outputs.size(); ++pos) {
            const OutputIndex g = tx.outputs[pos];
            if (!store.producer_.emplace(g, OutputSite{tx_index, pos}).second)
                fail(line_no, "duplicate global output index " + std::to_string(g));
        }
        for (std::uint32_t r = 0; r < tx.rings.size(); ++r)
            for (OutputIndex g : tx.rings[r].members)
                store.referencing_[g].push_back(RingSite{tx_index, r});

        if (!have_prev) {
            store.span_.first = tx.timestamp;
            have_prev = true;
        }
        store.span_.second = tx.timestamp;
        prev_height = tx.height;
        prev_timestamp = tx.timestamp;
        store.by_id_.emplace(tx.tx_id, store.txs_.size());
        store.txs_.push_back(std::move(tx));
    }

    // Deterministic reader-facing order: (height, tx_id, ring position).
    for (auto& [g, sites] : store.referencing_) {
        std::sort(sites.begin(), sites.end(), [&](const RingSite& a, const RingSite& b) {
            const TxRecord& ta = store.txs_[a.tx_index];
            const TxRecord& tb = store.txs_[b.tx_index];
            if (ta.height != tb.height) return ta.height < tb.height;
            if (ta.tx_id != tb.tx_id) return ta.tx_id < tb.tx_id;
            return a.ring_pos < b.ring_pos;
        });
    }
    return store;
}

ChainStore ChainStore::parse_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot: " + path);
    return parse_snapshot(in);
}

const TxRecord& ChainStore::tx(const std::string& tx_id) const {
    auto it = by_id_.find(tx_id);
    if (it == by_id_.end()) throw UnknownTxError("unknown transaction '" + tx_id + "'");
    return txs_[it->second];
}

std::size_t ChainStore::tx_index(const std::string& tx_id) const {
    auto it = by_id_.find(tx_id);
    if (it == by_id_.end()) throw UnknownTxError("unknown transaction '" + tx_id + "'");
    return it->second;
}

const TxRecord& ChainStore::producing_tx(OutputIndex g) const {
    return txs_[producer_site(g).tx_index];
}

OutputSite ChainStore::producer_site(OutputIndex g) const {
    auto it = producer_.find(g);
    if (it == producer_.end())
        throw UnknownOutputError("unknown output " + std::to_string(g));
    return it->second;
}

const std::vector<RingSite>& ChainStore::empty_ring_list() {
    static const std::vector<RingSite> empty;
    return empty;
}

const std::vector<RingSite>& ChainStore::rings_referencing(OutputIndex g) const {
    if (!producer_.count(g))
        throw UnknownOutputError("unknown output " + std::to_string(g));
    auto it = referencing_.find(g);
    return it == referencing_.end() ? empty_ring_list() : it->second;
}

void ChainStore::serialize_snapshot(std::ostream& out) const {
    std::string buf;
    for (const TxRecord& tx : txs_) {
        buf.clear();
        append_snapshot_line(buf, tx);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

}  // namespace artforge
