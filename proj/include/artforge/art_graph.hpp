#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "artforge/chain.hpp"

namespace artforge {

// Tripartite transaction/ring/address graph around one seed transaction,
// expanded n hops in the output direction. Every transaction node carries its
// minimum reachable depth; each transaction in the graph contributes its
// produced addresses, its input rings and their full membership. All node and
// edge lists are in canonical order (height, tx_id, position), so equal
// graphs compare equal and exports are byte-stable.
struct ArtGraph {
    struct TxNode {
        std::string tx_id;
        int depth = 0;
        bool operator==(const TxNode&) const = default;
    };
    struct RingNode {
        std::string tx_id;
        std::uint32_t ring_pos = 0;
        bool operator==(const RingNode&) const = default;
    };
    struct ProdEdge {  // tx -> address it produced
        std::string tx_id;
        OutputIndex out = 0;
        bool operator==(const ProdEdge&) const = default;
    };
    struct MembEdge {  // address -> ring it participates in
        OutputIndex member = 0;
        std::string tx_id;
        std::uint32_t ring_pos = 0;
        bool operator==(const MembEdge&) const = default;
    };
    struct InptEdge {  // ring -> its owning tx
        std::string tx_id;
        std::uint32_t ring_pos = 0;
        bool operator==(const InptEdge&) const = default;
    };

    std::string seed;
    int n_hops = 0;
    std::vector<TxNode> tx_nodes;
    std::vector<OutputIndex> address_nodes;
    std::vector<RingNode> ring_nodes;
    std::vector<ProdEdge> prod_edges;
    std::vector<MembEdge> memb_edges;
    std::vector<InptEdge> inpt_edges;

    bool operator==(const ArtGraph&) const = default;

    // Transactions at exactly hop i (0 = seed). Throws Error when i is
    // outside [0, n_hops].
    std::vector<std::string> hop_transactions(int i) const;
};

// Frontier expansion from `seed`: depth d transactions' produced addresses
// lead, via the rings referencing them, to depth d+1 transactions (kept at
// their minimum depth). With expand_ring_members the frontier also includes
// the depth-d transactions' own ring members, growing sideways through decoy
// co-membership; default off.
ArtGraph build_art_graph(const ChainStore& store, const std::string& seed, int n_hops,
                         bool expand_ring_members = false);

// Line-oriented edge-list export; deterministic and losslessly re-importable.
void export_graph(const ArtGraph& g, std::ostream& sink);
ArtGraph import_graph(std::istream& in);

}  // namespace artforge
