#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hnls/lattice.hpp"

namespace hnls {

// Ordered ternary tree with a chronicle (which terminal was expanded at each
// generation). Node 0 is the root; children get consecutive ids in creation
// order, so replaying a chronicle reproduces the same ids.
struct OrderedTree {
    struct Node {
        int parent = -1;
        int child[3] = {-1, -1, -1};
        int pos = 0;  // position in parent (1..3); 0 for the root
    };

    std::vector<Node> nodes;
    std::vector<int> chronicle;  // chronicle[g] = node expanded to create generation g+1

    int generation() const { return static_cast<int>(chronicle.size()); }
    bool is_terminal(int a) const { return nodes[a].child[0] < 0; }
    std::vector<int> terminals() const;  // increasing id order

    // Number of second-child edges on the root path, mod 2. Terminals with
    // parity 1 carry conjugated coefficients downstream.
    int conjugation_parity(int a) const;

    // Grow by one generation: attach three ordered children to a terminal.
    void expand(int terminal_id);

    friend bool operator==(const OrderedTree&, const OrderedTree&);
};

// The unique one-generation tree (root plus three children).
OrderedTree make_seed_tree();

// All ordered trees of generation J; |result| = (2J-1)!!. J capped at 6.
std::vector<OrderedTree> enumerate_trees(int J);

// The k-generation prefix pi_k(T) with truncated chronicle, 1 <= k <= generation.
OrderedTree project(const OrderedTree& tree, int k);

// Nested parenthesized serialization with per-node generation markers;
// round-trips exactly. Terminals print as "*", internal nodes as
// "(g c1 c2 c3)" where g is the 1-based chronicle step that expanded them.
std::string serialize_tree(const OrderedTree& tree);
OrderedTree parse_tree(const std::string& text);

// Frequency map on a tree's nodes (Definition 3.2 (i)+(ii) enforced).
struct IndexAssignment {
    const OrderedTree* tree = nullptr;
    std::vector<FreqVector> freq;  // indexed by node id
};

struct GenerationModulations {
    std::vector<std::int64_t> mu;        // mu[g] = mu_{g+1}, signed by conjugation parity
    std::vector<std::int64_t> mu_tilde;  // prefix sums
};

// Generation modulations along the chronicle. mu_j is the modulation of the
// node expanded at step j with its children, negated when that node sits at
// odd conjugation parity (so the phases e^{it mu~_j} telescope across
// generations; the sign convention follows the conjugate of Eq. non3).
GenerationModulations modulations(const IndexAssignment& a, ModulusSign sign);

// A_j membership: |mu~_j| <= ((2j+1)K)^{4p}, non-strict.
bool in_near_resonant_set(const GenerationModulations& mods, int j, double K, double p);

// All assignments with the given root frequency satisfying Definition 3.2
// (i)+(ii), every non-root node bounded by |n| <= radius. (Each non-root
// node is a terminal of some chronicle prefix, where the terminal bound
// applies; this also makes every prefix restriction a valid assignment of
// the projected tree.) Constraint (iii) and the A_k^c indicators are
// caller-applied. Enumeration order is chronicle-major, lexicographic in the
// expansion choices, hence deterministic.
void for_each_assignment(const OrderedTree& tree, FreqVector root_freq,
                         std::int64_t radius, ModulusSign sign,
                         const std::function<void(const IndexAssignment&)>& fn);

// Materialized variant; guards J <= 4 and radius <= 8.
std::vector<IndexAssignment> enumerate_assignments(const OrderedTree& tree,
                                                   FreqVector root_freq,
                                                   std::int64_t radius,
                                                   ModulusSign sign);

}  // namespace hnls
