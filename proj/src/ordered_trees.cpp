#include "hnls/ordered_trees.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hnls {

std::vector<int> OrderedTree::terminals() const {
    std::vector<int> out;
    for (int a = 0; a < static_cast<int>(nodes.size()); ++a)
        if (is_terminal(a)) out.push_back(a);
    return out;
}

int OrderedTree::conjugation_parity(int a) const {
    int parity = 0;
    while (nodes[a].parent >= 0) {
        if (nodes[a].pos == 2) parity ^= 1;
        a = nodes[a].parent;
    }
    return parity;
}

void OrderedTree::expand(int terminal_id) {
    if (terminal_id < 0 || terminal_id >= static_cast<int>(nodes.size()) ||
        !is_terminal(terminal_id))
        throw std::invalid_argument("OrderedTree::expand: not a terminal node");
    for (int pos = 1; pos <= 3; ++pos) {
        Node child;
        child.parent = terminal_id;
        child.pos = pos;
        nodes[terminal_id].child[pos - 1] = static_cast<int>(nodes.size());
        nodes.push_back(child);
    }
    chronicle.push_back(terminal_id);
}

bool operator==(const OrderedTree& a, const OrderedTree& b) {
    return a.chronicle == b.chronicle;  // ids are replay-determined
}

OrderedTree make_seed_tree() {
    OrderedTree t;
    t.nodes.emplace_back();
    t.expand(0);
    return t;
}

std::vector<OrderedTree> enumerate_trees(int J) {
    constexpr int kCap = 6;
    if (J < 1) throw std::invalid_argument("enumerate_trees: J must be >= 1");
    if (J > kCap) throw std::invalid_argument("enumerate_trees: J exceeds cap 6");
    std::vector<OrderedTree> cur{make_seed_tree()};
    for (int g = 2; g <= J; ++g) {
        std::vector<OrderedTree> next;
        next.reserve(cur.size() * (2 * g - 1));
        for (const auto& t : cur)
            for (int b : t.terminals()) {
                OrderedTree grown = t;
                grown.expand(b);
                next.push_back(std::move(grown));
            }
        cur = std::move(next);
    }
    return cur;
}

OrderedTree project(const OrderedTree& tree, int k) {
    if (k < 1 || k > tree.generation())
        throw std::out_of_range("project: k outside 1..generation");
    OrderedTree out = make_seed_tree();
    for (int g = 1; g < k; ++g) out.expand(tree.chronicle[g]);
    return out;
}

namespace {

void serialize_node(const OrderedTree& t, int a, std::string& out) {
    if (t.is_terminal(a)) {
        out += '*';
        return;
    }
    int gen = -1;
    for (int g = 0; g < t.generation(); ++g)
        if (t.chronicle[g] == a) gen = g + 1;
    out += '(';
    out += std::to_string(gen);
    for (int c = 0; c < 3; ++c) {
        out += ' ';
        serialize_node(t, t.nodes[a].child[c], out);
    }
    out += ')';
}

}  // namespace

std::string serialize_tree(const OrderedTree& tree) {
    std::string out;
    serialize_node(tree, 0, out);
    return out;
}

namespace {

// Recursive-descent parse of the "(g c1 c2 c3)" / "*" grammar. First pass
// recovers, for each chronicle step, which node path was expanded; the tree
// is then rebuilt by replaying expansions so node ids match the canonical
// creation order.
struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && s[pos] == ' ') ++pos;
    }

    char peek() {
        skip_ws();
        if (pos >= s.size()) throw std::runtime_error("parse_tree: unexpected end of input");
        return s[pos];
    }

    // Fills gen_of_path: serialized generation marker per node path (path =
    // sequence of child positions 1..3 from the root).
    void parse_node(std::vector<std::pair<std::vector<int>, int>>& marks,
                    std::vector<int>& path) {
        if (peek() == '*') {
            ++pos;
            return;
        }
        if (s[pos] != '(') throw std::runtime_error("parse_tree: expected '(' or '*'");
        ++pos;
        skip_ws();
        size_t end = pos;
        while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
        if (end == pos) throw std::runtime_error("parse_tree: missing generation marker");
        const int gen = std::stoi(s.substr(pos, end - pos));
        pos = end;
        marks.emplace_back(path, gen);
        for (int c = 1; c <= 3; ++c) {
            path.push_back(c);
            parse_node(marks, path);
            path.pop_back();
        }
        if (peek() != ')') throw std::runtime_error("parse_tree: expected ')'");
        ++pos;
    }
};

}  // namespace

OrderedTree parse_tree(const std::string& text) {
    Parser p(text);
    std::vector<std::pair<std::vector<int>, int>> marks;
    std::vector<int> path;
    p.parse_node(marks, path);
    p.skip_ws();
    if (p.pos != text.size()) throw std::runtime_error("parse_tree: trailing input");
    if (marks.empty()) throw std::runtime_error("parse_tree: root must be internal");

    const int J = static_cast<int>(marks.size());
    std::vector<const std::vector<int>*> path_of_gen(J + 1, nullptr);
    for (const auto& [pth, gen] : marks) {
        if (gen < 1 || gen > J || path_of_gen[gen])
            throw std::runtime_error("parse_tree: invalid chronicle markers");
        path_of_gen[gen] = &pth;
    }
    if (!path_of_gen[1] || !path_of_gen[1]->empty())
        throw std::runtime_error("parse_tree: generation 1 must be the root");

    OrderedTree t = make_seed_tree();
    for (int g = 2; g <= J; ++g) {
        int a = 0;  // resolve the path in the partially rebuilt tree
        for (int c : *path_of_gen[g]) {
            a = t.nodes[a].child[c - 1];
            if (a < 0) throw std::runtime_error("parse_tree: chronicle order violated");
        }
        t.expand(a);
    }
    return t;
}

GenerationModulations modulations(const IndexAssignment& a, ModulusSign sign) {
    const OrderedTree& t = *a.tree;
    GenerationModulations out;
    std::int64_t acc = 0;
    for (int g = 0; g < t.generation(); ++g) {
        const int b = t.chronicle[g];
        const auto& nd = t.nodes[b];
        std::int64_t m = modulation(a.freq[b], a.freq[nd.child[0]], a.freq[nd.child[1]],
                                    a.freq[nd.child[2]], sign);
        if (t.conjugation_parity(b)) m = -m;
        acc += m;
        out.mu.push_back(m);
        out.mu_tilde.push_back(acc);
    }
    return out;
}

bool in_near_resonant_set(const GenerationModulations& mods, int j, double K, double p) {
    if (j < 1 || j > static_cast<int>(mods.mu_tilde.size()))
        throw std::out_of_range("in_near_resonant_set: j outside generation count");
    const double threshold = std::pow((2.0 * j + 1.0) * K, 4.0 * p);
    return std::abs(static_cast<double>(mods.mu_tilde[j - 1])) <= threshold;
}

namespace {

std::vector<FreqVector> disc_points(std::int64_t radius) {
    std::vector<FreqVector> out;
    for (std::int64_t j = -radius; j <= radius; ++j)
        for (std::int64_t k = -radius; k <= radius; ++k)
            if (j * j + k * k <= radius * radius) out.push_back({j, k});
    return out;  // lexicographic by construction
}

void recurse_assignments(const OrderedTree& tree, std::int64_t radius,
                         const std::vector<FreqVector>& disc, int step,
                         IndexAssignment& a,
                         const std::function<void(const IndexAssignment&)>& fn) {
    if (step == tree.generation()) {
        fn(a);
        return;
    }
    const int b = tree.chronicle[step];
    const auto& nd = tree.nodes[b];
    const FreqVector nb = a.freq[b];
    const std::int64_t r2 = radius * radius;
    for (const FreqVector c1 : disc) {
        if (c1 == nb) continue;  // Definition 3.2 (ii): n_a != n_{a1}
        for (const FreqVector c2 : disc) {
            const FreqVector c3 = nb - c1 + c2;  // Definition 3.2 (i)
            if (c3.norm_sq() > r2 || c3 == nb) continue;
            a.freq[nd.child[0]] = c1;
            a.freq[nd.child[1]] = c2;
            a.freq[nd.child[2]] = c3;
            recurse_assignments(tree, radius, disc, step + 1, a, fn);
        }
    }
}

}  // namespace

void for_each_assignment(const OrderedTree& tree, FreqVector root_freq,
                         std::int64_t radius, ModulusSign /*sign*/,
                         const std::function<void(const IndexAssignment&)>& fn) {
    IndexAssignment a;
    a.tree = &tree;
    a.freq.assign(tree.nodes.size(), FreqVector{});
    a.freq[0] = root_freq;
    const auto disc = disc_points(radius);
    recurse_assignments(tree, radius, disc, 0, a, fn);
}

std::vector<IndexAssignment> enumerate_assignments(const OrderedTree& tree,
                                                   FreqVector root_freq,
                                                   std::int64_t radius,
                                                   ModulusSign sign) {
    if (tree.generation() > 4)
        throw std::invalid_argument("enumerate_assignments: J exceeds cap 4");
    if (radius > 8)
        throw std::invalid_argument("enumerate_assignments: radius exceeds cap 8");
    std::vector<IndexAssignment> out;
    for_each_assignment(tree, root_freq, radius, sign,
                        [&](const IndexAssignment& a) { out.push_back(a); });
    for (auto& a : out) a.tree = &tree;  // rebind (loop copies share the caller's tree)
    return out;
}

}  // namespace hnls
