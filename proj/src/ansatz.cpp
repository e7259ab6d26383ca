#include "efl/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace efl {

char pattern_name(Pattern p) {
    switch (p) {
        case Pattern::A: return 'A';
        case Pattern::B: return 'B';
        case Pattern::C: return 'C';
        default: return 'D';
    }
}

Pattern pattern_from_name(char c) {
    switch (c) {
        case 'A': return Pattern::A;
        case 'B': return Pattern::B;
        case 'C': return Pattern::C;
        case 'D': return Pattern::D;
        default: throw std::invalid_argument("unknown pattern label");
    }
}

DeviceGraph::DeviceGraph(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("DeviceGraph: empty grid");
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (r + 1 < rows)
                edges_.push_back({node_id(r, c), node_id(r + 1, c),
                                  r % 2 == 0 ? Pattern::A : Pattern::B});
            if (c + 1 < cols)
                edges_.push_back({node_id(r, c), node_id(r, c + 1),
                                  c % 2 == 0 ? Pattern::C : Pattern::D});
        }
}

std::vector<Edge> DeviceGraph::edges_of(Pattern p) const {
    std::vector<Edge> out;
    for (const auto& e : edges_)
        if (e.pattern == p) out.push_back(e);
    return out;
}

bool DeviceGraph::is_matching(Pattern p) const {
    std::set<int> seen;
    for (const auto& e : edges_of(p)) {
        if (!seen.insert(e.a).second) return false;
        if (!seen.insert(e.b).second) return false;
    }
    return true;
}

std::string DeviceGraph::to_json() const {
    std::ostringstream os;
    os << "{\"rows\":" << rows_ << ",\"cols\":" << cols_ << ",\"nodes\":[";
    for (int id = 0; id < n_nodes(); ++id) {
        const Node n = node_of(id);
        os << (id ? "," : "") << "{\"id\":" << id << ",\"row\":" << n.row << ",\"col\":" << n.col << "}";
    }
    os << "],\"edges\":[";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        os << (i ? "," : "") << "{\"a\":" << e.a << ",\"b\":" << e.b << ",\"pattern\":\""
           << pattern_name(e.pattern) << "\"}";
    }
    os << "]}";
    return os.str();
}

DeviceGraph build_grid(int rows, int cols) { return DeviceGraph(rows, cols); }

std::string ordering_name(OrderingKind k) {
    switch (k) {
        case OrderingKind::Interleaved: return "interleaved";
        case OrderingKind::Vertical: return "vertical";
        default: return "horizontal";
    }
}

OrderingKind ordering_from_name(const std::string& s) {
    if (s == "interleaved") return OrderingKind::Interleaved;
    if (s == "vertical") return OrderingKind::Vertical;
    if (s == "horizontal") return OrderingKind::Horizontal;
    throw std::invalid_argument("unknown ordering: " + s);
}

CircuitOrdering::CircuitOrdering(OrderingKind kind, int L, const DeviceGraph& graph)
    : kind_(kind), L_(L) {
    if (L < 1) throw std::invalid_argument("CircuitOrdering: L must be >= 1");
    if (graph.n_nodes() < 2 * L)
        throw topology_error("CircuitOrdering: grid too small for 2L orbitals");
    const JwLayout lay(L);
    node_of_position_.assign(2 * L, -1);
    auto place = [&](int site, Spin s, int row, int col) {
        if (row < 0 || row >= graph.rows() || col < 0 || col >= graph.cols())
            throw topology_error("CircuitOrdering: site placed outside the grid");
        node_of_position_[lay.position(site, s)] = graph.node_id(row, col);
    };
    switch (kind) {
        case OrderingKind::Interleaved: {
            // up row on top, down row below; needs a 2 x >=L grid
            if (graph.rows() != 2 || graph.cols() < L)
                throw topology_error("interleaved ordering needs a 2 x L grid");
            for (int j = 1; j <= L; ++j) {
                place(j, Spin::Up, 0, j - 1);
                place(j, Spin::Down, 1, j - 1);
            }
            break;
        }
        case OrderingKind::Vertical: {
            // sites descend a column; each site is a horizontal node pair,
            // up on the left. Column pairs advance two at a time.
            const int R = graph.rows();
            const int need_cols = 2 * ((L + R - 1) / R);
            if (graph.cols() < need_cols)
                throw topology_error("vertical ordering needs a rows x 2*ceil(L/rows) grid");
            for (int j = 1; j <= L; ++j) {
                const int r = (j - 1) % R;
                const int c = 2 * ((j - 1) / R);
                place(j, Spin::Up, r, c);
                place(j, Spin::Down, r, c + 1);
            }
            break;
        }
        case OrderingKind::Horizontal: {
            // sites run along a row with serpentine reversal on odd site
            // rows; each site is a vertical node pair, up on top.
            const int C = graph.cols();
            const int need_rows = 2 * ((L + C - 1) / C);
            if (graph.rows() < need_rows)
                throw topology_error("horizontal ordering needs a 2*ceil(L/cols) x cols grid");
            for (int j = 1; j <= L; ++j) {
                const int s = (j - 1) / C;
                const int k = (j - 1) % C;
                const int c = (s % 2 == 0) ? k : C - 1 - k;
                place(j, Spin::Up, 2 * s, c);
                place(j, Spin::Down, 2 * s + 1, c);
            }
            break;
        }
    }
    std::set<int> used(node_of_position_.begin(), node_of_position_.end());
    if (used.size() != node_of_position_.size() || used.count(-1))
        throw topology_error("CircuitOrdering: mapping is not injective");
}

int CircuitOrdering::max_interaction_distance(const DeviceGraph& graph) const {
    int worst = 0;
    for (const auto& [p, q] : interaction_pairs(L_)) {
        const Node a = graph.node_of(node_of_position_[p]);
        const Node b = graph.node_of(node_of_position_[q]);
        worst = std::max(worst, std::abs(a.row - b.row) + std::abs(a.col - b.col));
    }
    return worst;
}

std::string CircuitOrdering::to_json(const DeviceGraph& graph) const {
    const JwLayout lay(L_);
    std::ostringstream os;
    os << "{\"kind\":\"" << ordering_name(kind_) << "\",\"L\":" << L_ << ",\"orbitals\":[";
    for (int p = 0; p < 2 * L_; ++p) {
        const auto [site, spin] = lay.site_of(p);
        const Node n = graph.node_of(node_of_position_[p]);
        os << (p ? "," : "") << "{\"position\":" << p << ",\"site\":" << site << ",\"spin\":\""
           << (spin == Spin::Up ? "up" : "down") << "\",\"node\":" << node_of_position_[p]
           << ",\"row\":" << n.row << ",\"col\":" << n.col << "}";
    }
    os << "]}";
    return os.str();
}

CircuitOrdering make_ordering(OrderingKind kind, int L, const DeviceGraph& graph) {
    return CircuitOrdering(kind, L, graph);
}

LayeredAnsatz::LayeredAnsatz(const DeviceGraph& graph, int n_layers,
                             std::vector<Pattern> pattern_sequence, std::optional<int> depth_cap)
    : graph_(graph), cycle_(std::move(pattern_sequence)), depth_cap_(depth_cap) {
    if (cycle_.empty()) throw std::invalid_argument("LayeredAnsatz: empty pattern sequence");
    if (n_layers < 1) throw std::invalid_argument("LayeredAnsatz: need at least one layer");
    if (depth_cap_ && n_layers > *depth_cap_)
        throw depth_cap_error("LayeredAnsatz: initial depth exceeds the cap");
    for (int i = 0; i < n_layers; ++i) layers_.push_back(cycle_[i % cycle_.size()]);
}

int LayeredAnsatz::n_params() const { return layer_offset(depth()); }

int LayeredAnsatz::layer_offset(int layer) const {
    int off = 0;
    for (int i = 0; i < layer; ++i)
        off += 6 * static_cast<int>(graph_.edges_of(layers_[i]).size());
    return off;
}

void LayeredAnsatz::extend(int k_layers) {
    if (k_layers < 1) throw std::invalid_argument("LayeredAnsatz::extend: k must be >= 1");
    if (depth_cap_ && depth() + k_layers > *depth_cap_)
        throw depth_cap_error("LayeredAnsatz::extend: depth cap exceeded");
    const std::size_t start = layers_.size();
    for (std::size_t i = 0; i < static_cast<std::size_t>(k_layers); ++i)
        layers_.push_back(cycle_[(start + i) % cycle_.size()]);
}

std::vector<PrimGate> LayeredAnsatz::prim_circuit() const {
    std::vector<PrimGate> circ;
    int slot = 0;
    for (const Pattern p : layers_) {
        for (const auto& e : graph_.edges_of(p)) {
            // slots per edge: theta_x1, theta_x2, theta, phi, theta_z1, theta_z2
            circ.push_back({PrimKind::RX, e.a, -1, slot + 0, 1.0, 0.0});
            circ.push_back({PrimKind::RX, e.b, -1, slot + 1, 1.0, 0.0});
            circ.push_back({PrimKind::XX, e.a, e.b, slot + 2, -1.0, 0.0});
            circ.push_back({PrimKind::YY, e.a, e.b, slot + 2, -1.0, 0.0});
            circ.push_back({PrimKind::ZZ, e.a, e.b, slot + 3, 1.0, 0.0});
            circ.push_back({PrimKind::RZ, e.a, -1, slot + 4, 1.0, 0.0});
            circ.push_back({PrimKind::RZ, e.b, -1, slot + 5, 1.0, 0.0});
            slot += 6;
        }
    }
    return circ;
}

void LayeredAnsatz::apply(StateVector& state, const std::vector<double>& params) const {
    if (static_cast<int>(params.size()) != n_params())
        throw std::invalid_argument("LayeredAnsatz::apply: parameter count mismatch");
    int slot = 0;
    for (const Pattern p : layers_) {
        for (const auto& e : graph_.edges_of(p)) {
            FGateParams fp{params[slot], params[slot + 1], params[slot + 2],
                           params[slot + 3], params[slot + 4], params[slot + 5]};
            apply_f_gate(state, e.a, e.b, fp);
            slot += 6;
        }
    }
}

FGateParams LayeredAnsatz::edge_params(const std::vector<double>& params, int layer,
                                       int edge_index) const {
    const int off = layer_offset(layer) + 6 * edge_index;
    return {params[off], params[off + 1], params[off + 2], params[off + 3], params[off + 4],
            params[off + 5]};
}

LayeredAnsatz build_ansatz(const DeviceGraph& graph, int n_layers,
                           std::vector<Pattern> pattern_sequence, std::optional<int> depth_cap) {
    return LayeredAnsatz(graph, n_layers, std::move(pattern_sequence), depth_cap);
}

void apply_layer(StateVector& state, const DeviceGraph& graph, Pattern pattern,
                 const std::vector<FGateParams>& params) {
    if (!graph.is_matching(pattern))
        throw topology_error("apply_layer: pattern edges are not a matching");
    const auto edges = graph.edges_of(pattern);
    if (edges.size() != params.size())
        throw std::invalid_argument("apply_layer: one parameter set per edge required");
    for (std::size_t i = 0; i < edges.size(); ++i)
        apply_f_gate(state, edges[i].a, edges[i].b, params[i]);
}

std::vector<int> jw_to_register_map(const CircuitOrdering& ordering) {
    return ordering.position_to_node();
}

}  // namespace efl
