#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "efl/model.hpp"
#include "efl/statevector.hpp"

namespace efl {

struct topology_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct depth_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Pattern : std::uint8_t { A, B, C, D };
char pattern_name(Pattern p);
Pattern pattern_from_name(char c);

struct Node {
    int row = 0;
    int col = 0;
    bool operator==(const Node&) const = default;
};

struct Edge {
    int a = 0;  // node ids, a < b
    int b = 0;
    Pattern pattern = Pattern::A;
};

// Rectangular grid of qubits. Edges are grid-adjacent pairs classified into
// four staggered sets, each a matching: A/B are the vertical edges with even/
// odd top row, C/D the horizontal edges with even/odd left column.
class DeviceGraph {
public:
    DeviceGraph(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n_nodes() const { return rows_ * cols_; }

    int node_id(int row, int col) const { return row * cols_ + col; }
    Node node_of(int id) const { return {id / cols_, id % cols_}; }

    const std::vector<Edge>& edges() const { return edges_; }
    std::vector<Edge> edges_of(Pattern p) const;

    bool is_matching(Pattern p) const;

    std::string to_json() const;

private:
    int rows_, cols_;
    std::vector<Edge> edges_;
};

DeviceGraph build_grid(int rows, int cols);

enum class OrderingKind : std::uint8_t { Interleaved, Vertical, Horizontal };
std::string ordering_name(OrderingKind k);
OrderingKind ordering_from_name(const std::string& s);

// Assignment of the 2L Jordan-Wigner positions to grid nodes. The two
// orbitals of a site always land on grid-adjacent nodes, with the up orbital
// on the top/left one.
class CircuitOrdering {
public:
    CircuitOrdering(OrderingKind kind, int L, const DeviceGraph& graph);

    OrderingKind kind() const { return kind_; }
    int L() const { return L_; }
    // grid node id carrying Jordan-Wigner chain position p
    int node_of_position(int p) const { return node_of_position_.at(p); }
    const std::vector<int>& position_to_node() const { return node_of_position_; }

    // Largest grid (Manhattan) distance over the model's interaction pairs.
    int max_interaction_distance(const DeviceGraph& graph) const;

    std::string to_json(const DeviceGraph& graph) const;

private:
    OrderingKind kind_;
    int L_;
    std::vector<int> node_of_position_;
};

CircuitOrdering make_ordering(OrderingKind kind, int L, const DeviceGraph& graph);

// Layered hardware ansatz: each layer is a pattern label plus one six-angle
// f element per edge of that pattern. Parameters are stored flat, six per
// edge in layer order; zero parameters give the identity circuit.
class LayeredAnsatz {
public:
    LayeredAnsatz(const DeviceGraph& graph, int n_layers,
                  std::vector<Pattern> pattern_sequence = {Pattern::A, Pattern::B, Pattern::C, Pattern::D},
                  std::optional<int> depth_cap = std::nullopt);

    const DeviceGraph& graph() const { return graph_; }
    int depth() const { return static_cast<int>(layers_.size()); }
    const std::vector<Pattern>& layer_patterns() const { return layers_; }
    std::optional<int> depth_cap() const { return depth_cap_; }

    int n_params() const;
    // parameter slots of layer i: [layer_offset(i), layer_offset(i+1))
    int layer_offset(int layer) const;

    // Appends k layers continuing the pattern cycle. Throws depth_cap_error
    // if a cap is set and would be exceeded.
    void extend(int k_layers);

    // Expand to primitive parameterized gates acting on graph-node qubits.
    std::vector<PrimGate> prim_circuit() const;

    // Apply with the given flat parameter vector (6 per edge per layer).
    void apply(StateVector& state, const std::vector<double>& params) const;

    FGateParams edge_params(const std::vector<double>& params, int layer, int edge_index) const;

private:
    DeviceGraph graph_;
    std::vector<Pattern> cycle_;
    std::vector<Pattern> layers_;
    std::optional<int> depth_cap_;
};

LayeredAnsatz build_ansatz(const DeviceGraph& graph, int n_layers,
                           std::vector<Pattern> pattern_sequence = {Pattern::A, Pattern::B,
                                                                    Pattern::C, Pattern::D},
                           std::optional<int> depth_cap = std::nullopt);

// Apply one pattern layer of f gates with explicit per-edge parameters.
void apply_layer(StateVector& state, const DeviceGraph& graph, Pattern pattern,
                 const std::vector<FGateParams>& params);

// Map from Jordan-Wigner chain position -> register qubit for the ordering.
std::vector<int> jw_to_register_map(const CircuitOrdering& ordering);

}  // namespace efl
