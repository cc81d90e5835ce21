#pragma once

// Declarative network description format (versioned JSON), its parser,
// validator, canonical serializer, template expansion, and the compiler from
// a multiport graph to the one-step evolution unitary on the directed-edge
// basis. The directed-edge mode attached to an edge endpoint (node, port) is
// the amplitude leaving that node through that port; a terminal (node, port)
// contributes one flow-through input/output mode.

#include "core.hpp"
#include "multiport.hpp"
#include "format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mplab {

struct PortRef {
    std::string node;
    int port = 0;

    friend bool operator==(const PortRef& a, const PortRef& b) {
        return a.node == b.node && a.port == b.port;
    }
    friend bool operator<(const PortRef& a, const PortRef& b) {
        return a.node != b.node ? a.node < b.node : a.port < b.port;
    }
};

struct NetEdgeSpec {
    PortRef endpoint_a;
    PortRef endpoint_b;
    double phase = 0.0;

    friend bool operator==(const NetEdgeSpec& a, const NetEdgeSpec& b) {
        return a.endpoint_a == b.endpoint_a && a.endpoint_b == b.endpoint_b && a.phase == b.phase;
    }
};

inline bool operator==(const MultiportSpec& a, const MultiportSpec& b) {
    return a.n == b.n && a.kind == b.kind && a.vertex_phases == b.vertex_phases;
}

struct NetNodeSpec {
    std::string id;
    MultiportSpec spec;

    friend bool operator==(const NetNodeSpec& a, const NetNodeSpec& b) {
        return a.id == b.id && a.spec == b.spec;
    }
};

// fully explicit network: parsing expands templates into nodes/edges/terminals
struct NetworkSpec {
    int version = 1;
    std::vector<NetNodeSpec> nodes;
    std::vector<NetEdgeSpec> edges;
    std::vector<PortRef> terminals;

    friend bool operator==(const NetworkSpec& a, const NetworkSpec& b) {
        return a.version == b.version && a.nodes == b.nodes && a.edges == b.edges &&
               a.terminals == b.terminals;
    }
};

enum class NetCode {
    syntax,         // malformed JSON
    schema,         // structurally wrong document or spec
    version,        // unsupported version
    duplicate_port, // a (node, port) referenced more than once
    dangling_port,  // a node port never wired or terminated
    arity,          // port count/index inconsistent with the node's size
    connectivity,   // graph not connected
    kind            // node kind without a defined unitary
};

inline const char* net_code_name(NetCode c) {
    switch (c) {
        case NetCode::syntax: return "syntax";
        case NetCode::schema: return "schema";
        case NetCode::version: return "version";
        case NetCode::duplicate_port: return "duplicate_port";
        case NetCode::dangling_port: return "dangling_port";
        case NetCode::arity: return "arity";
        case NetCode::connectivity: return "connectivity";
        case NetCode::kind: return "kind";
    }
    return "unknown";
}

struct Diagnostic {
    NetCode code;
    std::string message;
};

class NetError : public std::runtime_error {
public:
    NetError(NetCode code, const std::string& message, int line = 0, int col = 0)
        : std::runtime_error(message), code(code), line(line), col(col) {}
    NetCode code;
    int line; // 1-based for syntax errors, 0 when not applicable
    int col;
};

inline const char* kind_name(MultiportKind k) {
    switch (k) {
        case MultiportKind::grover: return "grover";
        case MultiportKind::strict_three: return "strict_three";
        case MultiportKind::doubled_grover: return "doubled_grover";
        case MultiportKind::custom: return "custom";
    }
    return "custom";
}

inline MultiportKind kind_from_name(const std::string& name) {
    if (name == "grover") return MultiportKind::grover;
    if (name == "strict_three") return MultiportKind::strict_three;
    if (name == "doubled_grover") return MultiportKind::doubled_grover;
    if (name == "custom") return MultiportKind::custom;
    throw NetError(NetCode::schema, "unknown node kind '" + name + "'");
}

namespace detail {
inline std::string padded_id(const char* prefix, int index, int count) {
    int width = 1;
    for (int v = count - 1; v >= 10; v /= 10) ++width;
    const std::string digits = std::to_string(index);
    std::string out = prefix;
    if (static_cast<int>(digits.size()) < width)
        out.append(static_cast<size_t>(width) - digits.size(), '0');
    out += digits;
    return out;
}
} // namespace detail

// Template `fig3_chain` (length L >= 2): L six-port pass-through coins in a
// row, three parallel edges between neighbors, three terminals on each end.
// Ports 0..2 face left, 3..5 face right.
inline NetworkSpec chain_template(int length) {
    if (length < 2) throw NetError(NetCode::schema, "chain template needs length >= 2");
    NetworkSpec net;
    for (int i = 0; i < length; ++i)
        net.nodes.push_back({detail::padded_id("n", i, length), {6, MultiportKind::doubled_grover, {}}});
    for (int i = 0; i + 1 < length; ++i)
        for (int p = 0; p < 3; ++p)
            net.edges.push_back({{net.nodes[static_cast<size_t>(i)].id, 3 + p},
                                 {net.nodes[static_cast<size_t>(i + 1)].id, p},
                                 0.0});
    for (int p = 0; p < 3; ++p) net.terminals.push_back({net.nodes.front().id, p});
    for (int p = 3; p < 6; ++p) net.terminals.push_back({net.nodes.back().id, p});
    return net;
}

// Template `fig4_lattice` (sites N >= 2): periodic two-leg ladder of three-port
// coins, one coin per leg per site; port 0 receives from the previous site,
// port 1 sends to the next, port 2 couples the legs.
inline NetworkSpec ladder_template(int sites) {
    if (sites < 2) throw NetError(NetCode::schema, "ladder template needs at least 2 sites");
    NetworkSpec net;
    std::vector<std::string> top, bottom;
    for (int m = 0; m < sites; ++m) {
        top.push_back(detail::padded_id("t", m, sites));
        bottom.push_back(detail::padded_id("b", m, sites));
    }
    for (int m = 0; m < sites; ++m) net.nodes.push_back({top[static_cast<size_t>(m)], {3, MultiportKind::grover, {}}});
    for (int m = 0; m < sites; ++m) net.nodes.push_back({bottom[static_cast<size_t>(m)], {3, MultiportKind::grover, {}}});
    for (int m = 0; m < sites; ++m) {
        const int next = (m + 1) % sites;
        net.edges.push_back({{top[static_cast<size_t>(m)], 1}, {top[static_cast<size_t>(next)], 0}, 0.0});
        net.edges.push_back({{bottom[static_cast<size_t>(m)], 1}, {bottom[static_cast<size_t>(next)], 0}, 0.0});
        net.edges.push_back({{top[static_cast<size_t>(m)], 2}, {bottom[static_cast<size_t>(m)], 2}, 0.0});
    }
    return net;
}

// Template `compact_pair`: two three-port coins joined port-to-port; the
// folded equivalent of the open chain.
inline NetworkSpec pair_template() {
    NetworkSpec net;
    net.nodes.push_back({"a", {3, MultiportKind::grover, {}}});
    net.nodes.push_back({"b", {3, MultiportKind::grover, {}}});
    for (int p = 0; p < 3; ++p) net.edges.push_back({{"a", p}, {"b", p}, 0.0});
    return net;
}

// Structural diagnostics; empty iff the spec satisfies every invariant.
// Deterministic order: version, node-level, reference-level, coverage,
// connectivity.
inline std::vector<Diagnostic> validate_network(const NetworkSpec& spec) {
    std::vector<Diagnostic> out;
    if (spec.version != 1)
        out.push_back({NetCode::version,
                       "unsupported version " + std::to_string(spec.version) + " (expected 1)"});

    std::map<std::string, int> node_size;
    for (const auto& node : spec.nodes) {
        if (!node_size.emplace(node.id, node.spec.n).second) {
            out.push_back({NetCode::schema, "duplicate node id '" + node.id + "'"});
            continue;
        }
        if (node.spec.n < 2)
            out.push_back({NetCode::arity, "node '" + node.id + "' must have at least 2 ports"});
        if (node.spec.kind == MultiportKind::strict_three && node.spec.n != 3)
            out.push_back({NetCode::arity, "node '" + node.id + "' kind strict_three requires n = 3"});
        if (node.spec.kind == MultiportKind::doubled_grover && node.spec.n % 2 != 0)
            out.push_back({NetCode::arity, "node '" + node.id + "' kind doubled_grover requires even n"});
        if (node.spec.kind == MultiportKind::custom)
            out.push_back({NetCode::kind, "node '" + node.id + "' kind custom has no defined unitary"});
        if (!node.spec.vertex_phases.empty() &&
            node.spec.vertex_phases.size() != static_cast<size_t>(node.spec.n))
            out.push_back({NetCode::arity,
                           "node '" + node.id + "' vertex_phases length must be 0 or n"});
    }
    if (spec.nodes.empty()) out.push_back({NetCode::schema, "network has no nodes"});

    std::map<PortRef, int> refs;
    const auto touch = [&](const PortRef& r, const char* role) {
        const auto it = node_size.find(r.node);
        if (it == node_size.end()) {
            out.push_back({NetCode::schema, std::string(role) + " references unknown node '" + r.node + "'"});
            return;
        }
        if (r.port < 0 || r.port >= it->second) {
            out.push_back({NetCode::arity, "port " + std::to_string(r.port) + " out of range for node '" +
                                               r.node + "' (n = " + std::to_string(it->second) + ")"});
            return;
        }
        if (++refs[r] == 2)
            out.push_back({NetCode::duplicate_port,
                           "port '" + r.node + ":" + std::to_string(r.port) + "' referenced more than once"});
    };
    for (const auto& e : spec.edges) {
        touch(e.endpoint_a, "edge");
        touch(e.endpoint_b, "edge");
        if (!std::isfinite(e.phase))
            out.push_back({NetCode::schema, "edge phase must be finite"});
        if (e.endpoint_a == e.endpoint_b)
            out.push_back({NetCode::duplicate_port,
                           "edge loops port '" + e.endpoint_a.node + ":" +
                               std::to_string(e.endpoint_a.port) + "' to itself"});
    }
    for (const auto& t : spec.terminals) touch(t, "terminal");

    for (const auto& [id, n] : node_size)
        for (int p = 0; p < n; ++p)
            if (refs.find(PortRef{id, p}) == refs.end())
                out.push_back({NetCode::dangling_port,
                               "port '" + id + ":" + std::to_string(p) + "' is neither wired nor a terminal"});

    // connectivity over nodes, edges as links
    if (node_size.size() > 1) {
        std::map<std::string, std::string> parent;
        for (const auto& [id, n] : node_size) parent[id] = id;
        const auto find = [&](std::string x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& e : spec.edges) {
            if (!node_size.count(e.endpoint_a.node) || !node_size.count(e.endpoint_b.node)) continue;
            parent[find(e.endpoint_a.node)] = find(e.endpoint_b.node);
        }
        std::set<std::string> roots;
        for (const auto& [id, n] : node_size) roots.insert(find(id));
        if (roots.size() > 1)
            out.push_back({NetCode::connectivity,
                           "network splits into " + std::to_string(roots.size()) + " components"});
    }
    return out;
}

namespace detail {

inline std::pair<int, int> line_col(std::string_view text, size_t byte) {
    int line = 1, col = 1;
    const size_t stop = std::min(byte, text.size());
    for (size_t i = 0; i + 1 < stop + 1 && i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           const char* context) {
    const auto it = j.find(key);
    if (it == j.end())
        throw NetError(NetCode::schema, std::string(context) + " is missing field '" + key + "'");
    return *it;
}

inline PortRef parse_port_ref(const nlohmann::json& j, const char* context) {
    if (!j.is_object()) throw NetError(NetCode::schema, std::string(context) + " must be an object");
    const auto& node = require_field(j, "node", context);
    const auto& port = require_field(j, "port", context);
    if (!node.is_string()) throw NetError(NetCode::schema, std::string(context) + ".node must be a string");
    if (!port.is_number_integer())
        throw NetError(NetCode::schema, std::string(context) + ".port must be an integer");
    return PortRef{node.get<std::string>(), port.get<int>()};
}

inline NetworkSpec expand_template(const nlohmann::json& templates) {
    if (!templates.is_object() || templates.size() != 1)
        throw NetError(NetCode::schema, "templates must hold exactly one template");
    const auto entry = templates.begin();
    const std::string name = entry.key();
    const nlohmann::json& params = entry.value();
    if (!params.is_object())
        throw NetError(NetCode::schema, "template '" + name + "' parameters must be an object");
    if (name == "fig3_chain") {
        const auto& len = require_field(params, "length", "fig3_chain");
        if (!len.is_number_integer()) throw NetError(NetCode::schema, "fig3_chain.length must be an integer");
        return chain_template(len.get<int>());
    }
    if (name == "fig4_lattice") {
        const auto& sites = require_field(params, "sites", "fig4_lattice");
        if (!sites.is_number_integer()) throw NetError(NetCode::schema, "fig4_lattice.sites must be an integer");
        return ladder_template(sites.get<int>());
    }
    if (name == "compact_pair") {
        return pair_template();
    }
    throw NetError(NetCode::schema, "unknown template '" + name + "'");
}

} // namespace detail

// Parse the versioned JSON format into a fully explicit NetworkSpec without
// running structural validation (templates still expand, and syntax, schema
// and version problems still throw). Callers that want the full diagnostic
// list run validate_network on the result; parse_network below does both.
inline NetworkSpec parse_network_unvalidated(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw NetError(NetCode::syntax,
                       "syntax error at line " + std::to_string(line) + ", column " +
                           std::to_string(col),
                       line, col);
    }
    if (!j.is_object()) throw NetError(NetCode::schema, "top level must be an object");

    const auto& version = detail::require_field(j, "version", "document");
    if (!version.is_number_integer()) throw NetError(NetCode::schema, "version must be an integer");
    if (version.get<int>() != 1)
        throw NetError(NetCode::version,
                       "unsupported version " + std::to_string(version.get<int>()) + " (expected 1)");

    NetworkSpec spec;
    if (j.contains("templates")) {
        for (const char* key : {"nodes", "edges", "terminals"})
            if (j.contains(key) && !j[key].empty())
                throw NetError(NetCode::schema,
                               "a templated document must not also declare explicit content");
        spec = detail::expand_template(j["templates"]);
    } else {
        const auto& nodes = detail::require_field(j, "nodes", "document");
        if (!nodes.is_array()) throw NetError(NetCode::schema, "nodes must be an array");
        for (const auto& jn : nodes) {
            if (!jn.is_object()) throw NetError(NetCode::schema, "each node must be an object");
            NetNodeSpec node;
            const auto& id = detail::require_field(jn, "id", "node");
            if (!id.is_string()) throw NetError(NetCode::schema, "node.id must be a string");
            node.id = id.get<std::string>();
            const auto& n = detail::require_field(jn, "n", "node");
            if (!n.is_number_integer()) throw NetError(NetCode::schema, "node.n must be an integer");
            node.spec.n = n.get<int>();
            const auto& kindField = detail::require_field(jn, "kind", "node");
            if (!kindField.is_string()) throw NetError(NetCode::schema, "node.kind must be a string");
            node.spec.kind = kind_from_name(kindField.get<std::string>());
            if (jn.contains("vertex_phases")) {
                const auto& vp = jn["vertex_phases"];
                if (!vp.is_array()) throw NetError(NetCode::schema, "node.vertex_phases must be an array");
                for (const auto& v : vp) {
                    if (!v.is_number())
                        throw NetError(NetCode::schema, "node.vertex_phases entries must be numbers");
                    node.spec.vertex_phases.push_back(v.get<double>());
                }
            }
            spec.nodes.push_back(std::move(node));
        }
        if (j.contains("edges")) {
            const auto& edges = j["edges"];
            if (!edges.is_array()) throw NetError(NetCode::schema, "edges must be an array");
            for (const auto& je : edges) {
                if (!je.is_object()) throw NetError(NetCode::schema, "each edge must be an object");
                NetEdgeSpec e;
                e.endpoint_a = detail::parse_port_ref(detail::require_field(je, "endpoint_a", "edge"),
                                                      "edge.endpoint_a");
                e.endpoint_b = detail::parse_port_ref(detail::require_field(je, "endpoint_b", "edge"),
                                                      "edge.endpoint_b");
                if (je.contains("phase")) {
                    if (!je["phase"].is_number())
                        throw NetError(NetCode::schema, "edge.phase must be a number");
                    e.phase = je["phase"].get<double>();
                }
                spec.edges.push_back(std::move(e));
            }
        }
        if (j.contains("terminals")) {
            const auto& terminals = j["terminals"];
            if (!terminals.is_array()) throw NetError(NetCode::schema, "terminals must be an array");
            for (const auto& jt : terminals)
                spec.terminals.push_back(detail::parse_port_ref(jt, "terminal"));
        }
    }
    return spec;
}

// Parse the versioned JSON format into a fully explicit, validated
// NetworkSpec. Templates are expanded. Error categories: syntax (with
// line/column), schema, version, duplicate_port, dangling_port, arity,
// connectivity, kind. Throws the first failed diagnostic.
inline NetworkSpec parse_network(std::string_view text) {
    NetworkSpec spec = parse_network_unvalidated(text);
    const auto diagnostics = validate_network(spec);
    if (!diagnostics.empty())
        throw NetError(diagnostics.front().code, diagnostics.front().message);
    return spec;
}

// canonical serialization: explicit form, fixed key order, full precision;
// parse_network(serialize_network(spec)) == spec
inline std::string serialize_network(const NetworkSpec& spec) {
    JsonWriter w;
    w.begin_object();
    w.key("version").value(spec.version);
    w.key("nodes");
    w.begin_array();
    for (const auto& node : spec.nodes) {
        w.begin_object();
        w.key("id").value(node.id);
        w.key("n").value(node.spec.n);
        w.key("kind").value(kind_name(node.spec.kind));
        w.key("vertex_phases");
        w.begin_array(true);
        for (double p : node.spec.vertex_phases) w.value(p);
        w.end_array();
        w.end_object();
    }
    w.end_array();
    w.key("edges");
    w.begin_array();
    for (const auto& e : spec.edges) {
        w.begin_object();
        w.key("endpoint_a");
        w.begin_object();
        w.key("node").value(e.endpoint_a.node);
        w.key("port").value(e.endpoint_a.port);
        w.end_object();
        w.key("endpoint_b");
        w.begin_object();
        w.key("node").value(e.endpoint_b.node);
        w.key("port").value(e.endpoint_b.port);
        w.end_object();
        w.key("phase").value(e.phase);
        w.end_object();
    }
    w.end_array();
    w.key("terminals");
    w.begin_array();
    for (const auto& t : spec.terminals) {
        w.begin_object();
        w.key("node").value(t.node);
        w.key("port").value(t.port);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

// one directed-edge mode: amplitude leaving `node` through `port` (edge
// endpoint), or the flow-through input/output slot at a terminal
struct ModeLabel {
    std::string node;
    int port = 0;
    bool terminal = false;

    std::string text() const { return node + ":" + std::to_string(port); }
};

struct EdgeBasis {
    std::vector<ModeLabel> modes; // lexicographic by (node id, port)

    int size() const { return static_cast<int>(modes.size()); }
    int index_of(const std::string& node, int port) const {
        for (size_t i = 0; i < modes.size(); ++i)
            if (modes[i].node == node && modes[i].port == port) return static_cast<int>(i);
        throw std::out_of_range("no mode at " + node + ":" + std::to_string(port));
    }
    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(modes.size());
        for (const auto& m : modes) out.push_back(m.text());
        return out;
    }
};

// local unitary realized by a node kind
inline ComplexMatrix node_unitary(const MultiportSpec& spec) {
    switch (spec.kind) {
        case MultiportKind::grover: return grover_unitary(spec.n).inner;
        case MultiportKind::strict_three: return strict_three_port().inner;
        case MultiportKind::doubled_grover: {
            if (spec.n % 2 != 0) throw NetError(NetCode::arity, "doubled_grover requires even n");
            const int half = spec.n / 2;
            const ComplexMatrix u = grover_unitary(half).inner;
            ComplexMatrix s = ComplexMatrix::Zero(spec.n, spec.n);
            s.block(0, half, half, half) = u.adjoint();
            s.block(half, 0, half, half) = u;
            return s;
        }
        case MultiportKind::custom: break;
    }
    throw NetError(NetCode::kind, "node kind has no defined unitary");
}

struct CompiledEvolution {
    UnitaryMatrix step;
    EdgeBasis basis;
};

// One discrete time step on the directed-edge basis: each edge mode enters the
// node at the edge's far end (acquiring the edge phase) and scatters through
// that node's unitary onto its outgoing modes; a terminal mode enters its own
// node directly and amplitudes scattered onto terminal ports leave through
// them. Unitary for every valid spec.
inline CompiledEvolution compile_evolution(const NetworkSpec& spec) {
    {
        const auto diagnostics = validate_network(spec);
        if (!diagnostics.empty())
            throw NetError(diagnostics.front().code, diagnostics.front().message);
    }

    EdgeBasis basis;
    for (const auto& e : spec.edges) {
        basis.modes.push_back({e.endpoint_a.node, e.endpoint_a.port, false});
        basis.modes.push_back({e.endpoint_b.node, e.endpoint_b.port, false});
    }
    for (const auto& t : spec.terminals) basis.modes.push_back({t.node, t.port, true});
    std::sort(basis.modes.begin(), basis.modes.end(), [](const ModeLabel& a, const ModeLabel& b) {
        return a.node != b.node ? a.node < b.node : a.port < b.port;
    });

    std::map<std::string, ComplexMatrix> unitaries;
    std::map<std::string, const NetNodeSpec*> nodes;
    for (const auto& node : spec.nodes) {
        unitaries.emplace(node.id, node_unitary(node.spec));
        nodes.emplace(node.id, &node);
    }

    const int dim = basis.size();
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    std::map<std::pair<std::string, int>, int> index;
    for (int i = 0; i < dim; ++i)
        index[{basis.modes[static_cast<size_t>(i)].node, basis.modes[static_cast<size_t>(i)].port}] = i;

    const auto scatter_into = [&](const std::string& node_id, int in_port, int col, Complex weight) {
        const ComplexMatrix& u = unitaries.at(node_id);
        const int n = static_cast<int>(u.rows());
        for (int r = 0; r < n; ++r) {
            const Complex amp = u(r, in_port) * weight;
            if (amp == Complex(0.0, 0.0)) continue;
            m(index.at({node_id, r}), col) += amp;
        }
    };

    for (const auto& e : spec.edges) {
        const Complex hop = std::polar(1.0, e.phase);
        scatter_into(e.endpoint_b.node, e.endpoint_b.port,
                     index.at({e.endpoint_a.node, e.endpoint_a.port}), hop);
        scatter_into(e.endpoint_a.node, e.endpoint_a.port,
                     index.at({e.endpoint_b.node, e.endpoint_b.port}), hop);
    }
    for (const auto& t : spec.terminals)
        scatter_into(t.node, t.port, index.at({t.node, t.port}), Complex(1.0, 0.0));

    return CompiledEvolution{UnitaryMatrix(m), std::move(basis)};
}

} // namespace mplab
