#include "lcr/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "lcr/errors.hpp"

namespace lcr::graph {

void DirectedGraph::finalize() {
    n_oneway_ = 0;
    n_mutual_ = 0;
    for (int i = 0; i < n_; ++i) {
        std::sort(out1_[i].begin(), out1_[i].end());
        std::sort(in1_[i].begin(), in1_[i].end());
        std::sort(mut_[i].begin(), mut_[i].end());
        n_oneway_ += out1_[i].size();
        n_mutual_ += mut_[i].size();
    }
    n_mutual_ /= 2;
}

DirectedGraph DirectedGraph::from_dyads(int n,
                                        const std::vector<std::tuple<int, int, EdgeType>>& dyads) {
    if (n < 0) throw std::invalid_argument("negative node count");
    DirectedGraph g;
    g.n_ = n;
    g.out1_.resize(n);
    g.in1_.resize(n);
    g.mut_.resize(n);
    for (const auto& [i, j, st] : dyads) {
        if (i < 0 || j < 0 || i >= n || j >= n || i == j)
            throw std::invalid_argument("bad dyad endpoint");
        switch (st) {
            case EdgeType::e00: throw std::invalid_argument("00 dyads are implicit");
            case EdgeType::e10:
                g.out1_[i].push_back(j);
                g.in1_[j].push_back(i);
                break;
            case EdgeType::e01:
                g.out1_[j].push_back(i);
                g.in1_[i].push_back(j);
                break;
            case EdgeType::e11:
                g.mut_[i].push_back(j);
                g.mut_[j].push_back(i);
                break;
        }
    }
    g.finalize();
    return g;
}

DirectedGraph DirectedGraph::from_edge_list(const std::vector<std::pair<int, int>>& edges, int n) {
    DirectedGraph g;
    g.n_ = n;
    g.out1_.resize(n);
    g.in1_.resize(n);
    g.mut_.resize(n);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    long idx = 0;
    for (const auto& [u, v] : edges) {
        ++idx;
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError("edge endpoint out of range [0, n)", idx);
        if (u == v) {
            ++g.selfloops_;
            continue;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) |
                                  static_cast<std::uint64_t>(v);
        if (!seen.insert(key).second) ++g.duplicates_;
    }
    for (const std::uint64_t key : seen) {
        const int u = static_cast<int>(key >> 32);
        const int v = static_cast<int>(key & 0xffffffffULL);
        const std::uint64_t rev = (static_cast<std::uint64_t>(v) << 32) |
                                  static_cast<std::uint64_t>(u);
        if (seen.count(rev)) {
            if (u < v) {
                g.mut_[u].push_back(v);
                g.mut_[v].push_back(u);
            }
        } else {
            g.out1_[u].push_back(v);
            g.in1_[v].push_back(u);
        }
    }
    g.finalize();
    return g;
}

EdgeType DirectedGraph::state(int i, int j) const {
    if (i == j) throw std::domain_error("no dyad between a node and itself");
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::domain_error("node id out of range");
    if (std::binary_search(mut_[i].begin(), mut_[i].end(), j)) return EdgeType::e11;
    if (std::binary_search(out1_[i].begin(), out1_[i].end(), j)) return EdgeType::e10;
    if (std::binary_search(in1_[i].begin(), in1_[i].end(), j)) return EdgeType::e01;
    return EdgeType::e00;
}

std::int64_t DirectedGraph::edge_type_count(EdgeType code) const {
    switch (code) {
        case EdgeType::e10:
        case EdgeType::e01: return n_oneway_;
        case EdgeType::e11: return 2 * n_mutual_;
        case EdgeType::e00:
            return static_cast<std::int64_t>(n_) * (n_ - 1) - 2 * n_oneway_ - 2 * n_mutual_;
    }
    return 0;
}

DegreeSummary DirectedGraph::degrees() const {
    DegreeSummary d;
    d.in_deg.resize(n_);
    d.out_deg.resize(n_);
    d.recip_deg.resize(n_);
    for (int i = 0; i < n_; ++i) {
        d.out_deg[i] = static_cast<int>(out1_[i].size());
        d.in_deg[i] = static_cast<int>(in1_[i].size());
        d.recip_deg[i] = static_cast<int>(mut_[i].size());
        d.d_max = std::max(d.d_max, std::max({d.out_deg[i], d.in_deg[i], d.recip_deg[i]}));
    }
    return d;
}

std::vector<std::pair<int, int>> DirectedGraph::to_edge_list() const {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(directed_edges()));
    for (int i = 0; i < n_; ++i) {
        for (int j : out1_[i]) edges.emplace_back(i, j);
        for (int j : mut_[i]) edges.emplace_back(i, j);
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

namespace {

bool parse_int(const std::string& tok, int& out) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && out >= 0;
}

}  // namespace

EdgeListFile read_edge_list(std::istream& in, int n_hint) {
    std::vector<std::pair<std::string, std::string>> raw;
    std::string line;
    long line_no = 0;
    std::vector<long> line_of;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b)) throw ParseError("expected 'source<TAB>target'", line_no);
        if (ls >> extra) throw ParseError("trailing tokens after target", line_no);
        raw.emplace_back(std::move(a), std::move(b));
        line_of.push_back(line_no);
    }

    bool all_ints = true;
    std::vector<std::pair<int, int>> int_edges;
    int_edges.reserve(raw.size());
    int max_id = -1;
    for (const auto& [a, b] : raw) {
        int u, v;
        if (!parse_int(a, u) || !parse_int(b, v)) {
            all_ints = false;
            break;
        }
        int_edges.emplace_back(u, v);
        max_id = std::max(max_id, std::max(u, v));
    }

    EdgeListFile out;
    if (all_ints) {
        int n = n_hint >= 0 ? n_hint : max_id + 1;
        if (n_hint >= 0 && max_id >= n_hint) {
            for (std::size_t k = 0; k < int_edges.size(); ++k)
                if (int_edges[k].first >= n_hint || int_edges[k].second >= n_hint)
                    throw ParseError("node id exceeds declared node count", line_of[k]);
        }
        out.graph = DirectedGraph::from_edge_list(int_edges, n);
        return out;
    }

    // Label mode: indices assigned in order of first appearance.
    out.label_mode = true;
    std::unordered_map<std::string, int> index;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    auto id_of = [&](const std::string& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(out.labels.size());
        index.emplace(s, id);
        out.labels.push_back(s);
        return id;
    };
    for (const auto& [a, b] : raw) {
        const int u = id_of(a);
        const int v = id_of(b);
        edges.emplace_back(u, v);
    }
    out.graph = DirectedGraph::from_edge_list(edges, static_cast<int>(out.labels.size()));
    return out;
}

EdgeListFile read_edge_list_file(const std::string& path, int n_hint) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list: " + path);
    return read_edge_list(in, n_hint);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
    for (const auto& [u, v] : g.to_edge_list()) out << u << '\t' << v << '\n';
}

}  // namespace lcr::graph
