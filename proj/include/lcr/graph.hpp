#ifndef LCR_GRAPH_HPP
#define LCR_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lcr/edge_type.hpp"

namespace lcr::graph {

struct DegreeSummary {
    // Per-node counts of incident one-way-in (01), one-way-out (10) and
    // double (11) dyads, under the ordered-pair convention that
    // out_deg[i] = #{j : type(i,j) = 10}.
    std::vector<int> in_deg;
    std::vector<int> out_deg;
    std::vector<int> recip_deg;
    int d_max = 0;  // max over nodes of max(in, out, recip)
};

// Simple directed graph stored as dyad states: per node, sorted lists of
// one-way-out, one-way-in and mutual neighbours (00 dyads are implicit).
// Immutable after construction.
class DirectedGraph {
public:
    DirectedGraph() = default;

    // Dyad list constructor: (i, j, state) with i < j and state != e00.
    static DirectedGraph from_dyads(int n,
                                    const std::vector<std::tuple<int, int, EdgeType>>& dyads);

    // Duplicate edges collapse (counted), self-loops are dropped (counted),
    // ids outside [0, n) raise ParseError carrying the 1-based input index.
    static DirectedGraph from_edge_list(const std::vector<std::pair<int, int>>& edges, int n);

    int n() const { return n_; }

    // State of the ordered pair (i, j); throws std::domain_error when i == j.
    EdgeType state(int i, int j) const;

    // Number of ordered pairs (i != j) of the given type; the 00 count is
    // n(n-1) minus the others (the 00 view is never materialized).
    std::int64_t edge_type_count(EdgeType code) const;

    DegreeSummary degrees() const;

    // Sorted neighbour views.
    const std::vector<int>& out_oneway(int i) const { return out1_[i]; }
    const std::vector<int>& in_oneway(int i) const { return in1_[i]; }
    const std::vector<int>& mutual(int i) const { return mut_[i]; }

    std::int64_t oneway_dyads() const { return n_oneway_; }
    std::int64_t mutual_dyads() const { return n_mutual_; }
    std::int64_t directed_edges() const { return 2 * n_mutual_ + n_oneway_; }

    // Directed edges (i, j) with A_ij = 1, sorted; inverse of from_edge_list.
    std::vector<std::pair<int, int>> to_edge_list() const;

    long duplicate_count() const { return duplicates_; }
    long selfloop_count() const { return selfloops_; }

private:
    int n_ = 0;
    std::vector<std::vector<int>> out1_, in1_, mut_;
    std::int64_t n_oneway_ = 0, n_mutual_ = 0;
    long duplicates_ = 0, selfloops_ = 0;

    void finalize();
    friend DirectedGraph build_from_states(int n, std::vector<std::vector<int>>&& out1,
                                           std::vector<std::vector<int>>&& in1,
                                           std::vector<std::vector<int>>&& mut);
};

// Edge-list file format: UTF-8, one "source<TAB>target" per line, '#' starts
// a comment line. Ids are either all nonnegative integers or arbitrary labels;
// labels are mapped to dense indices in order of first appearance and the map
// is returned so callers can emit it alongside results.
struct EdgeListFile {
    DirectedGraph graph;
    std::vector<std::string> labels;  // empty in integer-id mode
    bool label_mode = false;
};

EdgeListFile read_edge_list(std::istream& in, int n_hint = -1);
EdgeListFile read_edge_list_file(const std::string& path, int n_hint = -1);
void write_edge_list(std::ostream& out, const DirectedGraph& g);

}  // namespace lcr::graph

#endif
