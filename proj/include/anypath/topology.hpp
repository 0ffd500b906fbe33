#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anypath {

using NodeId = int; // 1-based

struct Link {
    NodeId from = 0;
    NodeId to = 0;
    double prob = 0.0;
};

/// Raised on malformed topology input; `line` is 1-based, 0 when the error is
/// not tied to a specific line (missing directive, unreachable destination).
class topology_error : public std::runtime_error {
public:
    topology_error(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

/// Directed mesh with per-link delivery probabilities. Immutable after
/// construction; safe to share read-only across concurrent epoch runs.
class Topology {
public:
    /// Build from explicit parts; runs the same validation as parsing.
    Topology(int node_count, NodeId source, NodeId destination, std::vector<Link> links);

    static Topology parse(std::istream& in);
    static Topology parse(const std::string& text);
    static Topology load(const std::string& path);

    /// Canonical text form: header directives, then links sorted by
    /// (from, to), probabilities in shortest round-trip notation.
    std::string serialize() const;

    int node_count() const { return node_count_; }
    NodeId source() const { return source_; }
    NodeId destination() const { return destination_; }

    /// Links in canonical (from, to) order; link indexes used throughout the
    /// library refer to positions in this vector.
    const std::vector<Link>& links() const { return links_; }
    int link_count() const { return static_cast<int>(links_.size()); }

    /// True delivery probabilities in link-index order.
    const std::vector<double>& link_probs() const { return link_probs_; }

    /// Out-neighbors of `node` in ascending id order with their true probs.
    std::span<const std::pair<NodeId, double>> neighbors(NodeId node) const;

    /// In-neighbors of `node` in ascending id order (ids only).
    std::span<const NodeId> in_neighbors(NodeId node) const;

    int max_out_degree() const { return max_out_degree_; }

    /// Position of (from, to) in links(), or -1 when absent.
    int link_index(NodeId from, NodeId to) const;

private:
    void validate() const;
    void build_adjacency();

    int node_count_ = 0;
    NodeId source_ = 0;
    NodeId destination_ = 0;
    std::vector<Link> links_;
    std::vector<double> link_probs_;
    std::vector<std::vector<std::pair<NodeId, double>>> out_;
    std::vector<std::vector<NodeId>> in_;
    int max_out_degree_ = 0;
};

} // namespace anypath
