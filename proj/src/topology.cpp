#include "anypath/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace anypath {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t')
            ++i;
        if (i > start)
            fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

int parse_int(const std::string& tok, int line, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw topology_error(line, std::string("expected integer for ") + what + ", got '" + tok + "'");
    return value;
}

double parse_prob(const std::string& tok, int line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw topology_error(line, "expected decimal probability, got '" + tok + "'");
    return value;
}

std::string format_prob(double p) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, ptr);
}

} // namespace

Topology::Topology(int node_count, NodeId source, NodeId destination, std::vector<Link> links)
    : node_count_(node_count), source_(source), destination_(destination), links_(std::move(links)) {
    std::sort(links_.begin(), links_.end(),
              [](const Link& a, const Link& b) { return a.from != b.from ? a.from < b.from : a.to < b.to; });
    validate();
    build_adjacency();
}

void Topology::validate() const {
    if (node_count_ < 1)
        throw topology_error(0, "node count must be positive");
    if (source_ < 1 || source_ > node_count_)
        throw topology_error(0, "source id out of range 1.." + std::to_string(node_count_));
    if (destination_ < 1 || destination_ > node_count_)
        throw topology_error(0, "destination id out of range 1.." + std::to_string(node_count_));
    if (source_ == destination_)
        throw topology_error(0, "source equals destination");
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const Link& l = links_[i];
        if (l.from < 1 || l.from > node_count_ || l.to < 1 || l.to > node_count_)
            throw topology_error(0, "link node id out of range 1.." + std::to_string(node_count_));
        if (l.from == l.to)
            throw topology_error(0, "self-link at node " + std::to_string(l.from));
        if (l.prob < 0.0 || l.prob > 1.0)
            throw topology_error(0, "link probability outside [0,1]");
        if (i > 0 && links_[i - 1].from == l.from && links_[i - 1].to == l.to)
            throw topology_error(0, "duplicate link " + std::to_string(l.from) + " -> " + std::to_string(l.to));
    }
    // reachability over positive-probability links only
    std::vector<char> seen(static_cast<std::size_t>(node_count_) + 1, 0);
    std::vector<NodeId> stack{source_};
    seen[static_cast<std::size_t>(source_)] = 1;
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (const Link& l : links_) {
            if (l.from == n && l.prob > 0.0 && !seen[static_cast<std::size_t>(l.to)]) {
                seen[static_cast<std::size_t>(l.to)] = 1;
                stack.push_back(l.to);
            }
        }
    }
    if (!seen[static_cast<std::size_t>(destination_)])
        throw topology_error(0, "destination unreachable from source over positive-probability links");
}

void Topology::build_adjacency() {
    out_.assign(static_cast<std::size_t>(node_count_) + 1, {});
    in_.assign(static_cast<std::size_t>(node_count_) + 1, {});
    link_probs_.clear();
    link_probs_.reserve(links_.size());
    for (const Link& l : links_) {
        out_[static_cast<std::size_t>(l.from)].emplace_back(l.to, l.prob);
        in_[static_cast<std::size_t>(l.to)].push_back(l.from);
        link_probs_.push_back(l.prob);
    }
    max_out_degree_ = 0;
    for (const auto& adj : out_)
        max_out_degree_ = std::max(max_out_degree_, static_cast<int>(adj.size()));
    for (auto& preds : in_)
        std::sort(preds.begin(), preds.end());
}

Topology Topology::parse(std::istream& in) {
    int node_count = -1;
    NodeId source = 0, destination = 0;
    bool have_source = false, have_dest = false;
    std::vector<Link> links;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        auto fields = split_fields(line);
        if (fields.empty() || fields[0][0] == '#')
            continue;
        const std::string& kw = fields[0];
        if (kw == "nodes") {
            if (node_count >= 0)
                throw topology_error(lineno, "duplicate 'nodes' directive");
            if (fields.size() != 2)
                throw topology_error(lineno, "usage: nodes <N>");
            node_count = parse_int(fields[1], lineno, "node count");
            if (node_count < 1)
                throw topology_error(lineno, "node count must be positive");
            continue;
        }
        if (node_count < 0)
            throw topology_error(lineno, "'nodes' must be the first directive");
        if (kw == "source" || kw == "dest") {
            bool& have = (kw == "source") ? have_source : have_dest;
            if (have)
                throw topology_error(lineno, "duplicate '" + kw + "' directive");
            if (fields.size() != 2)
                throw topology_error(lineno, "usage: " + kw + " <id>");
            NodeId id = parse_int(fields[1], lineno, kw.c_str());
            if (id < 1 || id > node_count)
                throw topology_error(lineno, kw + " id out of range 1.." + std::to_string(node_count));
            (kw == "source" ? source : destination) = id;
            have = true;
        } else if (kw == "link") {
            if (fields.size() != 4)
                throw topology_error(lineno, "usage: link <from> <to> <prob>");
            Link l;
            l.from = parse_int(fields[1], lineno, "link source");
            l.to = parse_int(fields[2], lineno, "link target");
            l.prob = parse_prob(fields[3], lineno);
            if (l.from < 1 || l.from > node_count || l.to < 1 || l.to > node_count)
                throw topology_error(lineno, "link node id out of range 1.." + std::to_string(node_count));
            if (l.from == l.to)
                throw topology_error(lineno, "self-link at node " + std::to_string(l.from));
            if (l.prob < 0.0 || l.prob > 1.0)
                throw topology_error(lineno, "link probability outside [0,1]");
            for (const Link& prev : links)
                if (prev.from == l.from && prev.to == l.to)
                    throw topology_error(lineno,
                                         "duplicate link " + std::to_string(l.from) + " -> " + std::to_string(l.to));
            links.push_back(l);
        } else {
            throw topology_error(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (node_count < 0)
        throw topology_error(0, "missing 'nodes' directive");
    if (!have_source)
        throw topology_error(0, "missing 'source' directive");
    if (!have_dest)
        throw topology_error(0, "missing 'dest' directive");
    return Topology(node_count, source, destination, std::move(links));
}

Topology Topology::parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

Topology Topology::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw topology_error(0, "cannot open topology file: " + path);
    return parse(in);
}

std::string Topology::serialize() const {
    std::string out;
    out += "nodes " + std::to_string(node_count_) + "\n";
    out += "source " + std::to_string(source_) + "\n";
    out += "dest " + std::to_string(destination_) + "\n";
    for (const Link& l : links_)
        out += "link " + std::to_string(l.from) + " " + std::to_string(l.to) + " " + format_prob(l.prob) + "\n";
    return out;
}

std::span<const std::pair<NodeId, double>> Topology::neighbors(NodeId node) const {
    if (node < 1 || node > node_count_)
        throw std::out_of_range("unknown node id " + std::to_string(node));
    return out_[static_cast<std::size_t>(node)];
}

std::span<const NodeId> Topology::in_neighbors(NodeId node) const {
    if (node < 1 || node > node_count_)
        throw std::out_of_range("unknown node id " + std::to_string(node));
    return in_[static_cast<std::size_t>(node)];
}

int Topology::link_index(NodeId from, NodeId to) const {
    auto it = std::lower_bound(links_.begin(), links_.end(), std::pair<NodeId, NodeId>{from, to},
                               [](const Link& l, const std::pair<NodeId, NodeId>& key) {
                                   return l.from != key.first ? l.from < key.first : l.to < key.second;
                               });
    if (it == links_.end() || it->from != from || it->to != to)
        return -1;
    return static_cast<int>(it - links_.begin());
}

} // namespace anypath
