#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace odflow {

// Node ids are 0-based everywhere in memory. Files, CLI flags and labels use
// 1-based ids; the conversion happens only when parsing or printing.

struct Link {
    int tail = -1;
    int head = -1;
    friend bool operator==(const Link&, const Link&) = default;
};

class Network {
  public:
    Network(int node_count, std::vector<Link> links, std::string name)
        : node_count_(node_count), links_(std::move(links)), name_(std::move(name)) {
        if (node_count_ <= 0) throw std::invalid_argument("network: node_count must be positive");
        out_links_.assign(node_count_, {});
        for (int li = 0; li < static_cast<int>(links_.size()); ++li) {
            const Link& l = links_[li];
            if (l.tail < 0 || l.tail >= node_count_ || l.head < 0 || l.head >= node_count_)
                throw std::invalid_argument("network: link references node id out of range");
            if (l.tail == l.head) throw std::invalid_argument("network: self-loop link");
            if (!link_index_.emplace(std::make_pair(l.tail, l.head), li).second)
                throw std::invalid_argument("network: duplicate link");
            out_links_[l.tail].push_back(li);
        }
        // Neighbors in ascending head order so traversals are deterministic.
        for (auto& out : out_links_)
            std::sort(out.begin(), out.end(),
                      [&](int a, int b) { return links_[a].head < links_[b].head; });
    }

    int node_count() const { return node_count_; }
    int link_count() const { return static_cast<int>(links_.size()); }
    const std::vector<Link>& links() const { return links_; }
    const Link& link(int i) const { return links_[i]; }
    const std::string& name() const { return name_; }
    const std::vector<int>& out_links(int node) const { return out_links_[node]; }

    // -1 if the directed link is absent.
    int link_index(int tail, int head) const {
        auto it = link_index_.find({tail, head});
        return it == link_index_.end() ? -1 : it->second;
    }

    bool has_link(int tail, int head) const { return link_index(tail, head) >= 0; }

    // 1-based display label "tail->head".
    std::string link_label(int i) const {
        return std::to_string(links_[i].tail + 1) + "->" + std::to_string(links_[i].head + 1);
    }

  private:
    int node_count_;
    std::vector<Link> links_;
    std::string name_;
    std::vector<std::vector<int>> out_links_;
    std::map<std::pair<int, int>, int> link_index_;
};

// 4-neighbor lattice, node ids row-major. The unidirectional variant keeps
// only rightward and downward links; the bidirectional variant has both
// directions on every lattice edge.
inline Network build_grid(int rows, int cols, bool bidirectional) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("build_grid: rows and cols must be >= 2");
    std::vector<Link> links;
    const auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int n = id(r, c);
            if (c + 1 < cols) links.push_back({n, id(r, c + 1)});
            if (r + 1 < rows) links.push_back({n, id(r + 1, c)});
            if (bidirectional) {
                if (c > 0) links.push_back({n, id(r, c - 1)});
                if (r > 0) links.push_back({n, id(r - 1, c)});
            }
        }
    }
    std::string name = std::to_string(rows) + "x" + std::to_string(cols) +
                       (bidirectional ? "-bidirectional" : "-unidirectional");
    return Network(rows * cols, std::move(links), std::move(name));
}

// Edge-list document: '#' starts a comment, first payload line is
// "nodes <N>", every following line one directed link "<tail> <head>"
// with 1-based node ids.
inline Network load_edge_list(const std::string& text, const std::string& name = "edge-list") {
    std::istringstream in(text);
    std::string line;
    int node_count = -1;
    std::vector<Link> links;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first)) continue;  // blank
        const auto fail = [&](const std::string& what) {
            throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": " + what);
        };
        if (node_count < 0) {
            int n = 0;
            if (first != "nodes" || !(fields >> n) || n <= 0) fail("expected header 'nodes <N>'");
            std::string extra;
            if (fields >> extra) fail("trailing tokens after header");
            node_count = n;
            continue;
        }
        int tail = 0, head = 0;
        try {
            std::size_t used = 0;
            tail = std::stoi(first, &used);
            if (used != first.size()) fail("malformed tail node id");
        } catch (const std::logic_error&) {
            fail("malformed tail node id");
        }
        if (!(fields >> head)) fail("expected '<tail> <head>'");
        std::string extra;
        if (fields >> extra) fail("trailing tokens after link");
        if (tail < 1 || tail > node_count || head < 1 || head > node_count) fail("node id out of range");
        if (tail == head) fail("self-loop link");
        links.push_back({tail - 1, head - 1});
    }
    if (node_count < 0) throw std::invalid_argument("edge list: missing 'nodes <N>' header");
    return Network(node_count, std::move(links), name);  // ctor rejects duplicates
}

inline std::string to_edge_list(const Network& net) {
    std::ostringstream out;
    out << "# " << net.name() << "\n";
    out << "nodes " << net.node_count() << "\n";
    for (const Link& l : net.links()) out << l.tail + 1 << " " << l.head + 1 << "\n";
    return out.str();
}

struct Path {
    std::vector<int> nodes;  // node_count = links + 1, all distinct
    std::vector<int> links;  // indices into Network::links()

    int origin() const { return nodes.front(); }
    int destination() const { return nodes.back(); }
    int length() const { return static_cast<int>(links.size()); }
};

// All loop-free directed paths with 1..tau_max links, plus the OD pairs and
// origins they induce. Ordering is deterministic: paths lexicographic by
// node sequence, od_pairs and origins sorted ascending.
struct PathSet {
    int tau_max = 0;
    std::vector<Path> paths;
    std::vector<std::pair<int, int>> od_pairs;
    std::vector<int> origins;

    // Derived indexes.
    std::vector<std::vector<int>> paths_of_od;    // od index -> path indices
    std::vector<std::vector<int>> ods_of_origin;  // origin index -> od indices
    std::map<std::pair<int, int>, int> od_index_map;
    std::map<int, int> origin_index_map;

    int od_count() const { return static_cast<int>(od_pairs.size()); }
    int origin_count() const { return static_cast<int>(origins.size()); }

    int od_index(int o, int d) const {
        auto it = od_index_map.find({o, d});
        return it == od_index_map.end() ? -1 : it->second;
    }
    int origin_index(int o) const {
        auto it = origin_index_map.find(o);
        return it == origin_index_map.end() ? -1 : it->second;
    }

    std::string od_label(int od) const {
        return std::to_string(od_pairs[od].first + 1) + "->" + std::to_string(od_pairs[od].second + 1);
    }
    std::string origin_label(int oi) const { return std::to_string(origins[oi] + 1); }
};

inline PathSet enumerate_paths(const Network& net, int tau_max) {
    if (tau_max < 1) throw std::invalid_argument("enumerate_paths: tau_max must be >= 1");
    PathSet ps;
    ps.tau_max = tau_max;

    // DFS in ascending-neighbor order emits paths in lexicographic
    // node-sequence order, a prefix before its extensions.
    std::vector<char> on_path(net.node_count(), 0);
    std::vector<int> nodes, link_ids;
    const auto dfs = [&](auto&& self, int node) -> void {
        if (static_cast<int>(link_ids.size()) == tau_max) return;
        for (int li : net.out_links(node)) {
            const int next = net.link(li).head;
            if (on_path[next]) continue;
            nodes.push_back(next);
            link_ids.push_back(li);
            on_path[next] = 1;
            ps.paths.push_back({nodes, link_ids});
            self(self, next);
            on_path[next] = 0;
            link_ids.pop_back();
            nodes.pop_back();
        }
    };
    for (int origin = 0; origin < net.node_count(); ++origin) {
        nodes = {origin};
        on_path[origin] = 1;
        dfs(dfs, origin);
        on_path[origin] = 0;
    }

    for (const Path& p : ps.paths) {
        const std::pair<int, int> od{p.origin(), p.destination()};
        if (ps.od_index_map.emplace(od, 0).second) ps.od_pairs.push_back(od);
    }
    std::sort(ps.od_pairs.begin(), ps.od_pairs.end());
    for (int i = 0; i < static_cast<int>(ps.od_pairs.size()); ++i) ps.od_index_map[ps.od_pairs[i]] = i;

    for (const auto& od : ps.od_pairs) {
        if (ps.origin_index_map.emplace(od.first, 0).second) ps.origins.push_back(od.first);
    }
    std::sort(ps.origins.begin(), ps.origins.end());
    for (int i = 0; i < static_cast<int>(ps.origins.size()); ++i) ps.origin_index_map[ps.origins[i]] = i;

    ps.paths_of_od.assign(ps.od_pairs.size(), {});
    for (int pi = 0; pi < static_cast<int>(ps.paths.size()); ++pi) {
        const Path& p = ps.paths[pi];
        ps.paths_of_od[ps.od_index(p.origin(), p.destination())].push_back(pi);
    }
    ps.ods_of_origin.assign(ps.origins.size(), {});
    for (int oi = 0; oi < static_cast<int>(ps.od_pairs.size()); ++oi)
        ps.ods_of_origin[ps.origin_index(ps.od_pairs[oi].first)].push_back(oi);
    return ps;
}

}  // namespace odflow
