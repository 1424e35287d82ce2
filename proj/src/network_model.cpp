#include "netfec/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "netfec/error.hpp"

namespace netfec {
namespace {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool connected(int n, const std::vector<std::vector<std::pair<int, int>>>& adj) {
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (auto [w, l] : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

struct PathKey {
  int spans;
  std::vector<int> nodes;
  auto operator<=>(const PathKey&) const = default;
};

// Shortest path by spans with lexicographic tie-break on the node sequence.
// Labels carry the full path, which is affordable for planning-size graphs.
std::optional<PathKey> dijkstra(const Topology& topo, int s, int d,
                                const std::vector<char>& node_blocked,
                                const std::set<std::pair<int, int>>& arc_blocked) {
  const int n = topo.node_count();
  std::vector<std::optional<PathKey>> best(n);
  std::vector<char> done(n, 0);
  std::priority_queue<PathKey, std::vector<PathKey>, std::greater<>> pq;
  best[s] = PathKey{0, {s}};
  pq.push(*best[s]);
  while (!pq.empty()) {
    PathKey cur = pq.top();
    pq.pop();
    const int v = cur.nodes.back();
    if (done[v] || cur != *best[v]) continue;
    done[v] = 1;
    if (v == d) return cur;
    for (auto [w, l] : topo.adjacent(v)) {
      if (node_blocked[w] || done[w] || arc_blocked.count({v, w})) continue;
      PathKey next{cur.spans + topo.links()[l].spans, cur.nodes};
      next.nodes.push_back(w);
      if (!best[w] || next < *best[w]) {
        best[w] = next;
        pq.push(std::move(next));
      }
    }
  }
  return std::nullopt;
}

int link_between(const Topology& topo, int a, int b) {
  for (auto [w, l] : topo.adjacent(a)) {
    if (w == b) return l;
  }
  throw Error(ErrorCode::kDomain, "nodes are not adjacent");
}

}  // namespace

int spans_for_length(double length_km) {
  if (!(length_km > 0.0) || std::isinf(length_km)) {
    throw Error(ErrorCode::kBadLength, "link length must be positive and finite");
  }
  return std::max(1, static_cast<int>(std::ceil(length_km / kSpanLengthKm - 1e-9)));
}

Topology::Topology(std::string name, std::vector<Node> nodes, std::vector<Link> links)
    : name_(std::move(name)), nodes_(std::move(nodes)), links_(std::move(links)) {
  const int n = node_count();
  if (n < 2) throw Error(ErrorCode::kParse, "topology needs at least two nodes");
  std::set<int> ids;
  for (const auto& node : nodes_) {
    if (!ids.insert(node.id).second) {
      throw Error(ErrorCode::kParse, "duplicate node id " + std::to_string(node.id));
    }
  }
  adj_.assign(n, {});
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    if (l.a < 0 || l.a >= n || l.b < 0 || l.b >= n) throw Error(ErrorCode::kParse, "link endpoint out of range");
    if (l.a == l.b) throw Error(ErrorCode::kParse, "self-loop at node " + nodes_[l.a].name);
    if (l.spans < 1) throw Error(ErrorCode::kBadLength, "link span count must be at least 1");
    if (!seen.insert({std::min(l.a, l.b), std::max(l.a, l.b)}).second) {
      throw Error(ErrorCode::kParse, "duplicate link " + nodes_[l.a].name + "-" + nodes_[l.b].name);
    }
    adj_[l.a].emplace_back(l.b, static_cast<int>(i));
    adj_[l.b].emplace_back(l.a, static_cast<int>(i));
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  if (!connected(n, adj_)) throw Error(ErrorCode::kDisconnected, "topology '" + name_ + "' is not connected");
}

int Topology::index_of_id(int id) const {
  for (int i = 0; i < node_count(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  throw Error(ErrorCode::kParse, "unknown node id " + std::to_string(id));
}

Topology Topology::from_json(std::string_view text, std::string_view fallback_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("topology JSON: ") + e.what());
  }
  try {
    std::string name = doc.value("name", std::string(fallback_name));
    std::vector<Node> nodes;
    std::map<int, int> index;
    for (const auto& jn : doc.at("nodes")) {
      const int id = jn.at("id").get<int>();
      std::string label = jn.contains("name") ? jn.at("name").get<std::string>() : std::to_string(id);
      index.emplace(id, static_cast<int>(nodes.size()));
      nodes.push_back({id, std::move(label)});
    }
    std::vector<Link> links;
    for (const auto& jl : doc.at("links")) {
      const int a = jl.at("a").get<int>();
      const int b = jl.at("b").get<int>();
      if (!index.count(a) || !index.count(b)) {
        throw Error(ErrorCode::kParse, "link refers to unknown node id");
      }
      Link link{index[a], index[b], std::nullopt, 0};
      if (jl.contains("length_km")) {
        link.length_km = jl.at("length_km").get<double>();
        link.spans = spans_for_length(*link.length_km);
      }
      if (jl.contains("spans")) {
        link.spans = jl.at("spans").get<int>();
        if (link.spans < 1) throw Error(ErrorCode::kBadLength, "link span count must be at least 1");
      }
      if (!jl.contains("length_km") && !jl.contains("spans")) {
        throw Error(ErrorCode::kBadLength, "link needs length_km or spans");
      }
      links.push_back(link);
    }
    return Topology(std::move(name), std::move(nodes), std::move(links));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("topology JSON: ") + e.what());
  }
}

Topology load_topology(const std::filesystem::path& file) {
  return Topology::from_json(read_file(file), file.stem().string());
}

TrafficProfile::TrafficProfile(int n, std::vector<double> entries) : n_(n), t_(std::move(entries)) {
  if (n < 2 || t_.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::kParse, "traffic matrix must be N x N with N >= 2");
  }
  double sum = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int d = 0; d < n; ++d) {
      const double v = t_[static_cast<std::size_t>(s) * n + d];
      if (!(v >= 0.0) || std::isinf(v)) throw Error(ErrorCode::kParse, "traffic entries must be finite and non-negative");
      if (s == d && v != 0.0) throw Error(ErrorCode::kParse, "traffic diagonal must be zero");
      sum += v;
    }
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::kParse, "traffic matrix has no demand");
  for (double& v : t_) v /= sum;
}

TrafficProfile uniform_traffic(int n) {
  if (n < 2) throw Error(ErrorCode::kDomain, "uniform traffic needs n >= 2");
  std::vector<double> t(static_cast<std::size_t>(n) * n, 1.0 / (static_cast<double>(n) * (n - 1)));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i) * n + i] = 0.0;
  return TrafficProfile(n, std::move(t));
}

TrafficProfile parse_traffic_csv(std::string_view text, int n) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::vector<double> values;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "bad traffic entry '" + tok + "'");
    }
  }
  if (values.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::kParse, "traffic matrix has " + std::to_string(values.size()) +
                                       " entries, expected " + std::to_string(n * n));
  }
  return TrafficProfile(n, std::move(values));
}

TrafficProfile load_traffic(const std::filesystem::path& file, int n) {
  return parse_traffic_csv(read_file(file), n);
}

std::vector<CandidatePath> k_shortest_paths(const Topology& topo, int s, int d, int k) {
  const int n = topo.node_count();
  if (s < 0 || s >= n || d < 0 || d >= n || s == d) throw Error(ErrorCode::kDomain, "invalid node pair");
  if (k < 1) throw Error(ErrorCode::kDomain, "k must be at least 1");

  std::vector<char> no_nodes(n, 0);
  auto first = dijkstra(topo, s, d, no_nodes, {});
  if (!first) {
    throw Error(ErrorCode::kNoPath, "no path between " + topo.nodes()[s].name + " and " + topo.nodes()[d].name);
  }
  std::vector<PathKey> found{*first};
  std::set<PathKey> candidates;
  while (static_cast<int>(found.size()) < k) {
    const PathKey& prev = found.back();
    for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
      const std::vector<int> root(prev.nodes.begin(), prev.nodes.begin() + i + 1);
      std::set<std::pair<int, int>> arcs;
      for (const auto& p : found) {
        if (p.nodes.size() > i + 1 && std::equal(root.begin(), root.end(), p.nodes.begin())) {
          arcs.insert({p.nodes[i], p.nodes[i + 1]});
        }
      }
      std::vector<char> blocked(n, 0);
      for (std::size_t j = 0; j < i; ++j) blocked[root[j]] = 1;
      auto spur = dijkstra(topo, root.back(), d, blocked, arcs);
      if (!spur) continue;
      PathKey total{0, root};
      total.nodes.insert(total.nodes.end(), spur->nodes.begin() + 1, spur->nodes.end());
      for (std::size_t j = 0; j + 1 < total.nodes.size(); ++j) {
        total.spans += topo.links()[link_between(topo, total.nodes[j], total.nodes[j + 1])].spans;
      }
      if (std::find(found.begin(), found.end(), total) == found.end()) candidates.insert(std::move(total));
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }

  std::vector<CandidatePath> out;
  for (const auto& p : found) {
    CandidatePath cp{s, d, p.nodes, {}, p.spans};
    for (std::size_t j = 0; j + 1 < p.nodes.size(); ++j) cp.links.push_back(link_between(topo, p.nodes[j], p.nodes[j + 1]));
    out.push_back(std::move(cp));
  }
  return out;
}

}  // namespace netfec
