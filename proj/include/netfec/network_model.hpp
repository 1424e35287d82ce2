#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netfec {

inline constexpr double kSpanLengthKm = 80.0;
inline constexpr int kDefaultKPaths = 16;

struct Node {
  int id;
  std::string name;
};

// Undirected fiber pair. Endpoints are node indices (positions in
// Topology::nodes()), not the ids from the file.
struct Link {
  int a;
  int b;
  std::optional<double> length_km;
  int spans;
};

class Topology {
 public:
  Topology(std::string name, std::vector<Node> nodes, std::vector<Link> links);

  // {"name":?, "nodes":[{"id","name"}], "links":[{"a","b","length_km"|"spans"}]}
  static Topology from_json(std::string_view text, std::string_view fallback_name = "network");

  const std::string& name() const noexcept { return name_; }
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Link>& links() const noexcept { return links_; }
  // Neighbours of node v as (neighbour, link index), sorted by neighbour.
  const std::vector<std::pair<int, int>>& adjacent(int v) const { return adj_.at(v); }
  int index_of_id(int id) const;

 private:
  std::string name_;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
};

Topology load_topology(const std::filesystem::path& file);

int spans_for_length(double length_km);

// Dense N x N demand matrix normalized to unit sum with a zero diagonal.
class TrafficProfile {
 public:
  TrafficProfile(int n, std::vector<double> entries);

  int size() const noexcept { return n_; }
  double at(int s, int d) const { return t_.at(static_cast<std::size_t>(s) * n_ + d); }

 private:
  int n_;
  std::vector<double> t_;
};

TrafficProfile uniform_traffic(int n);
// Whitespace- or comma-separated N x N matrix; rescaled to unit sum.
TrafficProfile parse_traffic_csv(std::string_view text, int n);
TrafficProfile load_traffic(const std::filesystem::path& file, int n);

struct CandidatePath {
  int s;
  int d;
  std::vector<int> nodes;
  std::vector<int> links;
  int n_spans;
  double snr = 0.0;
};

// Up to k loopless s-d paths by span count; ties go to the lexicographically
// smaller node sequence. Throws Error(kNoPath) when s and d are disconnected.
std::vector<CandidatePath> k_shortest_paths(const Topology& topo, int s, int d, int k);

}  // namespace netfec
