#include "motifclust/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include "motifclust/errors.hpp"
#include "motifclust/rng.hpp"

namespace motifclust {

namespace {

std::vector<std::vector<int>> adjacency_from_matrix(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (w(i, j) > 0.0) adjacency[static_cast<std::size_t>(i)].push_back(j);
    }
  }
  return adjacency;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

bool is_comment_or_blank(std::string_view line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

std::int64_t parse_node_id(std::string_view token, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value < 0) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(token) +
                     "' is not a nonnegative integer node id");
  }
  return value;
}

double parse_weight(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(token) +
                     "' is not a finite weight");
  }
  return value;
}

void strip_carriage_return(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace

WeightedGraph::WeightedGraph(Matrix weights) : weights_(std::move(weights)) {
  const auto n = weights_.rows();
  if (n == 0) throw EmptyGraph("weight matrix has no nodes");
  if (weights_.cols() != n) {
    throw ShapeMismatch("weight matrix is " + std::to_string(n) + "x" +
                        std::to_string(weights_.cols()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw InvalidParam("weight matrix has nonzero diagonal at node " + std::to_string(i));
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Validity first: a NaN would also fail the symmetry comparison, and
      // the invalid-value message is the useful one.
      if (weights_(i, j) < 0.0 || !std::isfinite(weights_(i, j)) ||
          weights_(j, i) < 0.0 || !std::isfinite(weights_(j, i))) {
        throw InvalidParam("weight at (" + std::to_string(i) + "," + std::to_string(j) +
                           ") must be finite and nonnegative");
      }
      if (weights_(i, j) != weights_(j, i)) {
        throw NotSymmetric("weight matrix differs at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
    }
  }
  adjacency_ = adjacency_from_matrix(weights_);
  node_ids_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) node_ids_[static_cast<std::size_t>(i)] = i;
}

WeightedGraph WeightedGraph::from_edges(int n, const std::vector<Edge>& edges) {
  if (n < 1) throw EmptyGraph("graph needs at least one node");
  Matrix w = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw InvalidParam("edge endpoint out of range: (" + std::to_string(e.u) + "," +
                         std::to_string(e.v) + ") with n=" + std::to_string(n));
    }
    if (e.u == e.v) throw SelfLoop("self loop at node " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw NonPositiveWeight("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") has weight " + format_double(e.weight));
    }
    if (w(e.u, e.v) != 0.0) {
      throw DuplicateEdge("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") listed more than once");
    }
    w(e.u, e.v) = e.weight;
    w(e.v, e.u) = e.weight;
  }
  return WeightedGraph(std::move(w));
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  struct RawEdge {
    std::int64_t u, v;
    double w;
    std::size_t line_no;
  };
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_carriage_return(line);
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'u v w', got " +
                       std::to_string(fields.size()) + " fields");
    }
    const std::int64_t u = parse_node_id(fields[0], line_no);
    const std::int64_t v = parse_node_id(fields[1], line_no);
    const double w = parse_weight(fields[2], line_no);
    if (u == v) {
      throw SelfLoop("line " + std::to_string(line_no) + ": self loop at node " +
                     std::to_string(u));
    }
    if (w <= 0.0) {
      throw NonPositiveWeight("line " + std::to_string(line_no) + ": weight " +
                              format_double(w) + " is not positive");
    }
    raw.push_back({u, v, w, line_no});
  }
  if (raw.empty()) throw EmptyGraph("'" + path + "' contains no edges");

  // External ids may be sparse; map them to contiguous indices in id order.
  std::map<std::int64_t, int> index_of;
  for (const RawEdge& e : raw) {
    index_of.emplace(e.u, 0);
    index_of.emplace(e.v, 0);
  }
  std::vector<std::int64_t> ids;
  ids.reserve(index_of.size());
  for (auto& [id, idx] : index_of) {
    idx = static_cast<int>(ids.size());
    ids.push_back(id);
  }

  const int n = static_cast<int>(ids.size());
  Matrix w = Matrix::Zero(n, n);
  for (const RawEdge& e : raw) {
    const int i = index_of[e.u];
    const int j = index_of[e.v];
    if (w(i, j) != 0.0) {
      throw DuplicateEdge("line " + std::to_string(e.line_no) + ": edge (" +
                          std::to_string(e.u) + "," + std::to_string(e.v) +
                          ") already listed");
    }
    w(i, j) = e.w;
    w(j, i) = e.w;
  }
  WeightedGraph graph(std::move(w));
  graph.node_ids_ = std::move(ids);
  return graph;
}

void write_edge_list(const WeightedGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const int n = graph.size();
  const auto& ids = graph.node_ids();
  for (int i = 0; i < n; ++i) {
    for (int j : graph.neighbors(i)) {
      if (j <= i) continue;
      out << ids[static_cast<std::size_t>(i)] << ' ' << ids[static_cast<std::size_t>(j)]
          << ' ' << format_double(graph.weight(i, j)) << '\n';
    }
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void CommunityLabels::validate() const {
  if (k < 1) throw LabelMismatch("k must be >= 1, got " + std::to_string(k));
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int v = values[i];
    if (v < 1 || v > k) {
      throw LabelMismatch("node " + std::to_string(i) + " has label " + std::to_string(v) +
                          " outside 1.." + std::to_string(k));
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
  for (int c = 0; c < k; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      throw EmptyCluster("community " + std::to_string(c + 1) + " has no members");
    }
  }
}

std::vector<int> CommunityLabels::community_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int v : values) {
    if (v >= 1 && v <= k) ++sizes[static_cast<std::size_t>(v - 1)];
  }
  return sizes;
}

bool CommunityLabels::balanced() const {
  const auto sizes = community_sizes();
  return std::all_of(sizes.begin(), sizes.end(),
                     [&](int s) { return s == sizes.front(); });
}

CommunityLabels balanced_labels(int n, int k) {
  if (k < 1 || k > n) {
    throw KOutOfRange("k=" + std::to_string(k) + " outside 1..n with n=" + std::to_string(n));
  }
  CommunityLabels labels;
  labels.k = k;
  labels.values.reserve(static_cast<std::size_t>(n));
  const int base = n / k;
  const int extra = n % k;  // first `extra` communities get one more node
  for (int c = 1; c <= k; ++c) {
    const int size = base + (c <= extra ? 1 : 0);
    labels.values.insert(labels.values.end(), static_cast<std::size_t>(size), c);
  }
  return labels;
}

Matrix membership_matrix(const CommunityLabels& labels) {
  labels.validate();
  const int n = labels.size();
  Matrix theta = Matrix::Zero(n, labels.k);
  for (int i = 0; i < n; ++i) theta(i, labels.values[static_cast<std::size_t>(i)] - 1) = 1.0;
  return theta;
}

CommunityLabels shuffled_labels(const CommunityLabels& labels, std::uint64_t seed) {
  labels.validate();
  CommunityLabels shuffled = labels;
  RngStream rng(seed, rng_domain::kLabelShuffle);
  for (std::size_t i = shuffled.values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(shuffled.values[i - 1], shuffled.values[j]);
  }
  return shuffled;
}

CommunityLabels load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  CommunityLabels labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_carriage_return(line);
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 1) {
      throw ParseError("line " + std::to_string(line_no) + ": expected one label, got " +
                       std::to_string(fields.size()) + " fields");
    }
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), value);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || value < 1) {
      throw ParseError("line " + std::to_string(line_no) + ": '" + std::string(fields[0]) +
                       "' is not a positive integer label");
    }
    labels.values.push_back(value);
    labels.k = std::max(labels.k, value);
  }
  if (labels.values.empty()) throw ParseError("'" + path + "' contains no labels");
  labels.validate();
  return labels;
}

void write_labels(const CommunityLabels& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (int v : labels.values) out << v << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace motifclust
