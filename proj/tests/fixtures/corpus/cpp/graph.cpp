#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <utility>
#include <vector>

namespace graph {

struct Edge {
  int to;
  double weight;
};

using Adjacency = std::vector<std::vector<Edge>>;

Adjacency make_graph(int n, const std::vector<std::pair<int, int>>& pairs) {
  Adjacency adj(n);
  for (const auto& [a, b] : pairs) {
    adj[a].push_back({b, 1.0});
    adj[b].push_back({a, 1.0});
  }
  return adj;
}

std::vector<int> bfs_order(const Adjacency& adj, int start) {
  std::vector<int> order;
  std::vector<bool> seen(adj.size(), false);
  std::queue<int> q;
  q.push(start);
  seen[start] = true;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    order.push_back(u);
    for (const Edge& e : adj[u]) {
      if (!seen[e.to]) {
        seen[e.to] = true;
        q.push(e.to);
      }
    }
  }
  return order;
}

std::vector<double> dijkstra(const Adjacency& adj, int source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(adj.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) {
      continue;
    }
    for (const Edge& e : adj[u]) {
      double nd = d + e.weight;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        pq.push({nd, e.to});
      }
    }
  }
  return dist;
}

int count_components(const Adjacency& adj) {
  std::vector<int> parent(adj.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = static_cast<int>(adj.size());
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (const Edge& e : adj[u]) {
      int a = find(static_cast<int>(u));
      int b = find(e.to);
      if (a != b) {
        parent[a] = b;
        components -= 1;
      }
    }
  }
  return components;
}

bool has_cycle(const Adjacency& adj) {
  std::vector<int> state(adj.size(), 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (state[s] != 0) continue;
    stack.push_back({static_cast<int>(s), 0});
    state[s] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i < adj[u].size()) {
        int v = adj[u][i++].to;
        if (state[v] == 1) return true;
        if (state[v] == 0) {
          state[v] = 1;
          stack.push_back({v, 0});
        }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

std::size_t edge_count(const Adjacency& adj) {
  std::size_t total = 0;
  for (const auto& list : adj) {
    total += list.size();
  }
  return total / 2;
}

int max_degree(const Adjacency& adj) {
  int best = 0;
  for (const auto& list : adj) {
    best = std::max(best, static_cast<int>(list.size()));
  }
  return best;
}

class Grid {
 public:
  Grid(int width, int height) : width_(width), height_(height), cells_(width * height, 0) {}

  int& at(int x, int y) { return cells_[y * width_ + x]; }

  int at(int x, int y) const { return cells_[y * width_ + x]; }

  bool inside(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  int neighbors(int x, int y) const {
    int count = 0;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        if (inside(x + dx, y + dy) && at(x + dx, y + dy) != 0) {
          count++;
        }
      }
    }
    return count;
  }

  Grid step() const {
    Grid next(width_, height_);
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        int n = neighbors(x, y);
        bool alive = at(x, y) != 0;
        next.at(x, y) = (alive && (n == 2 || n == 3)) || (!alive && n == 3) ? 1 : 0;
      }
    }
    return next;
  }

  int population() const {
    int total = 0;
    for (int c : cells_) total += c;
    return total;
  }

 private:
  int width_;
  int height_;
  std::vector<int> cells_;
};

double euclidean(double x1, double y1, double x2, double y2) {
  double dx = x2 - x1;
  double dy = y2 - y1;
  return std::sqrt(dx * dx + dy * dy);
}

std::vector<int> topo_sort(const std::vector<std::vector<int>>& out) {
  std::vector<int> indegree(out.size(), 0);
  for (const auto& list : out) {
    for (int v : list) indegree[v] += 1;
  }
  std::vector<int> ready;
  for (std::size_t u = 0; u < out.size(); ++u) {
    if (indegree[u] == 0) ready.push_back(static_cast<int>(u));
  }
  std::vector<int> order;
  while (!ready.empty()) {
    int u = ready.back();
    ready.pop_back();
    order.push_back(u);
    for (int v : out[u]) {
      if (--indegree[v] == 0) {
        ready.push_back(v);
      }
    }
  }
  return order;
}

}  // namespace graph
