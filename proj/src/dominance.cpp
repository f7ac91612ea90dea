#include "sep/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sep {

namespace {

// numerical slack: distributions come out of finite-precision solvers
constexpr double kSlack = 1e-9;
constexpr size_t kFlowCap = 2000;

// prefix-sum vectors; componentwise larger = higher in the order
std::vector<std::vector<int>> prefix_table(const StateEnumeration& states) {
    size_t n = states.size();
    long long sites = states.n();
    std::vector<std::vector<int>> pre(n, std::vector<int>(static_cast<size_t>(sites), 0));
    for (size_t i = 0; i < n; ++i) {
        const auto& pos = states.positions(i);
        size_t pi = 0;
        int acc = 0;
        for (long long x = 0; x < sites; ++x) {
            if (pi < pos.size() && pos[pi] == x) {
                ++acc;
                ++pi;
            }
            pre[i][static_cast<size_t>(x)] = acc;
        }
    }
    return pre;
}

bool geq_states(const std::vector<int>& a, const std::vector<int>& b) {
    for (size_t x = 0; x < a.size(); ++x)
        if (a[x] < b[x]) return false;
    return true;
}

// Up-set enumeration. Elements are visited in a linear extension from the
// top (descending total prefix sum), so an element may be included iff all
// of its upper covers (one-step-left moves) are already included. Returns
// false when the leaf budget is exhausted.
struct UpSetSearch {
    const std::vector<double>& p;
    const std::vector<double>& q;
    const std::vector<std::vector<size_t>>& covers;  // upper covers, order indices
    size_t budget;
    std::vector<char> included;
    std::vector<size_t> witness;
    double worst = std::numeric_limits<double>::infinity();
    bool exhausted = false;

    void run(size_t depth, double diff) {
        if (exhausted || worst < -kSlack) return;
        if (depth == included.size()) {
            if (budget == 0) {
                exhausted = true;
                return;
            }
            --budget;
            if (diff < worst) {
                worst = diff;
                if (diff < -kSlack) {
                    witness.clear();
                    for (size_t i = 0; i < included.size(); ++i)
                        if (included[i]) witness.push_back(i);
                }
            }
            return;
        }
        bool can_include = true;
        for (size_t c : covers[depth])
            if (!included[c]) {
                can_include = false;
                break;
            }
        if (can_include) {
            included[depth] = 1;
            run(depth + 1, diff + p[depth] - q[depth]);
            included[depth] = 0;
        }
        run(depth + 1, diff);
    }
};

// Dinic max flow with real capacities.
struct Dinic {
    struct Arc {
        size_t to;
        double cap;
        size_t rev;
    };
    std::vector<std::vector<Arc>> g;
    std::vector<int> level;
    std::vector<size_t> it;

    explicit Dinic(size_t n) : g(n), level(n), it(n) {}

    void add(size_t a, size_t b, double cap) {
        g[a].push_back({b, cap, g[b].size()});
        g[b].push_back({a, 0.0, g[a].size() - 1});
    }

    bool bfs(size_t s, size_t t) {
        std::fill(level.begin(), level.end(), -1);
        std::vector<size_t> queue = {s};
        level[s] = 0;
        for (size_t head = 0; head < queue.size(); ++head) {
            size_t v = queue[head];
            for (const Arc& a : g[v])
                if (a.cap > 1e-15 && level[a.to] < 0) {
                    level[a.to] = level[v] + 1;
                    queue.push_back(a.to);
                }
        }
        return level[t] >= 0;
    }

    double dfs(size_t v, size_t t, double f) {
        if (v == t) return f;
        for (size_t& i = it[v]; i < g[v].size(); ++i) {
            Arc& a = g[v][i];
            if (a.cap > 1e-15 && level[a.to] == level[v] + 1) {
                double d = dfs(a.to, t, std::min(f, a.cap));
                if (d > 0.0) {
                    a.cap -= d;
                    g[a.to][a.rev].cap += d;
                    return d;
                }
            }
        }
        return 0.0;
    }

    double max_flow(size_t s, size_t t) {
        double flow = 0.0;
        while (bfs(s, t)) {
            std::fill(it.begin(), it.end(), 0);
            double f;
            while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > 0.0) flow += f;
        }
        return flow;
    }
};

// Coupling feasibility: p dominates q iff mass 1 can flow source -> a -> b
// -> sink along pairs a >= b with caps p(a), q(b).
bool dominance_by_flow(const std::vector<double>& p, const std::vector<double>& q,
                       const std::vector<std::vector<int>>& pre) {
    size_t n = p.size();
    if (n > kFlowCap)
        throw std::invalid_argument("state space too large for the coupling flow check");
    size_t source = 2 * n, sink = 2 * n + 1;
    Dinic net(2 * n + 2);
    for (size_t a = 0; a < n; ++a)
        if (p[a] > 0.0) net.add(source, a, p[a]);
    for (size_t b = 0; b < n; ++b)
        if (q[b] > 0.0) net.add(n + b, sink, q[b]);
    for (size_t a = 0; a < n; ++a) {
        if (p[a] <= 0.0) continue;
        for (size_t b = 0; b < n; ++b) {
            if (q[b] <= 0.0) continue;
            if (geq_states(pre[a], pre[b])) net.add(a, n + b, 2.0);
        }
    }
    return net.max_flow(source, sink) >= 1.0 - kSlack;
}

}  // namespace

DominanceResult stochastic_dominance(const Distribution& p, const Distribution& q,
                                     const StateEnumeration& states, size_t upset_cap) {
    if (p.p.size() != states.size() || q.p.size() != states.size())
        throw std::invalid_argument("distributions do not match the state space");

    auto pre = prefix_table(states);
    size_t n = states.size();

    // linear extension from the top: total prefix sum, descending
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<long long> key(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (int v : pre[i]) key[i] += v;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return key[a] > key[b]; });
    std::vector<size_t> rank(n);
    for (size_t r = 0; r < n; ++r) rank[order[r]] = r;

    if (upset_cap > 0) {
        // upper covers = one particle moved one step left
        std::vector<std::vector<size_t>> covers(n);
        std::vector<int> newpos;
        for (size_t i = 0; i < n; ++i) {
            const auto& pos = states.positions(i);
            for (size_t idx = 0; idx < pos.size(); ++idx) {
                int s = pos[idx];
                bool left_free = s > 0 && (idx == 0 || pos[idx - 1] != s - 1);
                if (!left_free) continue;
                newpos = pos;
                newpos[idx] = s - 1;
                covers[rank[i]].push_back(rank[states.index(newpos)]);
            }
        }
        std::vector<double> pp(n), qq(n);
        for (size_t i = 0; i < n; ++i) {
            pp[rank[i]] = p.p[i];
            qq[rank[i]] = q.p[i];
        }
        UpSetSearch search{pp, qq, covers, upset_cap, std::vector<char>(n, 0), {}, 0.0, false};
        search.worst = std::numeric_limits<double>::infinity();
        search.run(0, 0.0);
        if (!search.exhausted) {
            DominanceResult res;
            res.route = DominanceRoute::UpSets;
            res.dominates = search.worst >= -kSlack;
            if (!res.dominates) {
                for (size_t r : search.witness) res.witness.push_back(order[r]);
                std::sort(res.witness.begin(), res.witness.end());
            }
            return res;
        }
    }

    DominanceResult res;
    res.route = DominanceRoute::MaxFlow;
    res.dominates = dominance_by_flow(p.p, q.p, pre);
    return res;
}

}  // namespace sep
