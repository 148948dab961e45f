#include "mfgnn/dataflow/reaching.hpp"

#include <algorithm>
#include <deque>

namespace mfgnn::dataflow {

std::vector<DefUse> compute_def_use(const ir::Cfg& cfg) {
  std::vector<DefUse> out;
  out.reserve(cfg.blocks.size());
  for (const auto& block : cfg.blocks) {
    DefUse du;
    du.block = block.id;
    std::set<std::string> killed;
    for (std::size_t i = 0; i < block.instrs.size(); ++i) {
      const ir::TacInstr& in = block.instrs[i];
      for (const auto& v : in.uses) {
        if (!ir::is_temp(v) && killed.count(v) == 0) du.use.insert(v);
      }
      const bool defines = in.kind == ir::TacKind::DefStmt || in.kind == ir::TacKind::Call;
      if (defines && !in.dest.empty() && !ir::is_temp(in.dest)) {
        du.define.push_back({block.id, static_cast<int>(i), in.dest, !in.weak_def});
        if (!in.weak_def) killed.insert(in.dest);
      }
    }
    out.push_back(std::move(du));
  }
  return out;
}

DefSet transfer(const DefUse& du, const DefSet& in) {
  DefSet out = in;
  for (const auto& d : du.define) {
    if (d.kills) std::erase_if(out, [&](const DefSite& s) { return s.var == d.var; });
    out.insert(d);
  }
  return out;
}

namespace {

std::vector<int> reverse_post_order(const ir::Cfg& cfg, const std::vector<std::vector<int>>& succ) {
  std::vector<int> order;
  std::vector<bool> seen(cfg.blocks.size(), false);
  auto visit = [&](int root) {
    // iterative DFS; (node, next successor index)
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    seen[static_cast<std::size_t>(root)] = true;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto& s = succ[static_cast<std::size_t>(u)];
      if (next < s.size()) {
        const int v = s[next++];
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
  };
  for (const auto& [name, bounds] : cfg.functions) {
    if (!seen[static_cast<std::size_t>(bounds.entry)]) visit(bounds.entry);
  }
  for (const auto& b : cfg.blocks) {
    if (!seen[static_cast<std::size_t>(b.id)]) visit(b.id);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

}  // namespace

ReachSets reaching_definitions(const ir::Cfg& cfg, const std::vector<DefUse>& du) {
  const std::size_t n = cfg.blocks.size();
  const auto succ = cfg.successors(true);
  const auto pred = cfg.predecessors(true);
  ReachSets rs{std::vector<DefSet>(n), std::vector<DefSet>(n)};

  std::deque<int> work;
  std::vector<bool> queued(n, false);
  for (int b : reverse_post_order(cfg, succ)) {
    work.push_back(b);
    queued[static_cast<std::size_t>(b)] = true;
  }
  while (!work.empty()) {
    const int b = work.front();
    work.pop_front();
    const auto bi = static_cast<std::size_t>(b);
    queued[bi] = false;
    DefSet in;
    for (int p : pred[bi]) in.insert(rs.out[static_cast<std::size_t>(p)].begin(), rs.out[static_cast<std::size_t>(p)].end());
    DefSet out = transfer(du[bi], in);
    rs.in[bi] = std::move(in);
    if (out != rs.out[bi]) {
      rs.out[bi] = std::move(out);
      for (int s : succ[bi]) {
        if (!queued[static_cast<std::size_t>(s)]) {
          queued[static_cast<std::size_t>(s)] = true;
          work.push_back(s);
        }
      }
    }
  }
  return rs;
}

std::vector<ir::FlowEdge> dataflow_edges(const ir::Cfg& cfg, const ReachSets& rs,
                                         const std::vector<DefUse>& du) {
  std::set<ir::FlowEdge> edges;
  for (std::size_t u = 0; u < cfg.blocks.size(); ++u) {
    for (const auto& d : rs.in[u]) {
      if (du[u].use.count(d.var) != 0) {
        edges.insert({d.block, static_cast<int>(u), ir::EdgeKind::DataFlow});
      }
    }
  }
  return {edges.begin(), edges.end()};
}

std::vector<ir::FlowEdge> dataflow_edges(const ir::Cfg& cfg) {
  const auto du = compute_def_use(cfg);
  return dataflow_edges(cfg, reaching_definitions(cfg, du), du);
}

}  // namespace mfgnn::dataflow
