#include "mfgnn/ir/cfg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mfgnn::ir {

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::SeqExec: return "SeqExec";
    case EdgeKind::CondTrue: return "CondTrue";
    case EdgeKind::CondFalse: return "CondFalse";
    case EdgeKind::SwitchBranch: return "SwitchBranch";
    case EdgeKind::DataFlow: return "DataFlow";
    case EdgeKind::CallFlow: return "CallFlow";
    case EdgeKind::ExceptionFlow: return "ExceptionFlow";
  }
  return "?";
}

EdgeKind edge_kind_from_string(std::string_view name) {
  for (EdgeKind k : kAllEdgeKinds) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown edge kind '" + std::string(name) + "'");
}

bool is_control_kind(EdgeKind kind) {
  return kind == EdgeKind::SeqExec || kind == EdgeKind::CondTrue || kind == EdgeKind::CondFalse ||
         kind == EdgeKind::SwitchBranch;
}

std::vector<std::vector<int>> Cfg::successors(bool control_only) const {
  std::vector<std::vector<int>> out(blocks.size());
  for (const auto& e : edges) {
    if (!control_only || is_control_kind(e.kind)) out[static_cast<std::size_t>(e.src)].push_back(e.dst);
  }
  return out;
}

std::vector<std::vector<int>> Cfg::predecessors(bool control_only) const {
  std::vector<std::vector<int>> out(blocks.size());
  for (const auto& e : edges) {
    if (!control_only || is_control_kind(e.kind)) out[static_cast<std::size_t>(e.dst)].push_back(e.src);
  }
  return out;
}

namespace {

class EdgeSet {
 public:
  void add(int src, int dst, EdgeKind kind) {
    FlowEdge e{src, dst, kind};
    if (seen_.insert(e).second) edges_.push_back(e);
  }
  std::vector<FlowEdge> take() { return std::move(edges_); }

 private:
  std::set<FlowEdge> seen_;
  std::vector<FlowEdge> edges_;
};

TacInstr marker(const TacFunction& fn, MarkerKind kind) {
  TacInstr m;
  m.kind = TacKind::Marker;
  m.marker = kind;
  m.backing = fn.decl;
  return m;
}

}  // namespace

Cfg build_cfg(const TacProgram& tac) {
  Cfg cfg;
  EdgeSet edges;
  struct Pending {
    int first_body = 0;
    std::vector<int> block_of_instr;
    std::vector<int> block_of_label;
  };
  std::vector<Pending> pending(tac.size());

  // Pass 1: carve blocks so every function's entry id is known before call edges.
  for (std::size_t f = 0; f < tac.size(); ++f) {
    const TacFunction& fn = tac[f];
    Pending& p = pending[f];
    const int entry = static_cast<int>(cfg.blocks.size());
    cfg.blocks.push_back({entry, {marker(fn, MarkerKind::Entry)}, fn.name, BlockRole::Entry});

    std::set<int> targeted;
    for (const auto& in : fn.instrs) targeted.insert(in.targets.begin(), in.targets.end());
    std::vector<bool> leader(fn.instrs.size(), false);
    if (!leader.empty()) leader[0] = true;
    for (int label : targeted) {
      const std::size_t pos = fn.label_pos.at(static_cast<std::size_t>(label));
      if (pos < leader.size()) leader[pos] = true;
    }
    for (std::size_t i = 0; i + 1 < fn.instrs.size(); ++i) {
      if (fn.instrs[i].is_terminator()) leader[i + 1] = true;
    }

    p.first_body = static_cast<int>(cfg.blocks.size());
    for (std::size_t i = 0; i < fn.instrs.size(); ++i) {
      if (leader[i]) {
        const int id = static_cast<int>(cfg.blocks.size());
        cfg.blocks.push_back({id, {}, fn.name, BlockRole::Body});
      }
      cfg.blocks.back().instrs.push_back(fn.instrs[i]);
      p.block_of_instr.push_back(cfg.blocks.back().id);
    }
    const int exit = static_cast<int>(cfg.blocks.size());
    cfg.blocks.push_back({exit, {marker(fn, MarkerKind::Exit)}, fn.name, BlockRole::Exit});
    cfg.functions[fn.name] = {entry, exit};

    p.block_of_label.assign(fn.label_pos.size(), -1);
    for (int label : targeted) {
      const std::size_t pos = fn.label_pos[static_cast<std::size_t>(label)];
      p.block_of_label[static_cast<std::size_t>(label)] =
          pos < p.block_of_instr.size() ? p.block_of_instr[pos] : exit;
    }
  }

  // Pass 2: typed control edges, call edges, target rewriting.
  for (std::size_t f = 0; f < tac.size(); ++f) {
    const TacFunction& fn = tac[f];
    const Pending& p = pending[f];
    const auto [entry, exit] = cfg.functions.at(fn.name);
    edges.add(entry, p.first_body < exit ? p.first_body : exit, EdgeKind::SeqExec);
    for (int b = p.first_body; b < exit; ++b) {
      BasicBlock& block = cfg.blocks[static_cast<std::size_t>(b)];
      for (TacInstr& in : block.instrs) {
        for (int& t : in.targets) t = p.block_of_label.at(static_cast<std::size_t>(t));
        if (in.kind == TacKind::Call) {
          if (auto callee = cfg.functions.find(in.callee); callee != cfg.functions.end()) {
            edges.add(b, callee->second.entry, EdgeKind::CallFlow);
          }
        }
      }
      const TacInstr& last = block.instrs.back();
      switch (last.kind) {
        case TacKind::BranchCond:
          edges.add(b, last.targets.at(0), EdgeKind::CondTrue);
          edges.add(b, last.targets.at(1), EdgeKind::CondFalse);
          break;
        case TacKind::Switch:
          for (int t : last.targets) edges.add(b, t, EdgeKind::SwitchBranch);
          break;
        case TacKind::Jump:
          edges.add(b, last.targets.at(0), EdgeKind::SeqExec);
          break;
        case TacKind::Return:
          edges.add(b, exit, EdgeKind::SeqExec);
          break;
        default:
          edges.add(b, b + 1, EdgeKind::SeqExec);
      }
    }
  }
  cfg.edges = edges.take();

  // Call-flow edges are added in pass 2 before later functions' control
  // edges; order edges by source for stable dumps.
  std::stable_sort(cfg.edges.begin(), cfg.edges.end(),
                   [](const FlowEdge& a, const FlowEdge& b) { return a.src < b.src; });

  const auto succ = cfg.successors(true);
  std::vector<bool> seen(cfg.blocks.size(), false);
  for (const auto& [name, bounds] : cfg.functions) {
    std::vector<int> stack{bounds.entry};
    seen[static_cast<std::size_t>(bounds.entry)] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : succ[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
  }
  for (const auto& block : cfg.blocks) {
    if (!seen[static_cast<std::size_t>(block.id)]) {
      const auto& span = block.instrs.front().backing->span;
      throw CfgError("unreachable code in function '" + block.function + "'", span.line,
                     span.column);
    }
  }
  return cfg;
}

Cfg build_cfg(const lang::ProgramAst& program) { return build_cfg(lower_to_tac(program)); }

Cfg reverse_graph(const Cfg& cfg) {
  Cfg out = cfg;
  for (auto& e : out.edges) std::swap(e.src, e.dst);
  return out;
}

std::string dump(const Cfg& cfg) {
  std::ostringstream os;
  for (const auto& b : cfg.blocks) {
    os << "B" << b.id << " (" << b.function;
    if (b.role == BlockRole::Entry) os << ", entry";
    if (b.role == BlockRole::Exit) os << ", exit";
    os << "):\n";
    for (const auto& in : b.instrs) os << "  " << in.text("B") << "\n";
  }
  for (const auto& e : cfg.edges) os << e.src << " -> " << e.dst << " [" << to_string(e.kind) << "]\n";
  return os.str();
}

}  // namespace mfgnn::ir
