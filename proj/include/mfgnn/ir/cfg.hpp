#pragma once

#include <array>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mfgnn/ir/tac.hpp"

namespace mfgnn::ir {

/// The seven flow kinds of the block graph. Order is the on-disk and
/// attention-vector order; do not reorder.
enum class EdgeKind {
  SeqExec,
  CondTrue,
  CondFalse,
  SwitchBranch,
  DataFlow,
  CallFlow,
  ExceptionFlow,
};

inline constexpr std::size_t kEdgeKindCount = 7;
inline constexpr std::array<EdgeKind, kEdgeKindCount> kAllEdgeKinds = {
    EdgeKind::SeqExec,  EdgeKind::CondTrue, EdgeKind::CondFalse,    EdgeKind::SwitchBranch,
    EdgeKind::DataFlow, EdgeKind::CallFlow, EdgeKind::ExceptionFlow};

std::string_view to_string(EdgeKind kind);
/// Throws std::invalid_argument for names outside the seven kinds.
EdgeKind edge_kind_from_string(std::string_view name);
/// Intra-procedural control kinds: the edges reaching definitions propagates along.
bool is_control_kind(EdgeKind kind);

struct FlowEdge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::SeqExec;

  friend auto operator<=>(const FlowEdge&, const FlowEdge&) = default;
};

enum class BlockRole { Entry, Body, Exit };

struct BasicBlock {
  int id = 0;
  /// Instruction targets are rewritten from label ids to block ids.
  std::vector<TacInstr> instrs;
  std::string function;
  BlockRole role = BlockRole::Body;
};

struct FunctionBounds {
  int entry = 0;
  int exit = 0;
};

/// Inter-procedural control-flow graph of one compilation unit. Block ids are
/// dense and index `blocks`. Backing AST pointers refer into the ProgramAst
/// that was lowered, which must outlive the graph.
struct Cfg {
  std::vector<BasicBlock> blocks;
  std::vector<FlowEdge> edges;
  std::map<std::string, FunctionBounds> functions;

  std::size_t size() const { return blocks.size(); }
  std::vector<std::vector<int>> successors(bool control_only = true) const;
  std::vector<std::vector<int>> predecessors(bool control_only = true) const;
};

/// Thrown when a graph cannot be built (unreachable code).
class CfgError : public std::runtime_error {
 public:
  CfgError(std::string message, int line, int column)
      : std::runtime_error(std::move(message)), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Splits each function into maximal basic blocks, adds synthetic entry/exit
/// blocks, types control edges, and links call sites to callee entries.
Cfg build_cfg(const TacProgram& tac);

/// Same blocks; every edge (u, v, k) becomes (v, u, k).
Cfg reverse_graph(const Cfg& cfg);

/// Debug dump: blocks with their TAC, then one `src -> dst [kind]` per edge.
std::string dump(const Cfg& cfg);

/// Convenience: lower_to_tac + build_cfg.
Cfg build_cfg(const lang::ProgramAst& program);

}  // namespace mfgnn::ir
