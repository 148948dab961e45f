#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "mfgnn/ir/cfg.hpp"

namespace mfgnn::dataflow {

/// One definition site: instruction `instr` of block `block` writes `var`.
/// `kills` is false for array-element and field writes.
struct DefSite {
  int block = 0;
  int instr = 0;
  std::string var;
  bool kills = true;

  friend auto operator<=>(const DefSite&, const DefSite&) = default;
};

using DefSet = std::set<DefSite>;

struct DefUse {
  int block = 0;
  /// Every definition site in the block, in instruction order.
  std::vector<DefSite> define;
  /// Variables read before any killing write in the block.
  std::set<std::string> use;
};

struct ReachSets {
  std::vector<DefSet> in;
  std::vector<DefSet> out;
};

/// One DefUse per block; compiler temporaries are excluded.
std::vector<DefUse> compute_def_use(const ir::Cfg& cfg);

/// out = gen ∪ (in \ kill) applied instruction by instruction.
DefSet transfer(const DefUse& du, const DefSet& in);

/// Forward may-analysis over control edges (SeqExec, CondTrue, CondFalse,
/// SwitchBranch) to the least fixpoint; worklist seeded in reverse post-order.
ReachSets reaching_definitions(const ir::Cfg& cfg, const std::vector<DefUse>& du);

/// DataFlow edge def-block -> use-block for every reaching site whose variable
/// the use-block reads. Sorted, deduplicated.
std::vector<ir::FlowEdge> dataflow_edges(const ir::Cfg& cfg, const ReachSets& rs,
                                         const std::vector<DefUse>& du);

/// compute_def_use + reaching_definitions + dataflow_edges.
std::vector<ir::FlowEdge> dataflow_edges(const ir::Cfg& cfg);

}  // namespace mfgnn::dataflow
