#include "mfgnn/nn/ablation_config.hpp"

#include <sstream>

namespace mfgnn::nn {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

}  // namespace

void AblationConfig::validate() const {
  if (combine == Combine::Concat && aggregator == Aggregator::Gcn) {
    throw ConfigError("combine=concat requires aggregator=agn4d");
  }
}

std::string AblationConfig::name() const {
  std::string s = block_repr == BlockRepr::Ast ? "A" : "B";
  if (edges != EdgeSubset::Dataflow) s += "+C";
  if (edges != EdgeSubset::Control) s += "+D";
  s += edge_typing == EdgeTyping::Multi ? "+M" : "+S";
  if (combine == Combine::Concat) s += "/concat";
  if (aggregator == Aggregator::Gcn) s += "/gcn";
  return s;
}

std::string AblationConfig::to_text() const {
  std::ostringstream os;
  os << "block_repr=" << (block_repr == BlockRepr::Ast ? "ast" : "bow") << "\n";
  os << "edges="
     << (edges == EdgeSubset::Both ? "both" : edges == EdgeSubset::Control ? "control" : "dataflow")
     << "\n";
  os << "edge_typing=" << (edge_typing == EdgeTyping::Multi ? "multi" : "single") << "\n";
  os << "combine=" << (combine == Combine::Sum ? "sum" : "concat") << "\n";
  os << "aggregator=" << (aggregator == Aggregator::Agn4d ? "agn4d" : "gcn") << "\n";
  return os.str();
}

AblationConfig AblationConfig::parse(std::string_view text) {
  AblationConfig c;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "block_repr") {
      if (value == "ast") c.block_repr = BlockRepr::Ast;
      else if (value == "bow") c.block_repr = BlockRepr::Bow;
      else bad_value(key, value);
    } else if (key == "edges") {
      if (value == "both") c.edges = EdgeSubset::Both;
      else if (value == "control") c.edges = EdgeSubset::Control;
      else if (value == "dataflow") c.edges = EdgeSubset::Dataflow;
      else bad_value(key, value);
    } else if (key == "edge_typing") {
      if (value == "multi") c.edge_typing = EdgeTyping::Multi;
      else if (value == "single") c.edge_typing = EdgeTyping::Single;
      else bad_value(key, value);
    } else if (key == "combine") {
      if (value == "sum") c.combine = Combine::Sum;
      else if (value == "concat") c.combine = Combine::Concat;
      else bad_value(key, value);
    } else if (key == "aggregator") {
      if (value == "agn4d") c.aggregator = Aggregator::Agn4d;
      else if (value == "gcn") c.aggregator = Aggregator::Gcn;
      else bad_value(key, value);
    } else {
      throw ConfigError("unknown key '" + std::string(key) + "'");
    }
  }
  c.validate();
  return c;
}

AblationConfig AblationConfig::from_name(std::string_view name) {
  AblationConfig c;
  std::string_view head = name;
  std::string_view rest;
  if (auto slash = name.find('/'); slash != std::string_view::npos) {
    head = name.substr(0, slash);
    rest = name.substr(slash);
  }
  bool control = false;
  bool dataflow = false;
  bool typed = false;
  std::size_t i = 0;
  int part = 0;
  while (i <= head.size()) {
    const auto plus = head.find('+', i);
    const std::string_view tok = head.substr(i, plus == std::string_view::npos ? head.npos : plus - i);
    if (part == 0) {
      if (tok == "A") c.block_repr = BlockRepr::Ast;
      else if (tok == "B") c.block_repr = BlockRepr::Bow;
      else throw ConfigError("configuration name must start with A or B: '" + std::string(name) + "'");
    } else if (tok == "C") {
      control = true;
    } else if (tok == "D") {
      dataflow = true;
    } else if (tok == "M" || tok == "S") {
      if (typed) throw ConfigError("edge typing given twice in '" + std::string(name) + "'");
      typed = true;
      c.edge_typing = tok == "M" ? EdgeTyping::Multi : EdgeTyping::Single;
    } else {
      throw ConfigError("unknown component '" + std::string(tok) + "' in '" + std::string(name) + "'");
    }
    ++part;
    if (plus == std::string_view::npos) break;
    i = plus + 1;
  }
  if (!control && !dataflow) throw ConfigError("configuration '" + std::string(name) + "' selects no edges");
  if (!typed) throw ConfigError("configuration '" + std::string(name) + "' lacks M or S");
  c.edges = control && dataflow ? EdgeSubset::Both : control ? EdgeSubset::Control : EdgeSubset::Dataflow;
  while (!rest.empty()) {
    rest.remove_prefix(1);
    const auto slash = rest.find('/');
    const std::string_view opt = rest.substr(0, slash);
    if (opt == "concat") c.combine = Combine::Concat;
    else if (opt == "gcn") c.aggregator = Aggregator::Gcn;
    else if (opt == "sum" || opt == "agn4d") {}
    else throw ConfigError("unknown option '" + std::string(opt) + "' in '" + std::string(name) + "'");
    rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
  }
  c.validate();
  return c;
}

}  // namespace mfgnn::nn
