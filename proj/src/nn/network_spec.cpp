#include "ffhsi/nn/network_spec.hpp"

#include <sstream>

namespace ffhsi {

namespace {

std::string stage_text(const Stage& s) {
  switch (s.kind) {
    case StageKind::dense:
      return "dense " + std::to_string(s.units) + (s.relu ? " relu" : "");
    case StageKind::conv:
      return "conv " + std::to_string(s.units) + " " + std::to_string(s.kernel) + (s.relu ? " relu" : "");
    case StageKind::maxpool: return "maxpool 2";
    case StageKind::flatten: return "flatten";
    case StageKind::relu: return "relu";
  }
  return "?";
}

std::string trace_text(const std::vector<Shape>& trace) {
  std::string out;
  for (const auto& s : trace) {
    if (!out.empty()) out += " -> ";
    out += std::to_string(s.channels) + "x" + std::to_string(s.length);
  }
  return out;
}

}  // namespace

std::vector<Shape> NetworkSpec::shape_trace() const {
  if (input_len <= 0) throw ConfigError("network input length must be positive");
  std::vector<Shape> trace{{1, input_len}};
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Stage& st = stages[i];
    Shape cur = trace.back();
    Shape next = cur;
    switch (st.kind) {
      case StageKind::dense: next = {1, st.units}; break;
      case StageKind::conv: next = {st.units, cur.length - st.kernel + 1}; break;
      case StageKind::maxpool: next = {cur.channels, cur.length / 2}; break;
      case StageKind::flatten: next = {1, cur.size()}; break;
      case StageKind::relu: break;
    }
    if (next.length <= 0 || next.channels <= 0) {
      throw ConfigError("stage " + std::to_string(i + 1) + " (" + stage_text(st) +
                        ") yields non-positive length " + std::to_string(next.length) +
                        "; sizes so far: " + trace_text(trace));
    }
    trace.push_back(next);
  }
  return trace;
}

std::vector<Index> NetworkSpec::hidden_widths() const {
  std::vector<Index> out;
  for (const auto& s : stages) {
    if (s.has_params()) out.push_back(s.units);
  }
  return out;
}

std::string NetworkSpec::to_text() const {
  std::string out = "input " + std::to_string(input_len);
  for (const auto& s : stages) out += "; " + stage_text(s);
  out += "; head " + std::to_string(head_units);
  return out;
}

NetworkSpec NetworkSpec::parse(const std::string& text) {
  NetworkSpec spec;
  std::stringstream all(text);
  std::string item;
  bool saw_input = false;
  while (std::getline(all, item, ';')) {
    std::stringstream words(item);
    std::string kind;
    if (!(words >> kind)) continue;
    auto number = [&](const char* what) {
      long long v = 0;
      if (!(words >> v)) throw ConfigError("architecture: missing " + std::string(what) + " in \"" + item + "\"");
      return static_cast<Index>(v);
    };
    auto relu_flag = [&] {
      std::string w;
      if (!(words >> w)) return false;
      if (w != "relu") throw ConfigError("architecture: unexpected token \"" + w + "\"");
      return true;
    };
    if (kind == "input") {
      spec.input_len = number("input length");
      saw_input = true;
    } else if (kind == "head") {
      spec.head_units = number("head units");
    } else if (kind == "dense") {
      const Index u = number("units");
      spec.stages.push_back(Stage::dense(u, relu_flag()));
    } else if (kind == "conv") {
      const Index f = number("filters");
      const Index k = number("kernel");
      spec.stages.push_back(Stage::conv(f, k, relu_flag()));
    } else if (kind == "maxpool") {
      if (number("window") != 2) throw ConfigError("architecture: only maxpool 2 is supported");
      spec.stages.push_back(Stage::maxpool());
    } else if (kind == "flatten") {
      spec.stages.push_back(Stage::flatten());
    } else if (kind == "relu") {
      spec.stages.push_back({StageKind::relu, 0, 0, false});
    } else {
      throw ConfigError("architecture: unknown stage \"" + kind + "\"");
    }
  }
  if (!saw_input) throw ConfigError("architecture: missing input stage");
  return spec;
}

}  // namespace ffhsi
