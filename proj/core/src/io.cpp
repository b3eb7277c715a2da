#include "irid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "irid/error.hpp"

namespace irid {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::SchemaError, path, message);
}

const json& require(const json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) schema_error(path, "expected a string");
  return value.get<std::string>();
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) schema_error(path, "expected a number");
  return value.get<double>();
}

const json& as_array(const json& value, const std::string& path) {
  if (!value.is_array()) schema_error(path, "expected an array");
  return value;
}

const json& as_object(const json& value, const std::string& path) {
  if (!value.is_object()) schema_error(path, "expected an object");
  return value;
}

std::vector<std::string> string_list(const json& value, const std::string& path) {
  std::vector<std::string> out;
  const json& list = as_array(value, path);
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(as_string(list[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

/// Labels of a `given` object, in the order of `vars`.
std::vector<std::string> given_labels(const json& value, const std::vector<std::string>& vars, const std::string& path) {
  const json& given = as_object(value, path);
  std::vector<std::string> out;
  for (const auto& var : vars) {
    auto it = given.find(var);
    if (it == given.end()) schema_error(path + "." + var, "missing label for '" + var + "'");
    out.push_back(as_string(*it, path + "." + var));
  }
  for (const auto& [key, _] : given.items()) {
    if (std::find(vars.begin(), vars.end(), key) == vars.end()) {
      schema_error(path + "." + key, "'" + key + "' is not in the listed parents or scope");
    }
  }
  return out;
}

NodeKind node_kind(const std::string& text, const std::string& path) {
  if (text == "chance") return NodeKind::chance;
  if (text == "decision") return NodeKind::decision;
  if (text == "value") return NodeKind::value;
  schema_error(path, "unknown node kind '" + text + "'");
}

ArrowKind arrow_kind(const std::string& text, const std::string& path) {
  if (text == "relevance") return ArrowKind::relevance;
  if (text == "informational") return ArrowKind::informational;
  schema_error(path, "unknown arrow kind '" + text + "'");
}

std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

std::string quoted(const std::string& s) { return json(s).dump(); }

}  // namespace

ModelSpec parse_model_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // Keep the parser's description, drop its own position prefix.
    if (auto colon = what.find(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw Error(ErrorCode::SyntaxError, position_of(text, e.byte), what);
  }
  as_object(doc, "$");

  ModelSpec spec;
  const std::string version = as_string(require(doc, "schema_version", "$"), "$.schema_version");
  if (version.rfind("1.", 0) != 0 && version != "1") {
    schema_error("$.schema_version", "unsupported schema version '" + version + "'");
  }
  if (auto it = doc.find("objective"); it != doc.end()) {
    const std::string objective = as_string(*it, "$.objective");
    if (objective == "maximize") {
      spec.objective = Objective::maximize;
    } else if (objective == "minimize") {
      spec.objective = Objective::minimize;
    } else {
      schema_error("$.objective", "expected 'maximize' or 'minimize'");
    }
  }

  std::map<std::string, std::vector<std::string>> frames;
  const json& nodes = as_array(require(doc, "nodes", "$"), "$.nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "$.nodes[" + std::to_string(i) + "]";
    const json& n = as_object(nodes[i], path);
    NodeSpec node;
    node.id = as_string(require(n, "id", path), path + ".id");
    node.kind = node_kind(as_string(require(n, "kind", path), path + ".kind"), path + ".kind");
    if (auto it = n.find("frame"); it != n.end()) {
      auto labels = string_list(*it, path + ".frame");
      frames[node.id] = labels;
      try {
        node.frame = Frame(std::move(labels));
      } catch (const Error& e) {
        throw Error(e.code(), path + ".frame", e.issues().front().message);
      }
    }
    spec.nodes.push_back(std::move(node));
  }

  if (auto it = doc.find("arrows"); it != doc.end()) {
    const json& arrows = as_array(*it, "$.arrows");
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      const std::string path = "$.arrows[" + std::to_string(i) + "]";
      const json& a = as_object(arrows[i], path);
      ArrowSpec arrow;
      arrow.from = as_string(require(a, "from", path), path + ".from");
      arrow.to = as_string(require(a, "to", path), path + ".to");
      arrow.kind = arrow_kind(as_string(require(a, "kind", path), path + ".kind"), path + ".kind");
      spec.arrows.push_back(std::move(arrow));
    }
  }

  if (auto it = doc.find("cpts"); it != doc.end()) {
    const json& cpts = as_array(*it, "$.cpts");
    for (std::size_t i = 0; i < cpts.size(); ++i) {
      const std::string path = "$.cpts[" + std::to_string(i) + "]";
      const json& c = as_object(cpts[i], path);
      CptSpec cpt;
      cpt.child = as_string(require(c, "child", path), path + ".child");
      cpt.parents = c.contains("parents") ? string_list(c["parents"], path + ".parents") : std::vector<std::string>{};
      const auto frame_it = frames.find(cpt.child);
      const json& rows = as_array(require(c, "rows", path), path + ".rows");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string row_path = path + ".rows[" + std::to_string(r) + "]";
        const json& row = as_object(rows[r], row_path);
        CptRow out;
        out.given = row.contains("given") ? given_labels(row["given"], cpt.parents, row_path + ".given")
                                          : given_labels(json::object(), cpt.parents, row_path + ".given");
        const json& p = as_object(require(row, "p", row_path), row_path + ".p");
        if (frame_it != frames.end()) {
          const auto& labels = frame_it->second;
          out.p.assign(labels.size(), 0.0);
          for (const auto& [label, prob] : p.items()) {
            auto pos = std::find(labels.begin(), labels.end(), label);
            if (pos == labels.end()) {
              schema_error(row_path + ".p." + label, "'" + label + "' is not in the frame of '" + cpt.child + "'");
            }
            out.p[static_cast<std::size_t>(pos - labels.begin())] = as_number(prob, row_path + ".p." + label);
          }
        }
        cpt.rows.push_back(std::move(out));
      }
      spec.cpts.push_back(std::move(cpt));
    }
  }

  if (auto it = doc.find("constraints"); it != doc.end()) {
    const json& constraints = as_array(*it, "$.constraints");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const std::string path = "$.constraints[" + std::to_string(i) + "]";
      const json& c = as_object(constraints[i], path);
      ConstraintSpec constraint;
      constraint.decision = as_string(require(c, "decision", path), path + ".decision");
      constraint.scope = c.contains("scope") ? string_list(c["scope"], path + ".scope") : std::vector<std::string>{};
      const json& cells = as_array(require(c, "cells", path), path + ".cells");
      for (std::size_t r = 0; r < cells.size(); ++r) {
        const std::string cell_path = path + ".cells[" + std::to_string(r) + "]";
        const json& cell = as_object(cells[r], cell_path);
        ConstraintCell out;
        out.given = given_labels(cell.contains("given") ? cell["given"] : json::object(), constraint.scope,
                                 cell_path + ".given");
        out.allow = string_list(require(cell, "allow", cell_path), cell_path + ".allow");
        constraint.cells.push_back(std::move(out));
      }
      spec.constraints.push_back(std::move(constraint));
    }
  }

  const json& value = as_object(require(doc, "value", "$"), "$.value");
  spec.value.parents = value.contains("parents") ? string_list(value["parents"], "$.value.parents")
                                                 : std::vector<std::string>{};
  const json& cells = as_array(require(value, "cells", "$.value"), "$.value.cells");
  for (std::size_t r = 0; r < cells.size(); ++r) {
    const std::string cell_path = "$.value.cells[" + std::to_string(r) + "]";
    const json& cell = as_object(cells[r], cell_path);
    ValueCell out;
    out.given = given_labels(cell.contains("given") ? cell["given"] : json::object(), spec.value.parents,
                             cell_path + ".given");
    out.v = as_number(require(cell, "v", cell_path), cell_path + ".v");
    spec.value.cells.push_back(std::move(out));
  }
  return spec;
}

IridModel parse_model(std::string_view text) { return build_model(parse_model_spec(text)); }

IridModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string serialize_model(const IridModel& model) {
  const ModelSpec spec = model.to_spec();
  auto given = [](const std::vector<std::string>& vars, const std::vector<std::string>& labels) {
    ordered_json out = ordered_json::object();
    for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = labels[i];
    return out;
  };

  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["objective"] = to_string(spec.objective);
  doc["nodes"] = ordered_json::array();
  for (const auto& n : spec.nodes) {
    ordered_json node;
    node["id"] = n.id;
    node["kind"] = to_string(n.kind);
    if (n.kind != NodeKind::value) node["frame"] = n.frame.labels();
    doc["nodes"].push_back(std::move(node));
  }
  doc["arrows"] = ordered_json::array();
  for (const auto& a : spec.arrows) {
    doc["arrows"].push_back(ordered_json{{"from", a.from}, {"to", a.to}, {"kind", to_string(a.kind)}});
  }
  doc["cpts"] = ordered_json::array();
  for (const auto& c : spec.cpts) {
    const Frame& frame = model.frame(model.id(c.child));
    ordered_json cpt;
    cpt["child"] = c.child;
    cpt["parents"] = c.parents;
    cpt["rows"] = ordered_json::array();
    for (const auto& row : c.rows) {
      ordered_json p = ordered_json::object();
      for (std::size_t x = 0; x < row.p.size(); ++x) p[frame.label(x)] = row.p[x];
      cpt["rows"].push_back(ordered_json{{"given", given(c.parents, row.given)}, {"p", std::move(p)}});
    }
    doc["cpts"].push_back(std::move(cpt));
  }
  doc["constraints"] = ordered_json::array();
  for (const auto& c : spec.constraints) {
    ordered_json constraint;
    constraint["decision"] = c.decision;
    constraint["scope"] = c.scope;
    constraint["cells"] = ordered_json::array();
    for (const auto& cell : c.cells) {
      constraint["cells"].push_back(ordered_json{{"given", given(c.scope, cell.given)}, {"allow", cell.allow}});
    }
    doc["constraints"].push_back(std::move(constraint));
  }
  ordered_json value;
  value["parents"] = spec.value.parents;
  value["cells"] = ordered_json::array();
  for (const auto& cell : spec.value.cells) {
    value["cells"].push_back(ordered_json{{"given", given(spec.value.parents, cell.given)}, {"v", cell.v}});
  }
  doc["value"] = std::move(value);
  return doc.dump(2) + "\n";
}

std::string model_hash(const IridModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_model(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return std::isnan(value) ? "null" : (value > 0 ? "1e999" : "-1e999");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out = buf;
  if (out[0] == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string serialize_solution(const Solution& solution, const IridModel& model) {
  std::ostringstream out;
  auto label = [&](const std::string& var, std::size_t index) { return quoted(model.frame(model.id(var)).label(index)); };
  auto given = [&](const std::vector<std::string>& vars, const std::vector<std::string>& labels) {
    std::string s = "{";
    for (std::size_t i = 0; i < vars.size(); ++i) {
      s += (i ? ", " : "") + quoted(vars[i]) + ": " + quoted(labels[i]);
    }
    return s + "}";
  };

  out << "{\n";
  out << "  \"schema_version\": " << quoted(std::string(kSchemaVersion)) << ",\n";
  out << "  \"model_hash\": " << quoted(model_hash(model)) << ",\n";
  out << "  \"backend\": " << quoted(std::string(to_string(solution.backend))) << ",\n";
  out << "  \"objective\": " << quoted(std::string(to_string(solution.objective))) << ",\n";
  if (solution.backend == Backend::gibbs) {
    const SamplerConfig& s = solution.sampler;
    out << "  \"sampler\": {\"seed\": " << s.seed << ", \"burn_in\": " << s.burn_in << ", \"samples\": " << s.samples
        << ", \"thinning\": " << s.thinning
        << ", \"common_random_numbers\": " << (solution.common_random_numbers ? "true" : "false") << "},\n";
  } else {
    out << "  \"sampler\": null,\n";
  }
  out << "  \"expected_value\": " << format_fixed(solution.expected_value, 2) << ",\n";
  out << "  \"expected_value_std_error\": " << format_fixed(solution.terminal.std_error, 2) << ",\n";

  out << "  \"policies\": [";
  for (std::size_t i = 0; i < solution.policies.size(); ++i) {
    const Policy& p = solution.policies[i];
    out << (i ? ",\n" : "\n") << "    {\n      \"decision\": " << quoted(p.decision) << ",\n      \"scope\": [";
    for (std::size_t j = 0; j < p.scope.size(); ++j) out << (j ? ", " : "") << quoted(p.scope[j]);
    out << "],\n      \"cells\": [";
    std::vector<VarId> scope;
    for (const auto& s : p.scope) scope.push_back(model.id(s));
    ConfigCounter counter(model.cards_of(scope));
    std::size_t row = 0;
    do {
      std::vector<std::string> labels;
      for (std::size_t j = 0; j < scope.size(); ++j) labels.push_back(model.frame(scope[j]).label(counter[j]));
      out << (row ? ",\n" : "\n") << "        {\"given\": " << given(p.scope, labels)
          << ", \"choice\": " << label(p.decision, p.choice[row]) << "}";
      ++row;
    } while (counter.next());
    out << "\n      ]\n    }";
  }
  out << (solution.policies.empty() ? "],\n" : "\n  ],\n");

  out << "  \"diagnostics\": [";
  for (std::size_t i = 0; i < solution.diagnostics.size(); ++i) {
    const CellDiagnostics& d = solution.diagnostics[i];
    out << (i ? ",\n" : "\n") << "    {\"stage\": " << d.stage << ", \"decision\": " << quoted(d.decision)
        << ", \"given\": " << given(d.dependency_vars, d.dependency_labels)
        << ", \"chosen\": " << label(d.decision, d.chosen) << ", \"forced\": " << (d.forced ? "true" : "false")
        << ", \"zero_probability\": " << (d.zero_probability ? "true" : "false") << ", \"evaluations\": [";
    for (std::size_t j = 0; j < d.evaluations.size(); ++j) {
      const AlternativeEvaluation& e = d.evaluations[j];
      out << (j ? ", " : "") << "{\"alternative\": " << label(d.decision, e.alternative)
          << ", \"value\": " << format_fixed(e.value, 2) << ", \"std_error\": " << format_fixed(e.std_error, 2)
          << ", \"n\": " << e.n << "}";
    }
    out << "]}";
  }
  out << (solution.diagnostics.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

std::string format_policy_table(const Solution& solution, const IridModel& model) {
  std::ostringstream out;
  for (const Policy& p : solution.policies) {
    std::vector<VarId> scope;
    for (const auto& s : p.scope) scope.push_back(model.id(s));
    const Frame& frame = model.frame(model.id(p.decision));

    std::vector<std::size_t> width;
    for (VarId v : scope) {
      std::size_t w = model.name(v).size();
      for (const auto& l : model.frame(v).labels()) w = std::max(w, l.size());
      width.push_back(w);
    }
    std::size_t choice_width = p.decision.size();
    for (const auto& l : frame.labels()) choice_width = std::max(choice_width, l.size());

    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    out << "policy " << p.decision << "\n";
    std::string header;
    std::string rule;
    for (std::size_t j = 0; j < scope.size(); ++j) {
      header += pad(model.name(scope[j]), width[j]) + "  ";
      rule += std::string(width[j], '-') + "  ";
    }
    header += "| " + p.decision;
    rule += "+-" + std::string(choice_width, '-');
    out << "  " << header << "\n  " << rule << "\n";
    ConfigCounter counter(model.cards_of(scope));
    std::size_t row = 0;
    do {
      std::string line;
      for (std::size_t j = 0; j < scope.size(); ++j) line += pad(model.frame(scope[j]).label(counter[j]), width[j]) + "  ";
      out << "  " << line << "| " << frame.label(p.choice[row]) << "\n";
      ++row;
    } while (counter.next());
    out << "\n";
  }
  out << "expected value: " << format_fixed(solution.expected_value, 2);
  if (solution.backend == Backend::gibbs) out << " (std error " << format_fixed(solution.terminal.std_error, 2) << ")";
  out << "\n";
  return out.str();
}

}  // namespace irid
