#include "pgsynth/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace pgsynth {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string location_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_input("syntax error at " + location_of(text, e.byte) + ": " + e.what());
  }
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw invalid_input("schema violation at " + path + ": " + what);
}

const json& field(const json& obj, const std::string& path, const std::string& name) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) schema_error(path + "." + name, "missing field");
  return *it;
}

std::string string_field(const json& obj, const std::string& path, const std::string& name) {
  const json& v = field(obj, path, name);
  if (!v.is_string()) schema_error(path + "." + name, "expected a string");
  return v.get<std::string>();
}

std::int64_t int_field(const json& obj, const std::string& path, const std::string& name) {
  const json& v = field(obj, path, name);
  if (!v.is_number_integer()) schema_error(path + "." + name, "expected an integer");
  return v.get<std::int64_t>();
}

Multiset multiset_field(const json& obj, const std::string& path, const std::string& name) {
  const json& v = field(obj, path, name);
  if (!v.is_object()) schema_error(path + "." + name, "expected an object of counts");
  Multiset m;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!it.value().is_number_integer() || it.value().get<std::int64_t>() <= 0)
      schema_error(path + "." + name + "." + it.key(), "counts must be positive integers");
    m.add(it.key(), it.value().get<std::int64_t>());
  }
  return m;
}

ordered_json multiset_to_json(const Multiset& m) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, c] : m) o[k] = c;
  return o;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

// Net-with-labels body shared by strategy/prefix and controller documents.
void parse_labeled_net(const json& doc, const std::string& path, PTNet& net,
                       std::map<std::string, std::string>& labeling) {
  const json& places = field(doc, path, "places");
  if (!places.is_array() || places.empty())
    schema_error(path + ".places", "expected a non-empty array");
  std::size_t i = 0;
  for (const auto& p : places) {
    std::string ppath = path + ".places[" + std::to_string(i++) + "]";
    std::string id = string_field(p, ppath, "id");
    if (net.places.count(id)) schema_error(ppath + ".id", "duplicate id '" + id + "'");
    net.places.insert(id);
    labeling[id] = string_field(p, ppath, "label");
    if (p.contains("initial")) {
      std::int64_t n = int_field(p, ppath, "initial");
      if (n < 0) schema_error(ppath + ".initial", "must be non-negative");
      if (n > 0) net.initial.add(id, n);
    }
  }
  const json& transitions = field(doc, path, "transitions");
  if (!transitions.is_array()) schema_error(path + ".transitions", "expected an array");
  i = 0;
  for (const auto& t : transitions) {
    std::string tpath = path + ".transitions[" + std::to_string(i++) + "]";
    std::string id = string_field(t, tpath, "id");
    if (net.transitions.count(id) || net.places.count(id))
      schema_error(tpath + ".id", "duplicate id '" + id + "'");
    net.transitions.insert(id);
    labeling[id] = string_field(t, tpath, "label");
    net.pre[id] = multiset_field(t, tpath, "pre");
    net.post[id] = multiset_field(t, tpath, "post");
  }
  try {
    net.check_well_formed();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

ordered_json labeled_net_to_json(const PTNet& net,
                                 const std::map<std::string, std::string>& labeling) {
  ordered_json doc = ordered_json::object();
  ordered_json places = ordered_json::array();
  for (const auto& p : net.places) {
    ordered_json o;
    o["id"] = p;
    o["label"] = labeling.at(p);
    if (net.initial.contains(p)) o["initial"] = net.initial.count(p);
    places.push_back(std::move(o));
  }
  ordered_json transitions = ordered_json::array();
  for (const auto& t : net.transitions) {
    ordered_json o;
    o["id"] = t;
    o["label"] = labeling.at(t);
    o["pre"] = multiset_to_json(net.pre_of(t));
    o["post"] = multiset_to_json(net.post_of(t));
    transitions.push_back(std::move(o));
  }
  doc["places"] = std::move(places);
  doc["transitions"] = std::move(transitions);
  return doc;
}

}  // namespace

std::string document_kind(const std::string& text) {
  json doc = parse_json(text);
  return string_field(doc, "$", "kind");
}

PetriGame parse_game(const std::string& text) {
  json doc = parse_json(text);
  if (string_field(doc, "$", "kind") != "game")
    schema_error("$.kind", "expected \"game\"");
  string_field(doc, "$", "format_version");

  PetriGame g;
  std::int64_t bound = int_field(doc, "$", "bound");
  if (bound < 1) schema_error("$.bound", "bound must be a positive integer");
  g.bound = bound;

  const json& places = field(doc, "$", "places");
  if (!places.is_array() || places.empty())
    schema_error("$.places", "expected a non-empty array");
  std::size_t i = 0;
  for (const auto& p : places) {
    std::string ppath = "$.places[" + std::to_string(i++) + "]";
    std::string id = string_field(p, ppath, "id");
    if (g.net.places.count(id)) schema_error(ppath + ".id", "duplicate id '" + id + "'");
    g.net.places.insert(id);
    std::string owner = string_field(p, ppath, "owner");
    if (owner == "system")
      g.system_places.insert(id);
    else if (owner == "environment")
      g.environment_places.insert(id);
    else
      schema_error(ppath + ".owner", "expected \"system\" or \"environment\"");
    if (p.contains("bad") && field(p, ppath, "bad").get<bool>()) g.bad_places.insert(id);
    if (p.contains("initial")) {
      std::int64_t n = int_field(p, ppath, "initial");
      if (n < 0) schema_error(ppath + ".initial", "must be non-negative");
      if (n > 0) g.net.initial.add(id, n);
    }
  }

  const json& transitions = field(doc, "$", "transitions");
  if (!transitions.is_array()) schema_error("$.transitions", "expected an array");
  i = 0;
  for (const auto& t : transitions) {
    std::string tpath = "$.transitions[" + std::to_string(i++) + "]";
    std::string id = string_field(t, tpath, "id");
    if (g.net.transitions.count(id) || g.net.places.count(id))
      schema_error(tpath + ".id", "duplicate id '" + id + "'");
    g.net.transitions.insert(id);
    g.net.pre[id] = multiset_field(t, tpath, "pre");
    g.net.post[id] = multiset_field(t, tpath, "post");
  }
  try {
    g.net.check_well_formed();
  } catch (const Error& e) {
    schema_error("$", e.what());
  }
  return g;
}

std::string serialize_game(const PetriGame& g) {
  ordered_json doc;
  doc["format_version"] = "1";
  doc["kind"] = "game";
  doc["bound"] = g.bound;
  ordered_json places = ordered_json::array();
  for (const auto& p : g.net.places) {
    ordered_json o;
    o["id"] = p;
    o["owner"] = g.is_system(p) ? "system" : "environment";
    if (g.is_bad(p)) o["bad"] = true;
    if (g.net.initial.contains(p)) o["initial"] = g.net.initial.count(p);
    places.push_back(std::move(o));
  }
  ordered_json transitions = ordered_json::array();
  for (const auto& t : g.net.transitions) {
    ordered_json o;
    o["id"] = t;
    o["pre"] = multiset_to_json(g.net.pre_of(t));
    o["post"] = multiset_to_json(g.net.post_of(t));
    transitions.push_back(std::move(o));
  }
  doc["places"] = std::move(places);
  doc["transitions"] = std::move(transitions);
  return dump(doc);
}

StrategyNet parse_strategy(const std::string& text) {
  json doc = parse_json(text);
  std::string kind = string_field(doc, "$", "kind");
  if (kind != "strategy" && kind != "prefix")
    schema_error("$.kind", "expected \"strategy\" or \"prefix\"");
  string_field(doc, "$", "format_version");
  StrategyNet s;
  parse_labeled_net(doc, "$", s.net, s.labeling);
  return s;
}

std::string serialize_strategy(const StrategyNet& s) {
  ordered_json doc;
  doc["format_version"] = "1";
  doc["kind"] = "strategy";
  ordered_json body = labeled_net_to_json(s.net, s.labeling);
  doc["places"] = std::move(body["places"]);
  doc["transitions"] = std::move(body["transitions"]);
  return dump(doc);
}

std::string serialize_prefix(const BranchingProcess& bp) {
  ordered_json doc;
  doc["format_version"] = "1";
  doc["kind"] = "prefix";
  ordered_json body = labeled_net_to_json(bp.occ, bp.label);
  doc["places"] = std::move(body["places"]);
  doc["transitions"] = std::move(body["transitions"]);
  return dump(doc);
}

std::vector<LocalController> parse_controllers(const std::string& text) {
  json doc = parse_json(text);
  if (string_field(doc, "$", "kind") != "controllers")
    schema_error("$.kind", "expected \"controllers\"");
  string_field(doc, "$", "format_version");
  const json& arr = field(doc, "$", "controllers");
  if (!arr.is_array() || arr.empty())
    schema_error("$.controllers", "expected a non-empty array");
  std::vector<LocalController> cs;
  std::size_t i = 0;
  for (const auto& c : arr) {
    std::string cpath = "$.controllers[" + std::to_string(i++) + "]";
    LocalController lc;
    std::string team = string_field(c, cpath, "team");
    if (team == "system")
      lc.system = true;
    else if (team == "environment")
      lc.system = false;
    else
      schema_error(cpath + ".team", "expected \"system\" or \"environment\"");
    parse_labeled_net(c, cpath, lc.net, lc.weak_labeling);
    cs.push_back(std::move(lc));
  }
  return cs;
}

std::string serialize_controllers(const std::vector<LocalController>& cs) {
  ordered_json doc;
  doc["format_version"] = "1";
  doc["kind"] = "controllers";
  ordered_json arr = ordered_json::array();
  for (const auto& c : cs) {
    ordered_json o;
    o["team"] = c.system ? "system" : "environment";
    ordered_json body = labeled_net_to_json(c.net, c.weak_labeling);
    o["places"] = std::move(body["places"]);
    o["transitions"] = std::move(body["transitions"]);
    arr.push_back(std::move(o));
  }
  doc["controllers"] = std::move(arr);
  return dump(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write '" + path + "'");
  out << content;
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string tokens_suffix(std::int64_t n) {
  std::string s;
  for (std::int64_t i = 0; i < n; ++i) s += "*";
  return s.empty() ? s : "\\n" + s;
}

// Shared net renderer: places as circles (system gray, bad doubled),
// transitions as boxes. `display` maps node ids to shown labels.
std::string render_net(const PTNet& net,
                       const std::function<std::string(const std::string&)>& display,
                       const std::function<bool(const std::string&)>& is_system,
                       const std::function<bool(const std::string&)>& is_bad,
                       const std::string& indent, const std::string& prefix) {
  std::ostringstream out;
  std::map<std::string, std::string> node_name;
  std::size_t n = 0;
  for (const auto& p : net.places) node_name[p] = prefix + "n" + std::to_string(n++);
  for (const auto& t : net.transitions) node_name[t] = prefix + "n" + std::to_string(n++);

  for (const auto& p : net.places) {
    out << indent << node_name[p] << " [shape=circle label=\"" << dot_escape(display(p))
        << tokens_suffix(net.initial.count(p)) << "\"";
    if (is_system(p)) out << " style=filled fillcolor=lightgray";
    if (is_bad(p)) out << " peripheries=2";
    out << "];\n";
  }
  for (const auto& t : net.transitions) {
    out << indent << node_name[t] << " [shape=box label=\"" << dot_escape(display(t))
        << "\"];\n";
    for (const auto& [p, c] : net.pre_of(t)) {
      out << indent << node_name[p] << " -> " << node_name[t];
      if (c > 1) out << " [label=\"" << c << "\"]";
      out << ";\n";
    }
    for (const auto& [p, c] : net.post_of(t)) {
      out << indent << node_name[t] << " -> " << node_name[p];
      if (c > 1) out << " [label=\"" << c << "\"]";
      out << ";\n";
    }
  }
  return out.str();
}

}  // namespace

std::string export_dot_net(const PTNet& net) {
  std::ostringstream out;
  out << "digraph net {\n  rankdir=TB;\n";
  out << render_net(
      net, [](const std::string& n) { return n; }, [](const std::string&) { return false; },
      [](const std::string&) { return false; }, "  ", "");
  out << "}\n";
  return out.str();
}

std::string export_dot_game(const PetriGame& g) {
  std::ostringstream out;
  out << "digraph game {\n  rankdir=TB;\n";
  out << render_net(
      g.net, [](const std::string& n) { return n; },
      [&](const std::string& p) { return g.is_system(p); },
      [&](const std::string& p) { return g.is_bad(p); }, "  ", "");
  out << "}\n";
  return out.str();
}

namespace {

std::string render_labeled(const PetriGame& g, const PTNet& net,
                           const std::map<std::string, std::string>& labeling,
                           const std::string& graph_name) {
  auto label_of = [&](const std::string& n) {
    auto it = labeling.find(n);
    return it == labeling.end() ? n : it->second;
  };
  std::ostringstream out;
  out << "digraph " << graph_name << " {\n  rankdir=TB;\n";
  out << render_net(
      net, label_of, [&](const std::string& p) { return g.is_system(label_of(p)); },
      [&](const std::string& p) { return g.is_bad(label_of(p)); }, "  ", "");
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_dot_strategy(const PetriGame& g, const StrategyNet& s) {
  return render_labeled(g, s.net, s.labeling, "strategy");
}

std::string export_dot_branching_process(const PetriGame& g, const BranchingProcess& bp) {
  return render_labeled(g, bp.occ, bp.label, "unfolding");
}

std::string export_dot_controllers(const PetriGame& g,
                                   const std::vector<LocalController>& cs) {
  std::ostringstream out;
  out << "digraph controllers {\n  rankdir=TB;\n";
  std::size_t i = 0;
  for (const auto& c : cs) {
    auto label_of = [&](const std::string& n) {
      auto it = c.weak_labeling.find(n);
      return it == c.weak_labeling.end() ? n : it->second;
    };
    out << "  subgraph cluster_" << i << " {\n";
    out << "    label=\"" << (c.system ? "system" : "environment") << " controller "
        << i << "\";\n";
    out << render_net(
        c.net, label_of, [&](const std::string& p) { return g.is_system(label_of(p)); },
        [&](const std::string& p) { return g.is_bad(label_of(p)); }, "    ",
        "c" + std::to_string(i) + "_");
    out << "  }\n";
    ++i;
  }
  out << "}\n";
  return out.str();
}

std::string export_dot_game_graph(const GameGraph& gg) {
  std::ostringstream out;
  out << "digraph decision_game {\n  rankdir=TB;\n";
  for (std::size_t i = 0; i < gg.states.size(); ++i) {
    std::string label = gg.states[i].key();
    // Break the key into one entry per line for readability.
    std::string pretty;
    for (std::size_t k = 0; k < label.size(); ++k) {
      pretty += label[k];
      if (label[k] == ',' && k + 1 < label.size() && label[k + 1] == '(')
        pretty += "\\n";
    }
    bool terminal = gg.terminal[i] != TerminalKind::kNonTerminal;
    // Winning classification follows the drawing convention: diamonds for
    // Player-1 states, rectangles otherwise; doubled borders for Player-0
    // wins, bold for Player-1 wins.
    std::string shape =
        (!terminal && gg.owner[i] == Player::kPlayer1) ? "diamond" : "box";
    out << "  s" << i << " [shape=" << shape << " label=\"" << dot_escape(pretty)
        << "\"";
    if (gg.w0.count(i)) out << " peripheries=2";
    if (gg.w1.count(i)) out << " penwidth=3";
    if (gg.initial.count(i)) out << " color=blue";
    out << "];\n";
  }
  for (const auto& e : gg.edges) {
    out << "  s" << e.from << " -> s" << e.to << " [label=\""
        << dot_escape(e.move.kind == GameMove::Kind::kFire ? e.move.transition
                                                           : "resolve")
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace pgsynth
