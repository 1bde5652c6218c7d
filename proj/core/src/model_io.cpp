#include <fstream>
#include <sstream>

#include "json.hpp"

#include "torrent/errors.hpp"
#include "torrent/model.hpp"

namespace torrent {
namespace {

using nlohmann::json;

ParseError located(const std::string& what, std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return ParseError(what, line, column);
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(std::string("missing field '") + key + "'");
  return *it;
}

StateId state_ref(const std::unordered_map<std::string, StateId>& index, const std::string& name,
                  const std::string& context) {
  auto it = index.find(name);
  if (it == index.end()) throw ValidationError(context + " refers to unknown state '" + name + "'");
  return it->second;
}

}  // namespace

Model parse_model(std::string_view text, double row_tolerance) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    throw located(e.what(), text, e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!doc.is_object()) throw ValidationError("model document must be a JSON object");

  const json& states = field(doc, "states");
  if (!states.is_array()) throw ValidationError("'states' must be an array of strings");
  std::vector<std::string> names;
  std::unordered_map<std::string, StateId> index;
  for (const auto& s : states) {
    if (!s.is_string()) throw ValidationError("'states' must be an array of strings");
    names.push_back(s.get<std::string>());
    if (!index.emplace(names.back(), static_cast<StateId>(names.size() - 1)).second)
      throw ValidationError("duplicate state name '" + names.back() + "'");
  }

  const json& initial = field(doc, "initial");
  if (!initial.is_string()) throw ValidationError("'initial' must be a state name");
  const StateId init = state_ref(index, initial.get<std::string>(), "'initial'");

  std::vector<std::vector<std::string>> labels(names.size());
  if (auto it = doc.find("labels"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("'labels' must be an object");
    for (const auto& [state, list] : it->items()) {
      const StateId s = state_ref(index, state, "'labels'");
      if (!list.is_array()) throw ValidationError("labels of '" + state + "' must be an array");
      for (const auto& l : list) {
        if (!l.is_string()) throw ValidationError("labels of '" + state + "' must be strings");
        labels[s].push_back(l.get<std::string>());
      }
    }
  }

  const json& transitions = field(doc, "transitions");
  if (!transitions.is_object()) throw ValidationError("'transitions' must be an object");
  std::vector<std::vector<Distribution>> actions(names.size());
  std::vector<bool> seen(names.size(), false);
  for (const auto& [state, dists] : transitions.items()) {
    const StateId s = state_ref(index, state, "'transitions'");
    seen[s] = true;
    if (!dists.is_array())
      throw ValidationError("transitions of '" + state + "' must be an array of distributions");
    for (const auto& dist : dists) {
      if (!dist.is_object())
        throw ValidationError("distribution of '" + state + "' must be an object");
      std::vector<Transition> entries;
      for (const auto& [target, p] : dist.items()) {
        const StateId t = state_ref(index, target, "distribution of '" + state + "'");
        if (!p.is_number())
          throw ValidationError("probability of '" + state + "' -> '" + target + "' is not a number");
        entries.push_back({t, p.get<double>()});
      }
      actions[s].emplace_back(std::move(entries));
    }
  }
  for (std::size_t s = 0; s < names.size(); ++s)
    if (!seen[s]) throw ValidationError("state '" + names[s] + "' has no transitions");

  return Model(std::move(names), init, std::move(labels), std::move(actions), row_tolerance);
}

Model load_model(const std::filesystem::path& file, double row_tolerance) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file '" + file.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str(), row_tolerance);
}

std::string serialize_model(const Model& m) {
  json doc;
  doc["states"] = json::array();
  for (const auto& n : m.names()) doc["states"].push_back(n);
  doc["initial"] = m.name(m.initial());
  doc["labels"] = json::object();
  doc["transitions"] = json::object();
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (!m.labels(s).empty()) {
      json list = json::array();
      for (const auto& l : m.labels(s)) list.push_back(l);
      doc["labels"][m.name(s)] = std::move(list);
    }
    json dists = json::array();
    for (const auto& d : m.actions(s)) {
      json entry = json::object();
      for (const auto& t : d.entries()) entry[m.name(t.target)] = t.probability;
      dists.push_back(std::move(entry));
    }
    doc["transitions"][m.name(s)] = std::move(dists);
  }
  return doc.dump(2) + "\n";
}

}  // namespace torrent
