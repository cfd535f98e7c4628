#include "pharmonic/json_io.hpp"

#include <string>

#include "pharmonic/errors.hpp"

namespace pharmonic {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ValidationError(what); }

double positive_number(const json& j, const char* name) {
  if (!j.is_number()) bad(std::string(name) + " must be a number");
  return j.get<double>();
}

}  // namespace

json word_to_json(const ReducedWord& w) { return json(w.letters()); }

ReducedWord word_from_json(const json& j, int order) {
  if (!j.is_array()) bad("word must be a JSON array of generator indices");
  std::vector<int> letters;
  letters.reserve(j.size());
  for (const auto& entry : j) {
    if (!entry.is_number_integer()) bad("word letters must be integers");
    letters.push_back(entry.get<int>());
  }
  return ReducedWord::reduce(letters, order);
}

json ball_to_json(const Ball& b) {
  json vertices = json::array();
  for (const ReducedWord& v : b.vertices) vertices.push_back(word_to_json(v));
  json edges = json::array();
  for (const auto& [a, c] : b.edges) {
    edges.push_back(json::array(
        {word_to_json(b.vertices[a]), word_to_json(b.vertices[c])}));
  }
  return json{{"center", word_to_json(b.center)},
              {"radius", b.radius},
              {"vertices", vertices},
              {"edges", edges}};
}

json subgroup_spec_to_json(const SubgroupSpec& spec) {
  if (const auto* finite = std::get_if<FiniteIndexSpec>(&spec)) {
    json subsets = json::array();
    for (const auto& subset : finite->subsets) subsets.push_back(subset);
    return json{{"finite", {{"A", subsets}}}};
  }
  const auto& pair = std::get<InfiniteIndexPair>(spec);
  return json{{"pair", {pair.first, pair.second}}};
}

SubgroupSpec subgroup_spec_from_json(const json& j, int order) {
  if (!j.is_object()) bad("subgroup spec must be a JSON object");
  if (j.contains("finite")) {
    const json& f = j.at("finite");
    if (!f.is_object() || !f.contains("A") || !f.at("A").is_array()) {
      bad("finite spec must carry an array \"A\" of generator subsets");
    }
    FiniteIndexSpec spec;
    spec.order = order;
    for (const auto& subset : f.at("A")) {
      if (!subset.is_array()) bad("each subset must be an array");
      std::vector<int> entries;
      for (const auto& e : subset) {
        if (!e.is_number_integer()) bad("subset entries must be integers");
        entries.push_back(e.get<int>());
      }
      spec.subsets.push_back(std::move(entries));
    }
    check_finite_spec(spec);
    return spec;
  }
  if (j.contains("pair")) {
    const json& p = j.at("pair");
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
        !p[1].is_number_integer()) {
      bad("pair spec must be an array of two generator indices");
    }
    InfiniteIndexPair pair;
    pair.order = order;
    pair.first = p[0].get<int>();
    pair.second = p[1].get<int>();
    check_pair(pair);
    return pair;
  }
  bad("subgroup spec needs a \"finite\" or \"pair\" entry");
}

json vertex_function_to_json(const VertexFunction& u) {
  json out = json::object();
  for (const auto& [word, value] : u.values()) {
    out[word_to_json(word).dump()] = value;
  }
  return out;
}

VertexFunction vertex_function_from_json(const json& j, int order) {
  if (!j.is_object()) bad("vertex function must be a JSON object");
  VertexFunction out;
  for (const auto& [key, value] : j.items()) {
    json word;
    try {
      word = json::parse(key);
    } catch (const json::exception&) {
      bad("vertex function key is not a serialized word: " + key);
    }
    if (!value.is_number()) bad("vertex function values must be numbers");
    out.set(word_from_json(word, order), value.get<double>());
  }
  return out;
}

json sequence_to_json(const ResistanceSequence& seq) {
  json out{{"window", {{"from", seq.window_from()}, {"values", seq.window()}}},
           {"tail_left",
            {{"base", seq.left().base}, {"ratio", seq.left().ratio}}},
           {"tail_right",
            {{"base", seq.right().base}, {"ratio", seq.right().ratio}}}};
  const WithinCosetRule& within = seq.within_coset();
  if (within.mode == WithinCosetRule::Mode::constant) {
    out["within_coset"] = {{"mode", "constant"}, {"value", within.value}};
  } else {
    out["within_coset"] = {{"mode", "log_uniform"},
                           {"seed", within.seed},
                           {"lo", within.lo},
                           {"hi", within.hi}};
  }
  return out;
}

ResistanceSequence sequence_from_json(const json& j) {
  if (!j.is_object()) bad("resistance sequence must be a JSON object");
  if (!j.contains("window") || !j.contains("tail_left") ||
      !j.contains("tail_right")) {
    bad("resistance sequence needs window, tail_left and tail_right");
  }
  const json& w = j.at("window");
  if (!w.contains("from") || !w.contains("values") ||
      !w.at("values").is_array()) {
    bad("window needs \"from\" and \"values\"");
  }
  std::vector<double> values;
  for (const auto& v : w.at("values")) {
    values.push_back(positive_number(v, "window value"));
  }
  const auto tail = [](const json& t) {
    return GeometricTail{positive_number(t.at("base"), "tail base"),
                         positive_number(t.at("ratio"), "tail ratio")};
  };
  WithinCosetRule within;
  if (j.contains("within_coset")) {
    const json& wc = j.at("within_coset");
    const std::string mode = wc.value("mode", "constant");
    if (mode == "constant") {
      within.value = wc.value("value", 1.0);
    } else if (mode == "log_uniform") {
      within = WithinCosetRule::log_uniform(wc.value("seed", 0ull),
                                            wc.value("lo", 0.1),
                                            wc.value("hi", 10.0));
    } else {
      bad("unknown within_coset mode: " + mode);
    }
  }
  return ResistanceSequence(w.at("from").get<long>(), std::move(values),
                            tail(j.at("tail_left")), tail(j.at("tail_right")),
                            within);
}

json member_to_json(const FamilyMember& m) {
  return json{{"family", m.family == Family::U1 ? "U1" : "U2"},
              {"amplitude", m.amplitude},
              {"offset", m.offset}};
}

FamilyMember member_from_json(const json& j, const ResistanceSequence& seq) {
  if (!j.is_object()) bad("family member must be a JSON object");
  const std::string family = j.value("family", "");
  if (family != "U1" && family != "U2") {
    bad("family must be \"U1\" or \"U2\"");
  }
  FamilyMember m{family == "U1" ? Family::U1 : Family::U2,
                 j.value("amplitude", 0.0), j.value("offset", 0.0), seq};
  check_member(m);
  return m;
}

json coset_resistances_to_json(const CosetResistances& r,
                               const QuotientGraph& q) {
  json out = json::object();
  for (int i = 0; i < q.num_cosets(); ++i) {
    for (int j2 = i; j2 < q.num_cosets(); ++j2) {
      if (q.multiplicity(i, j2) > 0) {
        out[std::to_string(i) + "-" + std::to_string(j2)] = r.at(i, j2);
      }
    }
  }
  return out;
}

CosetResistances coset_resistances_from_json(const json& j,
                                             const QuotientGraph& q) {
  if (!j.is_object()) bad("coset resistances must be a JSON object");
  CosetResistances out(q.parity_count);
  for (const auto& [key, value] : j.items()) {
    const auto dash = key.find('-');
    if (dash == std::string::npos) {
      bad("coset resistance keys look like \"i-j\", got: " + key);
    }
    int a = 0;
    int b = 0;
    try {
      a = std::stoi(key.substr(0, dash));
      b = std::stoi(key.substr(dash + 1));
    } catch (const std::exception&) {
      bad("coset resistance keys look like \"i-j\", got: " + key);
    }
    out.set(a, b, positive_number(value, "coset resistance"));
  }
  out.validate_cover(q);
  return out;
}

}  // namespace pharmonic
