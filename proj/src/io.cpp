#include "egsim/io.hpp"

#include <algorithm>

namespace egsim {

namespace {

[[noreturn]] void fail(const std::string& msg, const std::string& path) {
  throw SchemaError(msg, path.empty() ? "/" : path);
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(std::string("missing field '") + key + "'", path);
  return *it;
}

void check_fields(const Json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail("expected an object", path);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok |= it.key() == a;
    if (!ok) fail("unknown field", path + "/" + it.key());
  }
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail("expected a string", path);
  return j.get<std::string>();
}

long long as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail("expected an integer", path);
  return j.get<long long>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail("expected an array", path);
  return j;
}

std::vector<int> int_vector(const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(static_cast<int>(as_int(j[i], path + "/" + std::to_string(i))));
  return out;
}

void declare_names(NameTable& t, const Json& arr, const std::string& path) {
  as_array(arr, path);
  for (size_t i = 0; i < arr.size(); ++i)
    t.declare(as_string(arr[i], path + "/" + std::to_string(i)));
}

Json names_json(const NameTable& t) {
  Json arr = Json::array();
  for (int i = 0; i < t.declared_count(); ++i) arr.push_back(t.name(i));
  return arr;
}

Metadata parse_metadata(const Json& obj, const std::string& path) {
  Metadata md;
  if (!obj.contains("metadata")) return md;
  const Json& m = obj["metadata"];
  check_fields(m, path + "/metadata", {"name", "seed", "provenance"});
  if (m.contains("name")) md.name = as_string(m["name"], path + "/metadata/name");
  if (m.contains("seed")) md.seed = as_int(m["seed"], path + "/metadata/seed");
  if (m.contains("provenance"))
    md.provenance = as_string(m["provenance"], path + "/metadata/provenance");
  return md;
}

Json metadata_json(const Metadata& md) {
  Json m = Json::object();
  if (md.name) m["name"] = *md.name;
  if (md.seed) m["seed"] = *md.seed;
  if (md.provenance) m["provenance"] = *md.provenance;
  return m;
}

int checked_dimension(const Json& j, const std::string& path) {
  long long d = as_int(j, path);
  if (d < 1 || d > 64) fail("dimension out of range", path);
  return static_cast<int>(d);
}

std::vector<int> effect_vector(const Json& j, int dim, const std::string& path) {
  std::vector<int> e = int_vector(j, path);
  if (static_cast<int>(e.size()) != dim) fail("effect dimension mismatch", path);
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i] < -1 || e[i] > 1)
      fail("effect out of range", path + "/" + std::to_string(i));
  return e;
}

// --- per-kind parsers ------------------------------------------------------

Pda parse_pda(const Json& j) {
  check_fields(j, "", {"kind", "metadata", "states", "stackAlphabet", "actions",
                       "maxPush", "transitions"});
  Pda m;
  declare_names(m.states, field(j, "states", ""), "/states");
  declare_names(m.stackSymbols, field(j, "stackAlphabet", ""), "/stackAlphabet");
  declare_names(m.actions, field(j, "actions", ""), "/actions");
  if (j.contains("maxPush"))
    m.maxPush = static_cast<int>(as_int(j["maxPush"], "/maxPush"));
  const Json& ts = as_array(field(j, "transitions", ""), "/transitions");
  for (size_t i = 0; i < ts.size(); ++i) {
    std::string p = "/transitions/" + std::to_string(i);
    check_fields(ts[i], p, {"src", "top", "action", "dst", "push"});
    PdaTransition t;
    t.src = m.states.intern(as_string(field(ts[i], "src", p), p + "/src"));
    t.top = m.stackSymbols.intern(as_string(field(ts[i], "top", p), p + "/top"));
    t.action = m.actions.intern(as_string(field(ts[i], "action", p), p + "/action"));
    t.dst = m.states.intern(as_string(field(ts[i], "dst", p), p + "/dst"));
    const Json& push = as_array(field(ts[i], "push", p), p + "/push");
    for (size_t k = 0; k < push.size(); ++k)
      t.push.push_back(m.stackSymbols.intern(
          as_string(push[k], p + "/push/" + std::to_string(k))));
    m.transitions.push_back(std::move(t));
  }
  return m;
}

Oca parse_oca(const Json& j, bool net) {
  check_fields(j, "",
               net ? std::initializer_list<const char*>{"kind", "metadata",
                                                        "states", "actions",
                                                        "transitions"}
                   : std::initializer_list<const char*>{"kind", "metadata",
                                                        "states", "actions",
                                                        "transitions",
                                                        "zeroTransitions"});
  Oca m;
  m.isNet = net;
  declare_names(m.states, field(j, "states", ""), "/states");
  declare_names(m.actions, field(j, "actions", ""), "/actions");
  auto parse_rules = [&](const Json& arr, const std::string& base, int minDelta,
                         std::vector<OcaRule>& out) {
    as_array(arr, base);
    for (size_t i = 0; i < arr.size(); ++i) {
      std::string p = base + "/" + std::to_string(i);
      check_fields(arr[i], p, {"src", "action", "delta", "dst"});
      OcaRule r;
      r.src = m.states.intern(as_string(field(arr[i], "src", p), p + "/src"));
      r.action =
          m.actions.intern(as_string(field(arr[i], "action", p), p + "/action"));
      long long d = as_int(field(arr[i], "delta", p), p + "/delta");
      if (d < minDelta || d > 1) fail("delta out of range", p + "/delta");
      r.delta = static_cast<int>(d);
      r.dst = m.states.intern(as_string(field(arr[i], "dst", p), p + "/dst"));
      out.push_back(r);
    }
  };
  parse_rules(field(j, "transitions", ""), "/transitions", -1, m.rules);
  if (!net && j.contains("zeroTransitions"))
    parse_rules(j["zeroTransitions"], "/zeroTransitions", 0, m.zeroRules);
  return m;
}

Vass parse_vass(const Json& j) {
  check_fields(j, "",
               {"kind", "metadata", "dimension", "states", "actions", "transitions"});
  Vass m;
  m.dimension = checked_dimension(field(j, "dimension", ""), "/dimension");
  declare_names(m.states, field(j, "states", ""), "/states");
  declare_names(m.actions, field(j, "actions", ""), "/actions");
  const Json& ts = as_array(field(j, "transitions", ""), "/transitions");
  for (size_t i = 0; i < ts.size(); ++i) {
    std::string p = "/transitions/" + std::to_string(i);
    check_fields(ts[i], p, {"src", "action", "dst", "effect"});
    VassTransition t;
    t.src = m.states.intern(as_string(field(ts[i], "src", p), p + "/src"));
    t.action = m.actions.intern(as_string(field(ts[i], "action", p), p + "/action"));
    t.dst = m.states.intern(as_string(field(ts[i], "dst", p), p + "/dst"));
    t.effect = effect_vector(field(ts[i], "effect", p), m.dimension, p + "/effect");
    m.transitions.push_back(std::move(t));
  }
  return m;
}

Peg parse_peg(const Json& j) {
  check_fields(j, "", {"kind", "metadata", "dimension", "statesP0", "statesP1",
                       "stackAlphabet", "maxPush", "transitions"});
  Peg g;
  g.dimension = checked_dimension(field(j, "dimension", ""), "/dimension");
  const Json& p0 = as_array(field(j, "statesP0", ""), "/statesP0");
  for (size_t i = 0; i < p0.size(); ++i)
    g.add_state(as_string(p0[i], "/statesP0/" + std::to_string(i)), Owner::P0);
  const Json& p1 = as_array(field(j, "statesP1", ""), "/statesP1");
  for (size_t i = 0; i < p1.size(); ++i)
    g.add_state(as_string(p1[i], "/statesP1/" + std::to_string(i)), Owner::P1);
  declare_names(g.stackSymbols, field(j, "stackAlphabet", ""), "/stackAlphabet");
  if (j.contains("maxPush"))
    g.maxPush = static_cast<int>(as_int(j["maxPush"], "/maxPush"));
  const Json& ts = as_array(field(j, "transitions", ""), "/transitions");
  for (size_t i = 0; i < ts.size(); ++i) {
    std::string p = "/transitions/" + std::to_string(i);
    check_fields(ts[i], p, {"src", "top", "dst", "push", "effect"});
    PegTransition t;
    t.src = g.states.intern(as_string(field(ts[i], "src", p), p + "/src"));
    t.top = g.stackSymbols.intern(as_string(field(ts[i], "top", p), p + "/top"));
    t.dst = g.states.intern(as_string(field(ts[i], "dst", p), p + "/dst"));
    const Json& push = as_array(field(ts[i], "push", p), p + "/push");
    for (size_t k = 0; k < push.size(); ++k)
      t.push.push_back(g.stackSymbols.intern(
          as_string(push[k], p + "/push/" + std::to_string(k))));
    t.effect = effect_vector(field(ts[i], "effect", p), g.dimension, p + "/effect");
    g.transitions.push_back(std::move(t));
  }
  g.owner.resize(g.states.size(), Owner::P0);
  return g;
}

Oceg parse_oceg(const Json& j) {
  check_fields(j, "", {"kind", "metadata", "dimension", "statesP0", "statesP1",
                       "transitions", "zeroTransitions"});
  Oceg g;
  g.dimension = checked_dimension(field(j, "dimension", ""), "/dimension");
  const Json& p0 = as_array(field(j, "statesP0", ""), "/statesP0");
  for (size_t i = 0; i < p0.size(); ++i)
    g.add_state(as_string(p0[i], "/statesP0/" + std::to_string(i)), Owner::P0);
  const Json& p1 = as_array(field(j, "statesP1", ""), "/statesP1");
  for (size_t i = 0; i < p1.size(); ++i)
    g.add_state(as_string(p1[i], "/statesP1/" + std::to_string(i)), Owner::P1);
  auto parse_rules = [&](const Json& arr, const std::string& base, int minDelta,
                         std::vector<OcegRule>& out) {
    as_array(arr, base);
    for (size_t i = 0; i < arr.size(); ++i) {
      std::string p = base + "/" + std::to_string(i);
      check_fields(arr[i], p, {"src", "counterDelta", "dst", "effect"});
      OcegRule r;
      r.src = g.states.intern(as_string(field(arr[i], "src", p), p + "/src"));
      long long d = as_int(field(arr[i], "counterDelta", p), p + "/counterDelta");
      if (d < minDelta || d > 1) fail("counterDelta out of range", p + "/counterDelta");
      r.counterDelta = static_cast<int>(d);
      r.dst = g.states.intern(as_string(field(arr[i], "dst", p), p + "/dst"));
      r.effect =
          effect_vector(field(arr[i], "effect", p), g.dimension, p + "/effect");
      out.push_back(std::move(r));
    }
  };
  parse_rules(field(j, "transitions", ""), "/transitions", -1, g.rules);
  if (j.contains("zeroTransitions"))
    parse_rules(j["zeroTransitions"], "/zeroTransitions", 0, g.zeroRules);
  g.owner.resize(g.states.size(), Owner::P0);
  return g;
}

Mcm parse_mcm(const Json& j) {
  check_fields(j, "", {"kind", "metadata", "states", "init", "halt", "rules"});
  Mcm m;
  declare_names(m.states, field(j, "states", ""), "/states");
  m.initState = m.states.intern(as_string(field(j, "init", ""), "/init"));
  m.haltState = m.states.intern(as_string(field(j, "halt", ""), "/halt"));
  m.rule.resize(m.states.size());
  const Json& rs = as_array(field(j, "rules", ""), "/rules");
  for (size_t i = 0; i < rs.size(); ++i) {
    std::string p = "/rules/" + std::to_string(i);
    std::string op = as_string(field(rs[i], "op", p), p + "/op");
    McmRule r;
    long long c = as_int(field(rs[i], "counter", p), p + "/counter");
    if (c != 1 && c != 2) fail("counter must be 1 or 2", p + "/counter");
    r.counter = static_cast<int>(c);
    int state;
    if (op == "inc") {
      check_fields(rs[i], p, {"state", "op", "counter", "dst"});
      r.kind = McmRule::Inc;
      state = m.states.intern(as_string(field(rs[i], "state", p), p + "/state"));
      r.dst = m.states.intern(as_string(field(rs[i], "dst", p), p + "/dst"));
    } else if (op == "test") {
      check_fields(rs[i], p, {"state", "op", "counter", "ifZero", "ifPositive"});
      r.kind = McmRule::Test;
      state = m.states.intern(as_string(field(rs[i], "state", p), p + "/state"));
      r.dst = m.states.intern(as_string(field(rs[i], "ifZero", p), p + "/ifZero"));
      r.dstPositive = m.states.intern(
          as_string(field(rs[i], "ifPositive", p), p + "/ifPositive"));
    } else {
      fail("op must be 'inc' or 'test'", p + "/op");
    }
    if (state >= static_cast<int>(m.rule.size())) m.rule.resize(state + 1);
    m.set_rule(state, r);
  }
  return m;
}

// --- per-kind serializers ---------------------------------------------------

Json pda_json(const Pda& m) {
  Json j;
  j["kind"] = "pda";
  j["states"] = names_json(m.states);
  j["stackAlphabet"] = names_json(m.stackSymbols);
  j["actions"] = names_json(m.actions);
  j["maxPush"] = m.maxPush;
  Json ts = Json::array();
  for (const auto& t : m.transitions) {
    Json push = Json::array();
    for (int s : t.push) push.push_back(m.stackSymbols.name(s));
    ts.push_back({{"src", m.states.name(t.src)},
                  {"top", m.stackSymbols.name(t.top)},
                  {"action", m.actions.name(t.action)},
                  {"dst", m.states.name(t.dst)},
                  {"push", push}});
  }
  j["transitions"] = ts;
  return j;
}

Json oca_json(const Oca& m) {
  Json j;
  j["kind"] = m.isNet ? "ocn" : "oca";
  j["states"] = names_json(m.states);
  j["actions"] = names_json(m.actions);
  auto rules_json = [&](const std::vector<OcaRule>& rules) {
    Json arr = Json::array();
    for (const auto& r : rules)
      arr.push_back({{"src", m.states.name(r.src)},
                     {"action", m.actions.name(r.action)},
                     {"delta", r.delta},
                     {"dst", m.states.name(r.dst)}});
    return arr;
  };
  j["transitions"] = rules_json(m.rules);
  if (!m.isNet) j["zeroTransitions"] = rules_json(m.zeroRules);
  return j;
}

Json vass_json(const Vass& m) {
  Json j;
  j["kind"] = "vass";
  j["dimension"] = m.dimension;
  j["states"] = names_json(m.states);
  j["actions"] = names_json(m.actions);
  Json ts = Json::array();
  for (const auto& t : m.transitions)
    ts.push_back({{"src", m.states.name(t.src)},
                  {"action", m.actions.name(t.action)},
                  {"dst", m.states.name(t.dst)},
                  {"effect", t.effect}});
  j["transitions"] = ts;
  return j;
}

Json owner_names(const auto& g, Owner o) {
  Json arr = Json::array();
  for (int i = 0; i < g.states.declared_count(); ++i)
    if (g.owner[i] == o) arr.push_back(g.states.name(i));
  return arr;
}

Json peg_json(const Peg& g) {
  Json j;
  j["kind"] = "pushdown-energy-game";
  j["dimension"] = g.dimension;
  j["statesP0"] = owner_names(g, Owner::P0);
  j["statesP1"] = owner_names(g, Owner::P1);
  j["stackAlphabet"] = names_json(g.stackSymbols);
  j["maxPush"] = g.maxPush;
  Json ts = Json::array();
  for (const auto& t : g.transitions) {
    Json push = Json::array();
    for (int s : t.push) push.push_back(g.stackSymbols.name(s));
    ts.push_back({{"src", g.states.name(t.src)},
                  {"top", g.stackSymbols.name(t.top)},
                  {"dst", g.states.name(t.dst)},
                  {"push", push},
                  {"effect", t.effect}});
  }
  j["transitions"] = ts;
  return j;
}

Json oceg_json(const Oceg& g) {
  Json j;
  j["kind"] = "one-counter-energy-game";
  j["dimension"] = g.dimension;
  j["statesP0"] = owner_names(g, Owner::P0);
  j["statesP1"] = owner_names(g, Owner::P1);
  auto rules_json = [&](const std::vector<OcegRule>& rules) {
    Json arr = Json::array();
    for (const auto& r : rules)
      arr.push_back({{"src", g.states.name(r.src)},
                     {"counterDelta", r.counterDelta},
                     {"dst", g.states.name(r.dst)},
                     {"effect", r.effect}});
    return arr;
  };
  j["transitions"] = rules_json(g.rules);
  j["zeroTransitions"] = rules_json(g.zeroRules);
  return j;
}

Json mcm_json(const Mcm& m) {
  Json j;
  j["kind"] = "mcm";
  j["states"] = names_json(m.states);
  j["init"] = m.states.name(m.initState);
  j["halt"] = m.states.name(m.haltState);
  Json rs = Json::array();
  for (int q = 0; q < m.states.declared_count(); ++q) {
    if (q >= static_cast<int>(m.rule.size()) || !m.rule[q]) continue;
    const McmRule& r = *m.rule[q];
    if (r.kind == McmRule::Inc)
      rs.push_back({{"state", m.states.name(q)},
                    {"op", "inc"},
                    {"counter", r.counter},
                    {"dst", m.states.name(r.dst)}});
    else
      rs.push_back({{"state", m.states.name(q)},
                    {"op", "test"},
                    {"counter", r.counter},
                    {"ifZero", m.states.name(r.dst)},
                    {"ifPositive", m.states.name(r.dstPositive)}});
  }
  j["rules"] = rs;
  return j;
}

}  // namespace

const char* InstanceFile::kind() const {
  struct Visitor {
    const char* operator()(const Pda&) { return "pda"; }
    const char* operator()(const Oca& m) { return m.isNet ? "ocn" : "oca"; }
    const char* operator()(const Vass&) { return "vass"; }
    const char* operator()(const Peg&) { return "pushdown-energy-game"; }
    const char* operator()(const Oceg&) { return "one-counter-energy-game"; }
    const char* operator()(const Mcm&) { return "mcm"; }
  };
  return std::visit(Visitor{}, machine);
}

InstanceFile parse_instance(const std::string& bytes) {
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded()) fail("not valid JSON", "/");
  if (!j.is_object()) fail("expected an object", "/");
  std::string kind = as_string(field(j, "kind", ""), "/kind");
  InstanceFile f;
  f.metadata = parse_metadata(j, "");
  if (kind == "pda")
    f.machine = parse_pda(j);
  else if (kind == "oca")
    f.machine = parse_oca(j, false);
  else if (kind == "ocn")
    f.machine = parse_oca(j, true);
  else if (kind == "vass")
    f.machine = parse_vass(j);
  else if (kind == "pushdown-energy-game")
    f.machine = parse_peg(j);
  else if (kind == "one-counter-energy-game")
    f.machine = parse_oceg(j);
  else if (kind == "mcm")
    f.machine = parse_mcm(j);
  else
    fail("unknown kind '" + kind + "'", "/kind");
  return f;
}

std::string serialize(const InstanceFile& f) {
  return serialize_machine(f.machine, f.metadata);
}

std::string serialize_machine(const Machine& m, const Metadata& md) {
  struct Visitor {
    Json operator()(const Pda& x) { return pda_json(x); }
    Json operator()(const Oca& x) { return oca_json(x); }
    Json operator()(const Vass& x) { return vass_json(x); }
    Json operator()(const Peg& x) { return peg_json(x); }
    Json operator()(const Oceg& x) { return oceg_json(x); }
    Json operator()(const Mcm& x) { return mcm_json(x); }
  };
  Json j = std::visit(Visitor{}, m);
  if (!md.empty()) j["metadata"] = metadata_json(md);
  return j.dump(2) + "\n";
}

// --- UPC and parameters -----------------------------------------------------

std::string serialize(const Upc& u) {
  Json j;
  j["kind"] = "upc";
  j["horizontal"] = {{"threshold", u.thresholdM}, {"period", u.periodM}};
  j["vertical"] = {{"threshold", u.thresholdMPrime}, {"period", u.periodMPrime}};
  j["leftStates"] = u.leftNames;
  j["rightStates"] = u.rightNames;
  Json planes = Json::array();
  for (int p = 0; p < u.statesLeft; ++p)
    for (int q = 0; q < u.statesRight; ++q) {
      if (!u.is_declared(p, q)) continue;
      const auto& win = u.windows[p * u.statesRight + q];
      Json rows = Json::array();
      for (int m = 0; m <= u.thresholdM; ++m) {
        Json runs = Json::array();
        int mp = 0;
        while (mp <= u.thresholdMPrime) {
          uint8_t color = win[static_cast<size_t>(m) * (u.thresholdMPrime + 1) + mp];
          int len = 0;
          while (mp + len <= u.thresholdMPrime &&
                 win[static_cast<size_t>(m) * (u.thresholdMPrime + 1) + mp + len] ==
                     color)
            ++len;
          runs.push_back({color ? "W" : "B", len});
          mp += len;
        }
        rows.push_back(runs);
      }
      planes.push_back(
          {{"left", u.leftNames[p]}, {"right", u.rightNames[q]}, {"rows", rows}});
    }
  j["planes"] = planes;
  return j.dump(2) + "\n";
}

Upc parse_upc(const std::string& bytes, const Oca& a, const Oca& aPrime) {
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded()) fail("not valid JSON", "/");
  check_fields(j, "", {"kind", "horizontal", "vertical", "leftStates",
                       "rightStates", "planes"});
  if (as_string(field(j, "kind", ""), "/kind") != "upc")
    fail("expected kind 'upc'", "/kind");
  Upc u;
  const Json& h = field(j, "horizontal", "");
  check_fields(h, "/horizontal", {"threshold", "period"});
  u.thresholdM = static_cast<int>(as_int(field(h, "threshold", "/horizontal"),
                                         "/horizontal/threshold"));
  u.periodM =
      static_cast<int>(as_int(field(h, "period", "/horizontal"), "/horizontal/period"));
  const Json& v = field(j, "vertical", "");
  check_fields(v, "/vertical", {"threshold", "period"});
  u.thresholdMPrime = static_cast<int>(
      as_int(field(v, "threshold", "/vertical"), "/vertical/threshold"));
  u.periodMPrime =
      static_cast<int>(as_int(field(v, "period", "/vertical"), "/vertical/period"));
  u.statesLeft = a.states.declared_count();
  u.statesRight = aPrime.states.declared_count();
  u.leftNames.assign(a.states.names().begin(),
                     a.states.names().begin() + u.statesLeft);
  u.rightNames.assign(aPrime.states.names().begin(),
                      aPrime.states.names().begin() + u.statesRight);
  u.declared.assign(static_cast<size_t>(u.statesLeft) * u.statesRight, 0);
  u.windows.resize(u.declared.size());
  const Json& planes = as_array(field(j, "planes", ""), "/planes");
  for (size_t i = 0; i < planes.size(); ++i) {
    std::string p = "/planes/" + std::to_string(i);
    check_fields(planes[i], p, {"left", "right", "rows"});
    auto lid = a.states.find(as_string(field(planes[i], "left", p), p + "/left"));
    auto rid =
        aPrime.states.find(as_string(field(planes[i], "right", p), p + "/right"));
    if (!lid || *lid >= u.statesLeft) fail("unknown left state", p + "/left");
    if (!rid || *rid >= u.statesRight) fail("unknown right state", p + "/right");
    auto& win = u.windows[*lid * u.statesRight + *rid];
    win.assign(static_cast<size_t>(u.thresholdM + 1) * (u.thresholdMPrime + 1), 0);
    const Json& rows = as_array(field(planes[i], "rows", p), p + "/rows");
    if (static_cast<int>(rows.size()) != u.thresholdM + 1)
      fail("wrong row count", p + "/rows");
    for (int m = 0; m <= u.thresholdM; ++m) {
      std::string rp = p + "/rows/" + std::to_string(m);
      const Json& runs = as_array(rows[m], rp);
      int mp = 0;
      for (size_t k = 0; k < runs.size(); ++k) {
        const Json& run = as_array(runs[k], rp + "/" + std::to_string(k));
        if (run.size() != 2) fail("run must be [color,count]", rp);
        std::string color = as_string(run[0], rp);
        long long len = as_int(run[1], rp);
        if (color != "W" && color != "B") fail("color must be W or B", rp);
        if (len < 1 || mp + len > u.thresholdMPrime + 1) fail("bad run length", rp);
        for (long long x = 0; x < len; ++x)
          win[static_cast<size_t>(m) * (u.thresholdMPrime + 1) + mp + x] =
              color == "W";
        mp += static_cast<int>(len);
      }
      if (mp != u.thresholdMPrime + 1) fail("row does not cover the window", rp);
    }
    u.declared[*lid * u.statesRight + *rid] = 1;
  }
  return u;
}

std::string serialize_params(const OcaToOcnParams& prm,
                             const std::vector<std::string>& leftNames,
                             const std::vector<std::string>& rightNames) {
  Json j;
  j["kind"] = "oca-to-ocn-params";
  j["l"] = prm.l;
  j["K"] = prm.K;
  Json ws = Json::array(), bl = Json::array();
  for (int p = 0; p < prm.statesLeft; ++p)
    for (int q = 0; q < prm.statesRight; ++q) {
      long long w = prm.w(p, q);
      Json entry = {{"left", leftNames[p]}, {"right", rightNames[q]}};
      if (w == kInfiniteW)
        entry["w"] = "inf";
      else
        entry["w"] = w;
      ws.push_back(entry);
      for (int r = 0; r < prm.K; ++r)
        bl.push_back({{"left", leftNames[p]},
                      {"right", rightNames[q]},
                      {"residue", r},
                      {"black", prm.black(p, q, r)}});
    }
  j["wAtL"] = ws;
  j["blackLines"] = bl;
  return j.dump(2) + "\n";
}

OcaToOcnParams parse_params(const std::string& bytes, const Oca& a,
                            const Oca& aPrime) {
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded()) fail("not valid JSON", "/");
  check_fields(j, "", {"kind", "l", "K", "wAtL", "blackLines"});
  if (as_string(field(j, "kind", ""), "/kind") != "oca-to-ocn-params")
    fail("expected kind 'oca-to-ocn-params'", "/kind");
  OcaToOcnParams prm;
  prm.l = static_cast<int>(as_int(field(j, "l", ""), "/l"));
  prm.K = static_cast<int>(as_int(field(j, "K", ""), "/K"));
  prm.statesLeft = a.states.declared_count();
  prm.statesRight = aPrime.states.declared_count();
  prm.wAtL.assign(static_cast<size_t>(prm.statesLeft) * prm.statesRight,
                  kInfiniteW);
  prm.blackLine.assign(prm.wAtL.size() * std::max(1, prm.K), 0);
  std::vector<char> wSeen(prm.wAtL.size(), 0);
  const Json& ws = as_array(field(j, "wAtL", ""), "/wAtL");
  for (size_t i = 0; i < ws.size(); ++i) {
    std::string p = "/wAtL/" + std::to_string(i);
    check_fields(ws[i], p, {"left", "right", "w"});
    auto lid = a.states.find(as_string(field(ws[i], "left", p), p + "/left"));
    auto rid =
        aPrime.states.find(as_string(field(ws[i], "right", p), p + "/right"));
    if (!lid || *lid >= prm.statesLeft) fail("unknown left state", p + "/left");
    if (!rid || *rid >= prm.statesRight) fail("unknown right state", p + "/right");
    const Json& wv = field(ws[i], "w", p);
    size_t idx = static_cast<size_t>(*lid) * prm.statesRight + *rid;
    if (wv.is_string()) {
      if (wv.get<std::string>() != "inf") fail("w must be an integer or 'inf'", p);
      prm.wAtL[idx] = kInfiniteW;
    } else {
      prm.wAtL[idx] = as_int(wv, p + "/w");
    }
    wSeen[idx] = 1;
  }
  for (size_t i = 0; i < wSeen.size(); ++i)
    if (!wSeen[i]) fail("missing wAtL entry", "/wAtL");
  const Json& bl = as_array(field(j, "blackLines", ""), "/blackLines");
  for (size_t i = 0; i < bl.size(); ++i) {
    std::string p = "/blackLines/" + std::to_string(i);
    check_fields(bl[i], p, {"left", "right", "residue", "black"});
    auto lid = a.states.find(as_string(field(bl[i], "left", p), p + "/left"));
    auto rid =
        aPrime.states.find(as_string(field(bl[i], "right", p), p + "/right"));
    long long res = as_int(field(bl[i], "residue", p), p + "/residue");
    if (!lid || *lid >= prm.statesLeft) fail("unknown left state", p + "/left");
    if (!rid || *rid >= prm.statesRight) fail("unknown right state", p + "/right");
    if (res < 0 || res >= prm.K) fail("residue out of range", p + "/residue");
    const Json& b = field(bl[i], "black", p);
    if (!b.is_boolean()) fail("expected a boolean", p + "/black");
    prm.blackLine[(static_cast<size_t>(*lid) * prm.statesRight + *rid) * prm.K +
                  res] = b.get<bool>();
  }
  return prm;
}

// --- verdicts, grids, configurations ----------------------------------------

Json verdict_to_json(const Verdict& v) {
  Json j;
  j["verdict"] = to_string(v.winner);
  j["bounds"] = {{"counterCap", v.boundsUsed.counterCap},
                 {"energyCap", v.boundsUsed.energyCap},
                 {"roundCap", v.boundsUsed.roundCap}};
  j["positionsExplored"] = v.positionsExplored;
  if (!v.strategy.empty()) {
    Json s = Json::array();
    for (const auto& e : v.strategy)
      s.push_back({{"position", e.position},
                   {"transition", e.transition},
                   {"successor", e.successor}});
    j["strategy"] = s;
  }
  return j;
}

Json grid_to_json(const ColorGrid& g) {
  Json j;
  j["kind"] = "color-grid";
  j["mMax"] = g.mMax;
  j["mPrimeMax"] = g.mPrimeMax;
  j["bounds"] = {{"counterCap", g.boundsUsed.counterCap},
                 {"energyCap", g.boundsUsed.energyCap},
                 {"roundCap", g.boundsUsed.roundCap}};
  Json planes = Json::array();
  for (int p = 0; p < g.statesLeft; ++p)
    for (int q = 0; q < g.statesRight; ++q) {
      Json rows = Json::array();
      for (int m = 0; m <= g.mMax; ++m) {
        std::string row;
        for (int mp = 0; mp <= g.mPrimeMax; ++mp)
          row += cell_char(g.at(p, q, m, mp));
        rows.push_back(row);
      }
      planes.push_back(
          {{"left", g.leftNames[p]}, {"right", g.rightNames[q]}, {"rows", rows}});
    }
  j["planes"] = planes;
  return j;
}

namespace {

int find_state(const NameTable& t, const Json& j, const std::string& path) {
  std::string n = as_string(j, path);
  auto id = t.find(n);
  if (!id || !t.is_declared(*id)) fail("unknown state '" + n + "'", path);
  return *id;
}

std::vector<int> parse_stack(const NameTable& syms, const Json& j,
                             const std::string& path) {
  as_array(j, path);
  if (j.empty()) fail("stack must be nonempty", path);
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) {
    std::string n = as_string(j[i], path + "/" + std::to_string(i));
    auto id = syms.find(n);
    if (!id || !syms.is_declared(*id)) fail("unknown symbol '" + n + "'", path);
    out.push_back(*id);
  }
  return out;
}

}  // namespace

PegConf parse_peg_conf(const Peg& g, const Json& j, const std::string& path) {
  check_fields(j, path, {"state", "stack", "energy"});
  PegConf c;
  c.state = find_state(g.states, field(j, "state", path), path + "/state");
  c.stack = parse_stack(g.stackSymbols, field(j, "stack", path), path + "/stack");
  c.energy = int_vector(field(j, "energy", path), path + "/energy");
  if (static_cast<int>(c.energy.size()) != g.dimension)
    fail("energy dimension mismatch", path + "/energy");
  return c;
}

OcegConf parse_oceg_conf(const Oceg& g, const Json& j, const std::string& path) {
  check_fields(j, path, {"state", "counter", "energy"});
  OcegConf c;
  c.state = find_state(g.states, field(j, "state", path), path + "/state");
  c.counter = static_cast<int>(as_int(field(j, "counter", path), path + "/counter"));
  if (c.counter < 0) fail("counter must be non-negative", path + "/counter");
  c.energy = int_vector(field(j, "energy", path), path + "/energy");
  if (static_cast<int>(c.energy.size()) != g.dimension)
    fail("energy dimension mismatch", path + "/energy");
  return c;
}

LtsConf parse_lts_conf(const Machine& m, const Json& j, const std::string& path) {
  if (std::holds_alternative<Pda>(m)) {
    const Pda& pda = std::get<Pda>(m);
    check_fields(j, path, {"state", "stack"});
    PdaConf c;
    c.state = find_state(pda.states, field(j, "state", path), path + "/state");
    c.stack =
        parse_stack(pda.stackSymbols, field(j, "stack", path), path + "/stack");
    return c;
  }
  if (std::holds_alternative<Oca>(m)) {
    const Oca& oca = std::get<Oca>(m);
    check_fields(j, path, {"state", "counter"});
    OcaConf c;
    c.state = find_state(oca.states, field(j, "state", path), path + "/state");
    c.counter =
        static_cast<int>(as_int(field(j, "counter", path), path + "/counter"));
    if (c.counter < 0) fail("counter must be non-negative", path + "/counter");
    return c;
  }
  if (std::holds_alternative<Vass>(m)) {
    const Vass& v = std::get<Vass>(m);
    check_fields(j, path, {"state", "counters"});
    VassConf c;
    c.state = find_state(v.states, field(j, "state", path), path + "/state");
    c.counters = int_vector(field(j, "counters", path), path + "/counters");
    if (static_cast<int>(c.counters.size()) != v.dimension)
      fail("counter dimension mismatch", path + "/counters");
    for (int x : c.counters)
      if (x < 0) fail("counters must be non-negative", path + "/counters");
    return c;
  }
  throw KindMismatch("machine kind has no LTS configuration");
}

std::string dump_json(const Json& j, bool pretty) {
  return pretty ? j.dump(2) + "\n" : j.dump() + "\n";
}

}  // namespace egsim
