#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "egsim/coloring.hpp"
#include "egsim/models.hpp"
#include "egsim/reductions.hpp"
#include "egsim/semilinear.hpp"
#include "egsim/solvers.hpp"

namespace egsim {

using Json = nlohmann::json;

struct Metadata {
  std::optional<std::string> name;
  std::optional<long long> seed;
  std::optional<std::string> provenance;
  bool empty() const { return !name && !seed && !provenance; }
};

using Machine = std::variant<Pda, Oca, Vass, Peg, Oceg, Mcm>;

// A machine document: kind discriminator, payload, optional metadata.
// parse(serialize(x)) == x and serialization is byte-stable (sorted keys).
struct InstanceFile {
  Machine machine;
  Metadata metadata;

  const char* kind() const;
};

InstanceFile parse_instance(const std::string& bytes);
std::string serialize(const InstanceFile&);
std::string serialize_machine(const Machine&, const Metadata& = {});

// Candidate colorings and compiler parameters; names are resolved against
// the two machines.
Upc parse_upc(const std::string& bytes, const Oca& a, const Oca& aPrime);
std::string serialize(const Upc&);
OcaToOcnParams parse_params(const std::string& bytes, const Oca& a,
                            const Oca& aPrime);
std::string serialize_params(const OcaToOcnParams&,
                             const std::vector<std::string>& leftNames,
                             const std::vector<std::string>& rightNames);

Json verdict_to_json(const Verdict&);
Json grid_to_json(const ColorGrid&);

// Initial positions / pairs from CLI arguments.
PegConf parse_peg_conf(const Peg&, const Json&, const std::string& path);
OcegConf parse_oceg_conf(const Oceg&, const Json&, const std::string& path);
LtsConf parse_lts_conf(const Machine&, const Json&, const std::string& path);

std::string dump_json(const Json&, bool pretty);

}  // namespace egsim
