#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "egsim/batch.hpp"
#include "egsim/coloring.hpp"
#include "egsim/gadgets.hpp"
#include "egsim/io.hpp"
#include "egsim/models.hpp"
#include "egsim/reductions.hpp"
#include "egsim/semilinear.hpp"
#include "egsim/solvers.hpp"

namespace {

using namespace egsim;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << bytes;
}

InstanceFile load(const std::string& path) { return parse_instance(read_file(path)); }

Json parse_inline_json(const std::string& text, const char* what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(std::string("invalid JSON for ") + what);
  return j;
}

struct OutputFlags {
  bool compact = false;
  void attach(CLI::App* cmd) {
    cmd->add_flag("--json", compact, "compact single-line JSON output");
    bool pretty = false;
    cmd->add_flag("--pretty", pretty, "pretty-printed JSON output (default)");
  }
  void emit(const Json& j) const { std::cout << dump_json(j, !compact); }
};

Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back({{"code", v.code}, {"detail", v.detail}});
  return arr;
}

std::vector<Violation> validate_machine(const Machine& m) {
  return std::visit([](const auto& x) { return validate(x); }, m);
}

const Oca& as_oca(const InstanceFile& f, const char* what, bool requireNet) {
  if (!std::holds_alternative<Oca>(f.machine))
    throw KindMismatch(std::string(what) + " must be an oca/ocn document");
  const Oca& m = std::get<Oca>(f.machine);
  if (requireNet && !m.isNet)
    throw KindMismatch(std::string(what) + " must be an ocn document");
  return m;
}

LtsRef lts_ref(const Machine& m) {
  if (std::holds_alternative<Pda>(m)) return &std::get<Pda>(m);
  if (std::holds_alternative<Oca>(m)) return &std::get<Oca>(m);
  if (std::holds_alternative<Vass>(m)) return &std::get<Vass>(m);
  throw KindMismatch("expected a pda, oca, ocn, or vass document");
}

int cmd_validate(const std::string& file, const OutputFlags& out) {
  InstanceFile f = load(file);
  auto vs = validate_machine(f.machine);
  Json j;
  j["kind"] = f.kind();
  j["violations"] = violations_json(vs);
  out.emit(j);
  return vs.empty() ? 0 : 1;
}

int cmd_solve_energy(const std::string& file, const std::string& initText,
                     Bounds bounds, long long budget, const OutputFlags& out) {
  InstanceFile f = load(file);
  Json initJson = parse_inline_json(initText, "--init");
  Verdict v;
  if (std::holds_alternative<Peg>(f.machine)) {
    const Peg& g = std::get<Peg>(f.machine);
    v = solve_energy_bounded(g, parse_peg_conf(g, initJson, "/init"), bounds, budget);
  } else if (std::holds_alternative<Oceg>(f.machine)) {
    const Oceg& g = std::get<Oceg>(f.machine);
    v = solve_energy_bounded(g, parse_oceg_conf(g, initJson, "/init"), bounds,
                             budget);
  } else {
    throw KindMismatch("solve energy expects an energy game document");
  }
  out.emit(verdict_to_json(v));
  return 0;
}

int cmd_solve_sim(const std::string& leftFile, const std::string& rightFile,
                  const std::string& pairText, Bounds bounds, long long budget,
                  const OutputFlags& out) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  Json pj = parse_inline_json(pairText, "--pair");
  if (!pj.contains("left") || !pj.contains("right"))
    throw Error("--pair must have 'left' and 'right'");
  SimPair pair{parse_lts_conf(lf.machine, pj["left"], "/pair/left"),
               parse_lts_conf(rf.machine, pj["right"], "/pair/right")};
  Verdict v = solve_simulation_bounded(lts_ref(lf.machine), lts_ref(rf.machine),
                                       pair, bounds, budget);
  out.emit(verdict_to_json(v));
  return 0;
}

Json notes_json(const std::vector<std::string>& notes) {
  return Json(notes);
}

Json flagged_json(const NameTable& t, const std::vector<int>& ids) {
  Json arr = Json::array();
  for (int i : ids) arr.push_back(t.name(i));
  return arr;
}

int cmd_reduce_energy_to_sim(const std::string& file, const std::string& outDir) {
  InstanceFile f = load(file);
  Peg game;
  if (std::holds_alternative<Peg>(f.machine))
    game = std::get<Peg>(f.machine);
  else if (std::holds_alternative<Oceg>(f.machine))
    game = oceg_to_peg(std::get<Oceg>(f.machine));
  else
    throw KindMismatch("reduce energy-to-sim expects an energy game document");
  EnergyToSimOutput red = energy_to_simulation(game);
  std::filesystem::create_directories(outDir);
  write_file(outDir + "/left.json", serialize_machine(red.left));
  write_file(outDir + "/right.json", serialize_machine(red.right));
  Json map;
  map["kind"] = "reduction-map";
  map["reduction"] = "energy-to-sim";
  map["rule"] = "(q,stack,E) -> ((q,stack),(q,E))";
  map["oneCounterShaped"] = is_one_counter_shaped(red.left);
  map["flaggedLeft"] = flagged_json(red.left.states, red.flaggedLeftStates);
  map["flaggedRight"] = flagged_json(red.right.states, red.flaggedRightStates);
  map["provenanceLeft"] = notes_json(red.leftNotes);
  map["provenanceRight"] = notes_json(red.rightNotes);
  write_file(outDir + "/map.json", map.dump(2) + "\n");
  std::cout << "wrote " << outDir << "/left.json, right.json, map.json\n";
  return 0;
}

int cmd_reduce_sim_to_energy(const std::string& leftFile,
                             const std::string& rightFile,
                             const std::string& outDir) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  Pda pda;
  if (std::holds_alternative<Pda>(lf.machine))
    pda = std::get<Pda>(lf.machine);
  else if (std::holds_alternative<Oca>(lf.machine))
    pda = oca_to_pda(std::get<Oca>(lf.machine));
  else
    throw KindMismatch("left input must be a pda, oca, or ocn document");
  Vass vass;
  if (std::holds_alternative<Vass>(rf.machine))
    vass = std::get<Vass>(rf.machine);
  else if (std::holds_alternative<Oca>(rf.machine))
    vass = ocn_to_vass1(std::get<Oca>(rf.machine));
  else
    throw KindMismatch("right input must be a vass or ocn document");
  SimToEnergyOutput red = simulation_to_energy(pda, vass);
  std::filesystem::create_directories(outDir);
  write_file(outDir + "/game.json", serialize_machine(red.game));
  Json map;
  map["kind"] = "reduction-map";
  map["reduction"] = "sim-to-energy";
  map["rule"] = "((q0,stack),(q1,E)) -> (pair(q0,q1),stack,E)";
  map["oneCounterShaped"] = is_one_counter_shaped(red.game);
  map["flagged"] = flagged_json(red.game.states, red.flaggedStates);
  map["provenance"] = notes_json(red.notes);
  write_file(outDir + "/map.json", map.dump(2) + "\n");
  std::cout << "wrote " << outDir << "/game.json, map.json\n";
  return 0;
}

int cmd_reduce_oca_to_ocn(const std::string& leftFile, const std::string& rightFile,
                          const std::string& paramsFile, const std::string& outDir) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  const Oca& a = as_oca(lf, "left input", false);
  const Oca& b = as_oca(rf, "right input", true);
  OcaToOcnParams params = parse_params(read_file(paramsFile), a, b);
  OcaOcnToOcnOcnOutput red = oca_ocn_to_ocn_ocn(a, b, params);
  std::filesystem::create_directories(outDir);
  write_file(outDir + "/left.json", serialize_machine(red.left));
  write_file(outDir + "/right.json", serialize_machine(red.right));
  Json map;
  map["kind"] = "reduction-map";
  map["reduction"] = "oca-to-ocn";
  map["l"] = red.l;
  map["K"] = red.K;
  map["rule"] =
      "p(m+l) vs p'm' -> (pair(p,p',m mod K), m) vs (pair(p,p',m mod K), m')";
  map["provenanceLeft"] = notes_json(red.leftNotes);
  map["provenanceRight"] = notes_json(red.rightNotes);
  write_file(outDir + "/map.json", map.dump(2) + "\n");
  std::cout << "wrote " << outDir << "/left.json, right.json, map.json\n";
  return 0;
}

int cmd_coloring(const std::string& leftFile, const std::string& rightFile,
                 int mMax, int mpMax, Bounds bounds, const std::string& render,
                 const std::string& renderOut, const std::string& emitParams,
                 const std::string& gridOut, const OutputFlags& out) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  const Oca& a = as_oca(lf, "left input", false);
  const Oca& b = as_oca(rf, "right input", true);
  if (bounds.counterCap < std::max(mMax, mpMax) + 2)
    bounds.counterCap = std::max(mMax, mpMax) + 2;
  ColorGrid grid = compute_coloring(a, b, mMax, mpMax, bounds);
  if (!render.empty()) {
    std::string bytes = render_grid(
        grid, render == "pgm" ? RenderFormat::Pgm : RenderFormat::Ascii);
    if (renderOut.empty())
      std::cout << bytes;
    else
      write_file(renderOut, bytes);
  }
  if (!emitParams.empty()) {
    auto params = detect_periodic_parameters(grid);
    if (params) {
      write_file(emitParams,
                 serialize_params(*params, grid.leftNames, grid.rightNames));
      std::cerr << "detected (l,K) = (" << params->l << "," << params->K << ")\n";
    } else {
      std::cerr << "no stable pattern detected\n";
    }
  }
  if (!gridOut.empty())
    write_file(gridOut, grid_to_json(grid).dump(2) + "\n");
  else if (render.empty())
    out.emit(grid_to_json(grid));
  return 0;
}

int cmd_check_candidate(const std::string& leftFile, const std::string& rightFile,
                        const std::string& upcFile,
                        const std::vector<std::string>& mustContain,
                        const OutputFlags& out) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  const Oca& a = as_oca(lf, "left input", false);
  const Oca& b = as_oca(rf, "right input", true);
  Upc upc = parse_upc(read_file(upcFile), a, b);
  std::vector<MustPoint> must;
  for (const auto& text : mustContain) {
    Json j = parse_inline_json(text, "--must-contain");
    if (!j.is_array() || j.size() != 4)
      throw Error("--must-contain expects [\"p\",m,\"p'\",m']");
    auto lid = a.states.find(j[0].get<std::string>());
    auto rid = b.states.find(j[2].get<std::string>());
    if (!lid || !rid) throw Error("--must-contain names an unknown state");
    must.push_back({*lid, j[1].get<long long>(), *rid, j[3].get<long long>()});
  }
  CheckResult res = check_simulation_candidate(a, b, upc, must);
  Json j;
  j["accepted"] = res.accepted;
  if (!res.accepted) {
    j["reason"] = res.reason;
    j["witness"] = {{"left", a.states.name(res.p)},
                    {"m", res.m},
                    {"right", b.states.name(res.q)},
                    {"mPrime", res.mPrime}};
    if (res.spoilerTransition >= 0) j["spoilerTransition"] = res.spoilerTransition;
  }
  out.emit(j);
  return res.accepted ? 0 : 1;
}

int cmd_decide(const std::string& leftFile, const std::string& rightFile,
               const std::string& pairText, DecideBudget budget,
               const OutputFlags& out) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  const Oca& a = as_oca(lf, "left input", false);
  const Oca& b = as_oca(rf, "right input", true);
  Json pj = parse_inline_json(pairText, "--pair");
  if (!pj.is_array() || pj.size() != 4)
    throw Error("--pair expects [\"p\",m,\"p'\",m']");
  auto lid = a.states.find(pj[0].get<std::string>());
  auto rid = b.states.find(pj[2].get<std::string>());
  if (!lid || !rid) throw Error("--pair names an unknown state");
  DecideResult res =
      enumerate_and_decide(a, b, OcaConf{*lid, pj[1].get<int>()},
                           OcaConf{*rid, pj[3].get<int>()}, budget);
  Json j;
  j["verdict"] = to_string(res.winner);
  j["candidatesTried"] = res.candidatesTried;
  if (!res.note.empty()) j["note"] = res.note;
  if (res.certificate) j["certificate"] = Json::parse(serialize(*res.certificate));
  out.emit(j);
  return 0;
}

int cmd_gen_gadget(const std::string& kind, const std::string& mcmFile,
                   const std::string& outPath) {
  InstanceFile f = load(mcmFile);
  if (!std::holds_alternative<Mcm>(f.machine))
    throw KindMismatch("gen-gadget expects an mcm document");
  const Mcm& m = std::get<Mcm>(f.machine);
  if (kind == "pushdown-energy") {
    PushdownGadget g = mcm_to_pushdown_energy(m);
    write_file(outPath, serialize_machine(g.game));
    std::cout << "wrote " << outPath << " (initial: "
              << format_conf(g.game, g.initial) << ", halts iff P0 wins)\n";
  } else {
    std::filesystem::create_directories(outPath);
    OcnVassGadget g = mcm_to_ocn_vs_vass(m);
    write_file(outPath + "/left.json", serialize_machine(g.ocn));
    write_file(outPath + "/right.json", serialize_machine(g.vass));
    std::cout << "wrote " << outPath << "/left.json, right.json (pair: "
              << format_conf(g.ocn, g.leftInit) << " vs "
              << format_conf(g.vass, g.rightInit)
              << ", halts iff non-simulation)\n";
  }
  return 0;
}

int cmd_batch(const BatchSpec& spec, const std::string& outPath,
              const OutputFlags& out) {
  BatchReport rep = run_batch(spec);
  std::string bytes = rep.serialize();
  if (!outPath.empty()) write_file(outPath, bytes);
  Json summary = rep.to_json()["summary"];
  summary["definiteRate"] = rep.definite_rate();
  out.emit(summary);
  return rep.passed() ? 0 : 1;
}

int cmd_render(const std::string& leftFile, const std::string& rightFile, int mMax,
               int mpMax, Bounds bounds, const std::string& format,
               const std::string& outPath) {
  InstanceFile lf = load(leftFile), rf = load(rightFile);
  const Oca& a = as_oca(lf, "left input", false);
  const Oca& b = as_oca(rf, "right input", true);
  if (bounds.counterCap < std::max(mMax, mpMax) + 2)
    bounds.counterCap = std::max(mMax, mpMax) + 2;
  ColorGrid grid = compute_coloring(a, b, mMax, mpMax, bounds);
  std::string bytes =
      render_grid(grid, format == "pgm" ? RenderFormat::Pgm : RenderFormat::Ascii);
  if (outPath.empty())
    std::cout << bytes;
  else
    write_file(outPath, bytes);
  return 0;
}

void add_bounds_options(CLI::App* cmd, Bounds& b) {
  cmd->add_option("--counter-cap", b.counterCap, "counter / stack height cap");
  cmd->add_option("--energy-cap", b.energyCap, "per-coordinate energy cap");
  cmd->add_option("--round-cap", b.roundCap, "simulation approximant depth");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"egsim: a workbench for infinite-state energy and simulation games"};
  app.require_subcommand(1);

  std::string fileA, fileB, fileC, initText, pairText, outDir = "out";
  std::string renderFmt, renderOut, emitParams, gridOut, outPath;
  std::vector<std::string> mustContain;
  Bounds bounds{12, 12, 40};
  long long budget = 0;
  int mMax = 8, mpMax = 8;
  OutputFlags flags;

  auto* vcmd = app.add_subcommand("validate", "check a machine document");
  vcmd->add_option("file", fileA)->required();
  flags.attach(vcmd);

  auto* solve = app.add_subcommand("solve", "solve a game");
  auto* se = solve->add_subcommand("energy", "bounded energy-game solve");
  se->add_option("game", fileA)->required();
  se->add_option("--init", initText, "initial position JSON")->required();
  add_bounds_options(se, bounds);
  se->add_option("--budget", budget, "position budget");
  flags.attach(se);
  auto* ss = solve->add_subcommand("sim", "bounded simulation-game solve");
  ss->add_option("left", fileA)->required();
  ss->add_option("right", fileB)->required();
  ss->add_option("--pair", pairText, "initial pair JSON")->required();
  add_bounds_options(ss, bounds);
  ss->add_option("--budget", budget, "position budget");
  flags.attach(ss);

  auto* reduce = app.add_subcommand("reduce", "run a construction");
  auto* r1 = reduce->add_subcommand("energy-to-sim", "energy game -> (pda, vass)");
  r1->add_option("game", fileA)->required();
  r1->add_option("-o,--out", outDir, "output directory");
  auto* r2 = reduce->add_subcommand("sim-to-energy", "(pda, vass) -> energy game");
  r2->add_option("left", fileA)->required();
  r2->add_option("right", fileB)->required();
  r2->add_option("-o,--out", outDir, "output directory");
  auto* r3 = reduce->add_subcommand("oca-to-ocn", "(oca, ocn) -> (ocn, ocn)");
  r3->add_option("left", fileA)->required();
  r3->add_option("right", fileB)->required();
  r3->add_option("--params", fileC, "parameters JSON file")->required();
  r3->add_option("-o,--out", outDir, "output directory");

  auto* col = app.add_subcommand("coloring", "compute a simulation coloring grid");
  col->add_option("left", fileA)->required();
  col->add_option("right", fileB)->required();
  col->add_option("--mmax", mMax, "Spoiler counter bound");
  col->add_option("--mpmax", mpMax, "Duplicator counter bound");
  add_bounds_options(col, bounds);
  col->add_option("--render", renderFmt, "ascii or pgm")
      ->check(CLI::IsMember({"ascii", "pgm"}));
  col->add_option("--render-out", renderOut, "render output file");
  col->add_option("--emit-params", emitParams, "write detected (l,K) parameters");
  col->add_option("-o,--out", gridOut, "grid JSON output file");
  flags.attach(col);

  auto* chk = app.add_subcommand("check-candidate", "closure-check a UPC");
  chk->add_option("left", fileA)->required();
  chk->add_option("right", fileB)->required();
  chk->add_option("upc", fileC)->required();
  chk->add_option("--must-contain", mustContain,
                  "required White point [\"p\",m,\"p'\",m']");
  flags.attach(chk);

  DecideBudget dbudget;
  auto* dec = app.add_subcommand("decide", "two semi-procedures, interleaved");
  dec->add_option("left", fileA)->required();
  dec->add_option("right", fileB)->required();
  dec->add_option("--pair", pairText, "pair [\"p\",m,\"p'\",m']")->required();
  dec->add_option("--max-window", dbudget.maxWindow);
  dec->add_option("--max-period", dbudget.maxPeriod);
  dec->add_option("--counter-cap", dbudget.solverBounds.counterCap);
  dec->add_option("--round-cap", dbudget.solverBounds.roundCap);
  dec->add_option("--wall-clock", dbudget.wallClockSeconds, "seconds");
  flags.attach(dec);

  auto* gg = app.add_subcommand("gen-gadget", "compile a 2-counter machine");
  auto* g1 = gg->add_subcommand("pushdown-energy", "1-dim pushdown energy gadget");
  g1->add_option("mcm", fileA)->required();
  g1->add_option("-o,--out", outPath, "output file")->required();
  auto* g2 = gg->add_subcommand("ocn-vass", "OCN vs 2-dim VASS gadget");
  g2->add_option("mcm", fileA)->required();
  g2->add_option("-o,--out", outPath, "output directory")->required();

  BatchSpec bspec;
  auto* bat = app.add_subcommand("batch", "reduction equivalence campaign");
  bat->add_option("--operation", bspec.operation,
                  "energy-to-sim | sim-to-energy | round-trip | refine")
      ->required();
  bat->add_option("--seed", bspec.seed);
  bat->add_option("--count", bspec.instances);
  bat->add_option("--counter-cap", bspec.bounds.counterCap);
  bat->add_option("--energy-cap", bspec.bounds.energyCap);
  bat->add_option("--round-cap", bspec.bounds.roundCap);
  bat->add_option("--max-init-counter", bspec.maxInitCounter);
  bat->add_option("--max-init-energy", bspec.maxInitEnergy);
  bat->add_option("--max-states", bspec.knobs.maxStatesPerSide);
  bat->add_option("--max-out", bspec.knobs.maxOutPerState);
  bat->add_option("--zero-rule-pct", bspec.knobs.zeroRulePct);
  bat->add_option("-o,--out", outPath, "report JSON output file");
  flags.attach(bat);

  auto* ren = app.add_subcommand("render", "render a coloring grid");
  ren->add_option("left", fileA)->required();
  ren->add_option("right", fileB)->required();
  ren->add_option("--mmax", mMax);
  ren->add_option("--mpmax", mpMax);
  add_bounds_options(ren, bounds);
  ren->add_option("--format", renderFmt, "ascii or pgm")
      ->check(CLI::IsMember({"ascii", "pgm"}))
      ->default_val("ascii");
  ren->add_option("-o,--out", outPath, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*vcmd) return cmd_validate(fileA, flags);
    if (*se) return cmd_solve_energy(fileA, initText, bounds, budget, flags);
    if (*ss) return cmd_solve_sim(fileA, fileB, pairText, bounds, budget, flags);
    if (*r1) return cmd_reduce_energy_to_sim(fileA, outDir);
    if (*r2) return cmd_reduce_sim_to_energy(fileA, fileB, outDir);
    if (*r3) return cmd_reduce_oca_to_ocn(fileA, fileB, fileC, outDir);
    if (*col)
      return cmd_coloring(fileA, fileB, mMax, mpMax, bounds, renderFmt, renderOut,
                          emitParams, gridOut, flags);
    if (*chk) return cmd_check_candidate(fileA, fileB, fileC, mustContain, flags);
    if (*dec) return cmd_decide(fileA, fileB, pairText, dbudget, flags);
    if (*g1) return cmd_gen_gadget("pushdown-energy", fileA, outPath);
    if (*g2) return cmd_gen_gadget("ocn-vass", fileA, outPath);
    if (*bat) return cmd_batch(bspec, outPath, flags);
    if (*ren)
      return cmd_render(fileA, fileB, mMax, mpMax, bounds, renderFmt, outPath);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
