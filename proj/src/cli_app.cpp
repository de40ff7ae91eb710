#include "cli_app.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "matchforge/axioms.hpp"
#include "matchforge/engine.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/json_io.hpp"

namespace matchforge {

namespace {

using nlohmann::json;

struct ResultLine {
  std::string name;
  std::string scope;  // institution name or ""
  bool pass = true;
  std::string witness;
};

struct Emitter {
  std::string format = "text";
  std::string command;
  std::vector<ResultLine> lines;
  json extra = json::object();

  void add(std::string name, std::string scope, const Report& r) {
    lines.push_back({std::move(name), std::move(scope), r.pass, r.witness});
  }

  int flush(std::ostream& out, int exit_code) {
    if (format == "json") {
      json results = json::array();
      for (const ResultLine& l : lines) {
        json r{{"name", l.name}, {"pass", l.pass}};
        if (!l.scope.empty()) r["institution"] = l.scope;
        if (!l.witness.empty()) r["witness"] = l.witness;
        results.push_back(r);
      }
      json doc{{"command", command}, {"results", results}, {"exit", exit_code}};
      for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
      out << doc.dump(2) << "\n";
    } else {
      for (const ResultLine& l : lines) {
        out << (l.pass ? "[pass] " : "[fail] ") << l.name;
        if (!l.scope.empty()) out << " (institution " << l.scope << ")";
        if (!l.witness.empty()) out << ": " << l.witness;
        out << "\n";
      }
    }
    return exit_code;
  }
};

// Rule selection: a single kind for every institution, or "name=kind" pairs.
std::vector<RuleKind> parse_rule_selection(const Problem& p, const std::string& sel) {
  if (sel.find('=') == std::string::npos)
    return std::vector<RuleKind>(p.institution_count(), rule_kind_from_name(sel));
  std::vector<std::optional<RuleKind>> chosen(p.institution_count());
  std::size_t start = 0;
  while (start < sel.size()) {
    std::size_t end = sel.find(',', start);
    if (end == std::string::npos) end = sel.size();
    const std::string part = sel.substr(start, end - start);
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw InstanceError("rule selection \"" + part + "\": expected institution=kind");
    const int i = p.institution_index(part.substr(0, eq));
    chosen[i] = rule_kind_from_name(part.substr(eq + 1));
    start = end + 1;
  }
  std::vector<RuleKind> out;
  for (int i = 0; i < p.institution_count(); ++i) {
    if (!chosen[i])
      throw InstanceError("rule selection misses institution " + p.institution_name(i));
    out.push_back(*chosen[i]);
  }
  return out;
}

struct ParsedShape {
  int agents = 2;
  int institutions = 2;
};

ParsedShape parse_shape(const std::string& text) {
  const std::size_t x = text.find('x');
  if (x == std::string::npos)
    throw InstanceError("shape \"" + text + "\": expected AGENTSxINSTITUTIONS, e.g. 2x2");
  try {
    ParsedShape s;
    s.agents = std::stoi(text.substr(0, x));
    s.institutions = std::stoi(text.substr(x + 1));
    if (s.agents < 0 || s.institutions < 0) throw std::invalid_argument(text);
    return s;
  } catch (const std::exception&) {
    throw InstanceError("shape \"" + text + "\" is not of the form AGENTSxINSTITUTIONS");
  }
}

// CLI tokens for axioms use hyphens; the exact library names (with spaces)
// are accepted as well.
std::string axiom_name_from_token(const std::string& token) {
  if (token == "non-wastefulness") return "non-wastefulness";
  if (token == "no-justified-envy") return "no justified envy";
  if (token == "guaranteed-enrollment") return "guaranteed enrollment for returning students";
  if (token == "maximal-utilization") return "maximal utilization of reservations";
  if (token == "no-justified-envy-under-reserves") return "no justified envy under reserves";
  if (token == "feasibility") return "feasibility";
  if (token == "rank-maximality") return "rank maximality";
  if (token == "no-justified-envy-under-rank") return "no justified envy under rank";
  if (token == "no-justified-envy-under-rank-capped") return "no justified envy under rank (capped)";
  if (token == "matroidal-objectives") return "matroidal objectives";
  if (token == "individual-rationality") return "individual rationality";
  for (const char* exact :
       {"no justified envy", "guaranteed enrollment for returning students",
        "maximal utilization of reservations", "no justified envy under reserves",
        "rank maximality", "no justified envy under rank",
        "no justified envy under rank (capped)", "matroidal objectives",
        "individual rationality"})
    if (token == exact) return token;
  throw InstanceError("unknown axiom \"" + token + "\"");
}

std::optional<RuleKind> axiom_set_from_token(const std::string& token) {
  if (token == "responsive") return RuleKind::responsive;
  if (token == "chile") return RuleKind::guaranteed_enrollment;
  if (token == "matroid") return RuleKind::matroid;
  if (token == "greedy") return RuleKind::greedy;
  return std::nullopt;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

void write_or_print(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InstanceError("cannot write \"" + path + "\"");
  f << text;
}

struct GuardSettings {
  int max_ground = kCheckGuard;
  std::uint64_t max_profiles = kEnumerationGuard;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"matching-market engine and verification toolkit"};
  app.require_subcommand(1);

  GuardSettings guards;
  if (const char* env = std::getenv("MATCHFORGE_MAX_GROUND")) {
    try {
      guards.max_ground = std::stoi(env);
    } catch (const std::exception&) {
      err << "MATCHFORGE_MAX_GROUND is not an integer\n";
      return kExitInstance;
    }
  }
  std::string format = "text";
  app.add_option("--format", format, "report format (text|json)")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-ground", guards.max_ground,
                 "exhaustive-check guard on the ground size");
  app.add_option("--max-profiles", guards.max_profiles,
                 "guard on enumerated profile/matching spaces");

  // --- run -------------------------------------------------------------
  auto* cmd_run = app.add_subcommand("run", "run deferred acceptance on an instance");
  std::string run_instance, run_rule = "responsive", run_out;
  bool run_trace = false;
  cmd_run->add_option("--instance", run_instance, "instance file")->required();
  cmd_run->add_option("--rule", run_rule, "choice rule (kind, or inst=kind,...)");
  cmd_run->add_flag("--trace", run_trace, "emit the per-step trace");
  cmd_run->add_option("--out", run_out, "write the report to a file");

  // --- check -----------------------------------------------------------
  auto* cmd_check = app.add_subcommand("check", "check axioms of rules or matchings");
  cmd_check->require_subcommand(1);

  auto* check_choice = cmd_check->add_subcommand("choice", "choice-rule axioms");
  std::string cc_axiom, cc_rule = "responsive", cc_instance, cc_table, cc_institution;
  check_choice->add_option("--axiom", cc_axiom,
                           "comma list: path-independence, size-monotonicity, substitutability, "
                           "irc, or a punctual axiom name")
      ->required();
  check_choice->add_option("--rule", cc_rule, "rule kind to build per institution");
  check_choice->add_option("--instance", cc_instance, "instance file");
  check_choice->add_option("--table", cc_table, "tabulated rule file (instead of --instance)");
  check_choice->add_option("--institution", cc_institution, "restrict to one institution");

  auto* check_matching = cmd_check->add_subcommand("matching", "matching axioms / stability");
  std::string cm_axiom, cm_instance, cm_matching, cm_rule = "responsive";
  check_matching->add_option("--axiom", cm_axiom,
                             "comma list of matching axiom names, or \"stability\" / \"all\"")
      ->required();
  check_matching->add_option("--instance", cm_instance, "instance file")->required();
  check_matching
      ->add_option("--matching", cm_matching,
                   "comma list of contract ids, or \"da\" for the DA outcome")
      ->required();
  check_matching->add_option("--rule", cm_rule, "rule kind (for stability and \"da\")");

  auto* check_rule = cmd_check->add_subcommand("rule", "matching-rule axioms");
  std::string cr_axiom = "strategy-proofness", cr_rule = "responsive", cr_shape = "2x2",
              cr_instance;
  std::uint64_t cr_seed = 0;
  check_rule->add_option("--axiom", cr_axiom, "strategy-proofness");
  check_rule->add_option("--rule", cr_rule, "rule kind the DA rule is based on");
  check_rule->add_option("--shape", cr_shape, "shape AxI for the profile sweep");
  check_rule->add_option("--instance", cr_instance, "instance file giving the shape");
  check_rule->add_option("--seed", cr_seed, "seed for the generated shape");

  // --- verify ----------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "characterization and implication checks");
  cmd_verify->require_subcommand(1);

  auto* verify_char = cmd_verify->add_subcommand("characterization",
                                                 "axiom set pins down the rule");
  std::string vc_axioms, vc_target, vc_instance, vc_institution;
  verify_char->add_option("--axioms", vc_axioms,
                          "axiom set name (responsive|chile|matroid|greedy) or comma list")
      ->required();
  verify_char->add_option("--target", vc_target, "target rule kind")->required();
  verify_char->add_option("--instance", vc_instance, "instance file")->required();
  verify_char->add_option("--institution", vc_institution, "restrict to one institution");

  auto* verify_lemma = cmd_verify->add_subcommand("lemma-chain",
                                                  "extended axioms imply stability; DA satisfies them");
  std::string vl_rule = "responsive", vl_shape = "2x2", vl_instance;
  std::uint64_t vl_seed = 0;
  verify_lemma->add_option("--rule", vl_rule, "rule kind");
  verify_lemma->add_option("--shape", vl_shape, "shape AxI for the profile sweep");
  verify_lemma->add_option("--instance", vl_instance, "instance file giving the shape");
  verify_lemma->add_option("--seed", vl_seed, "seed for the generated shape");

  auto* verify_apph = cmd_verify->add_subcommand(
      "appendix-h", "built-in two-contract counterexample regression");

  // --- gen ---------------------------------------------------------------
  auto* cmd_gen = app.add_subcommand("gen", "generate a seeded instance");
  int gen_agents = 3, gen_institutions = 2, gen_types = 2, gen_reserve = 2;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool gen_no_returning = false;
  cmd_gen->add_option("--agents", gen_agents, "number of agents");
  cmd_gen->add_option("--institutions", gen_institutions, "number of institutions");
  cmd_gen->add_option("--types", gen_types, "reserve types per institution");
  cmd_gen->add_option("--max-reserve", gen_reserve, "max per-type reserve count");
  cmd_gen->add_option("--seed", gen_seed, "generator seed");
  cmd_gen->add_flag("--no-returning", gen_no_returning, "skip returning contracts");
  cmd_gen->add_option("--out", gen_out, "output file (default: stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help and friends
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitInstance;
  }

  Emitter emit;
  emit.format = format;

  try {
    if (*cmd_run) {
      emit.command = "run";
      const Problem p = load_instance_file(run_instance);
      const auto rules = make_rule_profile(p, parse_rule_selection(p, run_rule));
      const DATrace trace = run_da(p, rules);
      if (format == "json") {
        emit.extra["matching"] = matching_to_json(p, trace.outcome);
        if (run_trace) emit.extra["trace"] = trace_to_json(p, trace);
        std::ostringstream buf;
        emit.flush(buf, kExitOk);
        write_or_print(buf.str(), run_out, out);
        return kExitOk;
      }
      std::ostringstream buf;
      if (run_trace) {
        for (const DAStep& s : trace.steps) {
          buf << "step " << s.step << ": proposals";
          for (int id : s.proposals) buf << " " << p.contract_name(id);
          buf << "\n";
          for (int i = 0; i < p.institution_count(); ++i)
            buf << "  " << p.institution_name(i) << ": considered "
                << to_string(s.institutions[i].considered) << " accepted "
                << to_string(s.institutions[i].accepted) << " rejected "
                << to_string(s.institutions[i].rejected) << "\n";
        }
      }
      buf << "matching:";
      for (int id : trace.outcome.contracts()) buf << " " << p.contract_name(id);
      buf << "\n";
      write_or_print(buf.str(), run_out, out);
      return kExitOk;
    }

    if (*check_choice) {
      emit.command = "check choice";
      std::vector<std::pair<std::string, ChoiceFunction>> targets;  // scope name, rule
      std::optional<Problem> p;
      if (!cc_table.empty()) {
        targets.emplace_back("", tabulated_rule_from_file(cc_table));
      } else {
        if (cc_instance.empty())
          throw InstanceError("check choice needs --instance or --table");
        p = load_instance_file(cc_instance);
        const RuleKind kind = rule_kind_from_name(cc_rule);
        for (int i = 0; i < p->institution_count(); ++i) {
          if (!cc_institution.empty() && p->institution_name(i) != cc_institution) continue;
          targets.emplace_back(p->institution_name(i), make_rule(*p, i, kind));
        }
        if (targets.empty()) throw InstanceError("no institution matches --institution");
      }
      bool all_pass = true;
      for (const std::string& token : split_commas(cc_axiom)) {
        for (auto& [scope, rule] : targets) {
          Report r;
          if (token == "path-independence")
            r = check_path_independence(rule, guards.max_ground);
          else if (token == "size-monotonicity")
            r = check_size_monotonicity(rule, guards.max_ground);
          else if (token == "substitutability")
            r = check_substitutability(rule, guards.max_ground);
          else if (token == "irc")
            r = check_irc(rule, guards.max_ground);
          else {
            const std::string name = axiom_name_from_token(token);
            if (!p) throw InstanceError("punctual axiom checks need --instance");
            const int i = p->institution_index(scope);
            r = satisfies_punctual(rule, builtin_axiom(*p, i, name), guards.max_ground);
          }
          const std::string display = token == "path-independence"   ? "path independence"
                                      : token == "size-monotonicity" ? "size monotonicity"
                                      : token == "substitutability"  ? "substitutability"
                                      : token == "irc" ? "irrelevance of rejected contracts"
                                                       : axiom_name_from_token(token);
          emit.add(display, scope, r);
          all_pass &= r.pass;
        }
      }
      return emit.flush(out, all_pass ? kExitOk : kExitWitness);
    }

    if (*check_matching) {
      emit.command = "check matching";
      const Problem p = load_instance_file(cm_instance);
      const auto rules = make_rule_profile(p, parse_rule_selection(p, cm_rule));
      Matching m;
      if (cm_matching == "da") {
        m = run_da(p, rules).outcome;
      } else {
        ContractSet s;
        for (const std::string& tok : split_commas(cm_matching)) {
          try {
            s.insert(std::stoi(tok));
          } catch (const std::exception&) {
            throw InstanceError("--matching: \"" + tok + "\" is not a contract id");
          }
        }
        m = Matching::from_set(p, s);
      }
      emit.extra["matching"] = matching_to_json(p, m);
      bool all_pass = true;
      for (const std::string& token : split_commas(cm_axiom)) {
        if (token == "stability") {
          Report r = is_stable(m, p, rules);
          emit.add("stability", "", r);
          all_pass &= r.pass;
        } else if (token == "all") {
          for (const MatchingAxiom& ax : matching_axiom_library(p)) {
            Report r = ax.check(m, p);
            emit.add(ax.name, "", r);
            all_pass &= r.pass;
          }
        } else if (token == "individual-rationality") {
          Report r = individual_rationality().check(m, p);
          emit.add("individual rationality", "", r);
          all_pass &= r.pass;
        } else {
          const std::string name = axiom_name_from_token(token);
          for (int i = 0; i < p.institution_count(); ++i) {
            Report r = direct_matching_axiom(p, i, name).check(m, p);
            emit.add(name, p.institution_name(i), r);
            all_pass &= r.pass;
          }
        }
      }
      return emit.flush(out, all_pass ? kExitOk : kExitWitness);
    }

    if (*check_rule) {
      emit.command = "check rule";
      if (cr_axiom != "strategy-proofness")
        throw InstanceError("check rule supports --axiom strategy-proofness");
      const RuleKind kind = rule_kind_from_name(cr_rule);
      const Problem shape = cr_instance.empty()
                                ? generate_shape(parse_shape(cr_shape).agents,
                                                 parse_shape(cr_shape).institutions, kind, cr_seed)
                                : load_instance_file(cr_instance);
      Report r = check_strategy_proofness(da_rule(shape, kind), shape, guards.max_profiles);
      emit.add("strategy-proofness", "", r);
      return emit.flush(out, r.pass ? kExitOk : kExitWitness);
    }

    if (*verify_char) {
      emit.command = "verify characterization";
      const Problem p = load_instance_file(vc_instance);
      const RuleKind target_kind = rule_kind_from_name(vc_target);
      bool all_char = true;
      bool incompatible = false;
      for (int i = 0; i < p.institution_count(); ++i) {
        if (!vc_institution.empty() && p.institution_name(i) != vc_institution) continue;
        std::vector<PunctualAxiom> axioms;
        if (auto set = axiom_set_from_token(vc_axioms)) {
          axioms = characterizing_axioms(p, i, *set);
        } else {
          for (const std::string& token : split_commas(vc_axioms))
            axioms.push_back(builtin_axiom(p, i, axiom_name_from_token(token)));
        }
        const CharacterizationReport r =
            verify_characterization(axioms, make_rule(p, i, target_kind), guards.max_ground);
        emit.add("characterization: " + to_string(r.outcome), p.institution_name(i),
                 r.characterized() ? Report::ok() : Report::fail(r.witness));
        all_char &= r.characterized();
        incompatible |= r.outcome == CharacterizationOutcome::incompatible;
      }
      return emit.flush(out, all_char   ? kExitOk
                             : incompatible ? kExitIncompatible
                                            : kExitWitness);
    }

    if (*verify_lemma) {
      emit.command = "verify lemma-chain";
      const RuleKind kind = rule_kind_from_name(vl_rule);
      const Problem shape = vl_instance.empty()
                                ? generate_shape(parse_shape(vl_shape).agents,
                                                 parse_shape(vl_shape).institutions, kind, vl_seed)
                                : load_instance_file(vl_instance);
      const auto rules = make_rule_profile(shape, kind);
      std::vector<std::vector<PunctualAxiom>> axioms;
      for (int i = 0; i < shape.institution_count(); ++i)
        axioms.push_back(characterizing_axioms(shape, i, kind));
      const LemmaChainReport r =
          verify_lemma_chain(shape, rules, axioms, guards.max_profiles, guards.max_profiles);
      emit.add("IR + extended axioms imply stability", "", r.axioms_imply_stable);
      emit.add("DA outcome satisfies IR + extended axioms", "", r.da_satisfies_axioms);
      return emit.flush(out, r.pass() ? kExitOk : kExitWitness);
    }

    if (*verify_apph) {
      emit.command = "verify appendix-h";
      const RegressionReport r = counterexample_regression();
      for (const auto& [name, rep] : r.assertions) emit.add(name, "", rep);
      return emit.flush(out, r.pass() ? kExitOk : kExitWitness);
    }

    if (*cmd_gen) {
      GenConfig config;
      config.agents = gen_agents;
      config.institutions = gen_institutions;
      config.types = gen_types;
      config.max_reserve = gen_reserve;
      config.returning = !gen_no_returning;
      config.seed = gen_seed;
      write_or_print(save_instance(generate_instance(config)), gen_out, out);
      return kExitOk;
    }
  } catch (const GuardError& e) {
    err << "guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const InstanceError& e) {
    err << "instance error: " << e.what() << "\n";
    return kExitInstance;
  } catch (const ContractViolation& e) {
    err << "internal contract violation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }

  err << "no command\n";
  return kExitInstance;
}

}  // namespace matchforge
