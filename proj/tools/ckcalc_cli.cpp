#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ckcalc/verify.hpp"

using namespace ck;

namespace {

nlohmann::json read_json_arg(const std::string& arg) {
  // a path when the file exists, inline JSON otherwise
  std::ifstream in(arg);
  if (in.good()) return nlohmann::json::parse(in);
  return nlohmann::json::parse(arg);
}

void emit(bool as_json, const nlohmann::json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << "\n";
}

int truth_exit(Truth3 t) {
  return t == Truth3::Yes ? 0 : t == Truth3::No ? 1 : 2;
}

std::string height_str(const HeightInfo& h) {
  if (h.kind == HeightInfo::Representable) return print(h.value);
  return h.kind == HeightInfo::BeyondScale ? "beyond_scale" : "infinity";
}

nlohmann::json verdict_json(const Verdict& v) {
  return {{"answer", to_string(v.answer)},
          {"rule", v.rule},
          {"unknown", v.unknown},
          {"certificate", v.certificate}};
}

nlohmann::json report_json(const Report& r) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [k, pf] : r.counts)
    counts[k] = {{"pass", pf.first}, {"fail", pf.second}};
  return {{"all_pass", r.all_pass()},
          {"counts", counts},
          {"first_counterexample", r.first_counterexample}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic calculus for embeddings of C(L) into C(K)"};
  app.require_subcommand(1);
  bool as_json = false;
  bool assume_ch = false;
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_flag("--assume-ch", assume_ch, "assume the continuum hypothesis");

  std::string s_arg, l_arg, k_arg, ord_arg = "0", order_arg = "0";
  std::string op_arg, fn_arg, map_arg, point_arg, region_arg, checks_arg, kind = "interval";
  long long m = 1, n = 1, trials = 100;
  std::uint64_t seed = 0;
  bool isometric = false, isomorphic = false;

  auto* c_height = app.add_subcommand("height", "Cantor-Bendixson height of a space");
  c_height->add_option("space", s_arg)->required();

  auto* c_derive = app.add_subcommand("derive", "closed form of the derived space");
  c_derive->add_option("space", s_arg)->required();
  c_derive->add_option("order", ord_arg)->required();

  auto* c_kernel = app.add_subcommand("kernel", "perfect kernel of a space");
  c_kernel->add_option("space", s_arg)->required();

  auto* c_msnf = app.add_subcommand("msnf", "Mazurkiewicz-Sierpinski normal form");
  c_msnf->add_option("space", s_arg)->required();

  auto* c_szlenk = app.add_subcommand("szlenk", "Szlenk index of C(K)");
  c_szlenk->add_option("space", s_arg)->required();

  auto* c_cell = app.add_subcommand("cellularity", "relative cellularity bound with witness");
  c_cell->add_option("space", s_arg)->required();
  c_cell->add_option("--order", order_arg, "derivative order, or 'infinity'");

  auto* c_embeds = app.add_subcommand("embeds", "does C(L) embed into C(K)?");
  c_embeds->add_flag("--isometric", isometric);
  c_embeds->add_flag("--isomorphic", isomorphic);
  c_embeds->add_option("L", l_arg)->required();
  c_embeds->add_option("K", k_arg)->required();

  auto* c_cond = app.add_subcommand("conditions", "evaluate conditions (ii),(iii),(iv) and the cellularity refuter");
  c_cond->add_option("L", l_arg)->required();
  c_cond->add_option("K", k_arg)->required();

  auto* c_synth = app.add_subcommand("synth", "synthesize an embedding operator or surjection");
  c_synth->add_option("--kind", kind,
                      "interval|onepoint|onepoint-inf|cantor|surjection|cantor-surjection");
  c_synth->add_option("--alpha", ord_arg, "interval exponent");
  c_synth->add_option("-m", m, "interval multiplicity");
  c_synth->add_option("-n", n, "cellular family size");
  c_synth->add_option("--region", region_arg, "clopen region JSON (file or inline)");
  c_synth->add_option("K", k_arg)->required();

  auto* c_apply = app.add_subcommand("apply", "apply a serialized operator to a function");
  c_apply->add_option("--op", op_arg)->required();
  c_apply->add_option("--fn", fn_arg)->required();

  auto* c_seval = app.add_subcommand("surject-eval", "evaluate a serialized surjection at a point");
  c_seval->add_option("--map", map_arg)->required();
  c_seval->add_option("--point", point_arg)->required();

  auto* c_verify = app.add_subcommand("verify", "run exact property checks on a serialized operator");
  c_verify->add_option("--op", op_arg)->required();
  c_verify->add_option("--trials", trials);
  c_verify->add_option("--seed", seed)->required();
  c_verify->add_option("--checks", checks_arg, "comma-separated subset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*c_height) {
      HeightInfo h = height_info(parse_space(s_arg));
      emit(as_json, {{"height", height_str(h)}}, height_str(h));
      return 0;
    }
    if (*c_derive) {
      SpaceP d = derived(parse_space(s_arg), parse_ordinal(ord_arg));
      emit(as_json, {{"space", print(d)}}, print(d));
      return 0;
    }
    if (*c_kernel) {
      SpaceP kk = perfect_kernel(parse_space(s_arg));
      emit(as_json, {{"space", print(kk)}}, print(kk));
      return 0;
    }
    if (*c_msnf) {
      auto [d, mm] = ms_normal_form(parse_space(s_arg));
      std::string text = print(space_interval(d, mm));
      emit(as_json, {{"alpha", print(d)}, {"m", mm}, {"space", text}}, text);
      return 0;
    }
    if (*c_szlenk) {
      SzlenkValue v = szlenk_of(parse_space(s_arg));
      emit(as_json, {{"szlenk", v.str()}}, v.str());
      return 0;
    }
    if (*c_cell) {
      ExtendedOrdinal order = parse_extended_ordinal(order_arg);
      CellularityBound b = cellularity_bound(parse_space(s_arg), order);
      emit(as_json, {{"value", b.value.str()}, {"witness_max", b.witness_max}},
           "c = " + b.value.str() + ", witness = " + std::to_string(b.witness_max));
      return 0;
    }
    if (*c_embeds) {
      if (isometric == isomorphic)
        throw std::invalid_argument("pass exactly one of --isometric / --isomorphic");
      SpaceP L = parse_space(l_arg), K = parse_space(k_arg);
      Verdict v = isometric ? isometric_embeds(L, K, assume_ch) : isomorphic_embeds(L, K);
      emit(as_json, verdict_json(v), std::string(to_string(v.answer)) + " [" + v.rule + "]");
      return truth_exit(v.answer);
    }
    if (*c_cond) {
      SpaceP L = parse_space(l_arg), K = parse_space(k_arg);
      nlohmann::json all = nlohmann::json::object();
      std::string text;
      for (const std::string cond : {"iv", "iii", "ii", "cell_necessary"}) {
        Verdict v = check_condition(cond, L, K, assume_ch);
        all[cond] = verdict_json(v);
        text += "(" + cond + ") " + std::string(to_string(v.answer)) + " [" + v.rule + "]\n";
      }
      if (!text.empty()) text.pop_back();
      emit(as_json, all, text);
      return 0;
    }
    if (*c_synth) {
      SpaceP K = parse_space(k_arg);
      ClopenRegion region = region_arg.empty() ? ClopenRegion::whole()
                                               : region_from_json(read_json_arg(region_arg));
      nlohmann::json out;
      if (kind == "interval")
        out = op_to_json(synth_interval_embedding(K, parse_ordinal(ord_arg), m, region));
      else if (kind == "onepoint")
        out = op_to_json(synth_onepoint_embedding(K, n, parse_ordinal(ord_arg)));
      else if (kind == "onepoint-inf")
        out = op_to_json(synth_onepoint_embedding_inf(K, parse_ordinal(ord_arg)));
      else if (kind == "cantor")
        out = op_to_json(synth_cantor_embedding(K, region));
      else if (kind == "surjection")
        out = surj_to_json(synth_surjection(K, parse_ordinal(ord_arg), m, region));
      else if (kind == "cantor-surjection")
        out = surj_to_json(synth_cantor_surjection(K, region));
      else
        throw std::invalid_argument("unknown synth kind: " + kind);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*c_apply) {
      Operator T = op_from_json(read_json_arg(op_arg));
      FunctionRep f = fn_from_json(read_json_arg(fn_arg));
      if (!shape_ok(T.domain(), f))
        throw SpaceMismatch("function does not fit the operator domain");
      FunctionRep g = apply(T, f);
      nlohmann::json out = {{"result", fn_to_json(g)},
                            {"norm", norm(g).str()},
                            {"norm_pos", norm_pos(g).str()}};
      emit(as_json, out, out.dump(2));
      return 0;
    }
    if (*c_seval) {
      SurjectionMap M = surj_from_json(read_json_arg(map_arg));
      Point p = point_from_json(read_json_arg(point_arg));
      if (!valid_point(M.source(), p))
        throw InvalidPoint("point is not valid in the source space");
      Point q = surj_eval(M, p);
      emit(as_json, {{"target", point_to_json(q)}}, point_str(q));
      return 0;
    }
    if (*c_verify) {
      Operator T = op_from_json(read_json_arg(op_arg));
      TrialConfig cfg;
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.checks = default_checks(T);
      if (!checks_arg.empty()) {
        cfg.checks.clear();
        size_t pos = 0;
        while (pos <= checks_arg.size()) {
          size_t comma = checks_arg.find(',', pos);
          if (comma == std::string::npos) comma = checks_arg.size();
          if (comma > pos) cfg.checks.insert(checks_arg.substr(pos, comma - pos));
          pos = comma + 1;
        }
      }
      Report rep = run_checks(T, cfg);
      std::string text;
      for (const auto& [k, pf] : rep.counts)
        text += k + ": " + std::to_string(pf.first) + " pass, " +
                std::to_string(pf.second) + " fail\n";
      text += rep.all_pass() ? "all checks passed" : "counterexample found";
      emit(as_json, report_json(rep), text);
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
