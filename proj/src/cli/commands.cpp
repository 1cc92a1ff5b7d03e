#include <chrono>
#include <sstream>

#include "flatscan/algorithms/algorithms.hpp"
#include "flatscan/cli/cli.hpp"
#include "flatscan/errors.hpp"
#include "flatscan/symexpr/expr.hpp"

namespace flatscan::cli {

using algorithms::BranchTree;
using algorithms::LeafStatus;
using system::ControlAffineSystem;

namespace {

using Clock = std::chrono::steady_clock;

Json basis_of(const diffgeo::Distribution& d) {
  Json a = Json::array();
  for (const auto& v : d.basis()) a.push_back(v.to_string());
  return a;
}

Json basis_of(const diffgeo::Codistribution& q) {
  Json a = Json::array();
  for (const auto& w : q.basis()) a.push_back(w.to_string());
  return a;
}

Json indices(const system::Indices& k) { return Json::array({k[0], k[1]}); }

Json header(const char* command, const std::string& model, std::uint64_t seed) {
  Json r;
  r["tool"] = "flatscan";
  r["version"] = kVersion;
  r["command"] = command;
  r["model"] = model;
  r["seed"] = seed;
  return r;
}

Json lemma_json(const algorithms::Lemma1Result& l) {
  Json j;
  j["v1"] = l.v1.to_string();
  j["v2"] = l.v2.to_string();
  Json q = Json::array();
  for (std::size_t k = 0; k < l.a.size(); ++k) {
    q.push_back({{"a", symexpr::format(l.a[k])}, {"b", symexpr::format(l.b[k])}, {"c", symexpr::format(l.c[k])}});
  }
  j["quadratics"] = q;
  Json al = Json::array();
  for (const auto& a : l.alphas) al.push_back({symexpr::format(a[0]), symexpr::format(a[1])});
  j["alphas"] = al;
  Json c = Json::array();
  for (const auto& v : l.candidates) c.push_back(v.to_string());
  j["candidates"] = c;
  j["degenerate"] = l.degenerate;
  return j;
}

Json step_json(const algorithms::StepRecord& s) {
  Json j;
  j["index"] = s.index;
  j["rule"] = algorithms::rule_name(s.rule);
  j["input_rank"] = s.input.rank();
  j["output_rank"] = s.output.rank();
  j["corank"] = s.corank;
  j["involutive"] = s.involutive;
  j["input"] = basis_of(s.input);
  if (s.replaced) j["replaced"] = basis_of(*s.replaced);
  if (s.cauchy) j["cauchy"] = basis_of(*s.cauchy);
  if (s.lemma) j["lemma"] = lemma_json(*s.lemma);
  if (s.chosen) j["chosen_candidate"] = *s.chosen;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

Json tree_json(const BranchTree& t) {
  Json branches = Json::array();
  for (const auto& leaf : t.leaves) {
    Json b;
    b["path"] = leaf.path;
    b["status"] = algorithms::status_name(leaf.status);
    Json ranks = Json::array();
    for (const auto& d : leaf.sequence) ranks.push_back(d.rank());
    b["ranks"] = ranks;
    Json steps = Json::array();
    for (const auto& s : leaf.steps) steps.push_back(step_json(s));
    b["steps"] = steps;
    branches.push_back(b);
  }
  return branches;
}

Json verdict_json(const system::FlatVerdict& v) {
  Json j;
  j["K"] = indices(v.K);
  j["R"] = indices(v.R);
  j["d"] = v.d;
  j["stacked_rank"] = v.stacked_rank;
  j["reconstructs_state"] = v.reconstructs_state;
  j["passed"] = v.passed;
  return j;
}

Json sfe_json(const system::SfeReport& s) {
  Json j;
  j["passed"] = s.passed;
  Json seq = Json::array();
  for (const auto& e : s.sequence) {
    seq.push_back({{"index", indices(e.index)},
                   {"rank", e.q.rank()},
                   {"integrable", e.integrable},
                   {"basis", basis_of(e.q)}});
  }
  j["sequence"] = seq;
  return j;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome input_error(Json report, const std::string& message) {
  report["error"] = {{"kind", "input"}, {"message", message}};
  report["exit_code"] = static_cast<int>(kInputError);
  return {std::move(report), kInputError};
}

Outcome diagnostic(Json report, const std::string& message) {
  report["error"] = {{"kind", "diagnostic"}, {"message", message}};
  report["exit_code"] = static_cast<int>(kDiagnostic);
  return {std::move(report), kDiagnostic};
}

system::OutputPair parse_output(const ControlAffineSystem& sys, const std::string& a, const std::string& b) {
  return {symexpr::parse_ratfunc(a, sys.chart()), symexpr::parse_ratfunc(b, sys.chart())};
}

}  // namespace

Outcome cmd_analyze(const std::string& model_path, const AnalyzeOptions& options) {
  const auto t0 = Clock::now();
  Json report = header("analyze", model_path, options.seed);
  report["algorithm"] = options.algorithm;
  report["max_prolong"] = options.max_prolong;
  if (options.algorithm != 1 && options.algorithm != 2) return input_error(report, "algorithm must be 1 or 2");
  std::optional<ControlAffineSystem> base;
  try {
    base = to_system(load_model(model_path));
  } catch (const Error& e) {
    return input_error(report, e.what());
  }
  try {
    Json attempts = Json::array();
    bool found = false, reached = false;
    for (unsigned p = 0; p <= options.max_prolong && !found; ++p) {
      const ControlAffineSystem sys = system::prolong(*base, p, p).system;
      const auto oracle = sys.oracle(options.seed);
      const BranchTree tree = options.algorithm == 1 ? algorithms::run_algorithm1(sys, oracle)
                                                     : algorithms::run_algorithm2(sys, oracle);
      Json attempt;
      attempt["prolongation"] = p;
      attempt["states"] = sys.chart().coordinates();
      attempt["root"] = basis_of(tree.root);
      attempt["branches"] = tree_json(tree);
      Json leaves = Json::array();
      for (const auto& lc : algorithms::extract_candidates(tree, sys, oracle)) {
        reached = true;
        Json l;
        l["path"] = lc.path;
        l["F"] = basis_of(lc.F);
        l["F_from_cauchy"] = lc.from_cauchy;
        l["F_perp"] = basis_of(lc.F_perp);
        Json fns = Json::array();
        for (const auto& h : lc.functions) fns.push_back(symexpr::format(h));
        l["functions"] = fns;
        l["shortfall"] = lc.shortfall;
        if (!lc.note.empty()) l["note"] = lc.note;
        Json pairs = Json::array();
        for (const auto& pr : lc.pairs) {
          Json pj;
          pj["phi"] = {symexpr::format(pr.phi[0]), symexpr::format(pr.phi[1])};
          pj["passed"] = pr.passed();
          if (pr.verdict) pj["verdict"] = verdict_json(*pr.verdict);
          if (!pr.error.empty()) pj["error"] = pr.error;
          if (pr.passed()) {
            found = true;
            pj["sfe_gtf"] = sfe_json(system::sfe_gtf_test(sys, pr.phi, oracle));
          }
          pairs.push_back(pj);
        }
        l["pairs"] = pairs;
        leaves.push_back(l);
      }
      attempt["candidates"] = leaves;
      attempts.push_back(attempt);
    }
    report["attempts"] = attempts;
    int code = kPass;
    if (found) {
      report["verdict"] = "flat output found";
    } else if (!reached) {
      report["verdict"] = "no branch reached the tangent space";
      code = kDiagnostic;
    } else {
      report["verdict"] = "no flat output found";
      code = kNegative;
    }
    report["exit_code"] = code;
    if (options.timing) report["timing"] = {{"seconds", seconds_since(t0)}};
    return {std::move(report), code};
  } catch (const InternalDiagnostic& e) {
    return diagnostic(report, e.what());
  } catch (const AssumptionViolation& e) {
    return diagnostic(report, e.what());
  }
}

Outcome cmd_verify(const std::string& model_path, const std::string& phi1, const std::string& phi2,
                   std::uint64_t seed, bool timing) {
  const auto t0 = Clock::now();
  Json report = header("verify", model_path, seed);
  report["output"] = {phi1, phi2};
  std::optional<ControlAffineSystem> sys;
  system::OutputPair phi;
  try {
    sys = to_system(load_model(model_path));
    phi = parse_output(*sys, phi1, phi2);
  } catch (const Error& e) {
    return input_error(report, e.what());
  }
  try {
    const auto oracle = sys->oracle(seed);
    int code = kPass;
    try {
      const auto v = system::verify_flat_output(*sys, phi, oracle);
      report["flat_output"] = verdict_json(v);
      if (!v.passed) code = kNegative;
      report["sfe_gtf"] = sfe_json(system::sfe_gtf_test(*sys, phi, oracle));
    } catch (const DependentDifferentials& e) {
      report["flat_output"] = {{"passed", false}, {"reason", e.what()}};
      code = kNegative;
    } catch (const UnboundedRelativeDegree& e) {
      report["flat_output"] = {{"passed", false}, {"reason", e.what()}};
      code = kNegative;
    }
    report["verdict"] = code == kPass ? "flat output" : "not a flat output";
    report["exit_code"] = code;
    if (timing) report["timing"] = {{"seconds", seconds_since(t0)}};
    return {std::move(report), code};
  } catch (const InternalDiagnostic& e) {
    return diagnostic(report, e.what());
  }
}

Outcome cmd_prolong(const std::string& model_path, unsigned p1, unsigned p2, const std::string& out_path) {
  Json report = header("prolong", model_path, 0);
  report.erase("seed");
  report["orders"] = {p1, p2};
  report["out"] = out_path;
  try {
    const ModelFile m = load_model(model_path);
    const auto pro = system::prolong(to_system(m), p1, p2);
    const ModelFile out = from_system(pro.system, m.flat_output);
    save_model(out, out_path);
    report["states"] = out.states;
    report["inputs"] = out.inputs;
    report["equal_orders"] = pro.equal_orders();
  } catch (const Error& e) {
    return input_error(report, e.what());
  }
  report["exit_code"] = static_cast<int>(kPass);
  return {std::move(report), kPass};
}

namespace {

void render(const Json& j, int depth, std::ostringstream& out) {
  const std::string pad(2 * depth, ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [](const Json& v) {
    for (const auto& e : v) {
      if (e.is_structured()) return false;
    }
    return true;
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !flat(v))) {
        out << pad << k << ":\n";
        render(v, depth + 1, out);
      } else if (v.is_array()) {
        out << pad << k << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
        out << "]\n";
      } else {
        out << pad << k << ": " << scalar(v) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out << pad << "- [" << i << "]\n";
      render(j[i], depth + 1, out);
    }
  } else {
    out << pad << scalar(j) << "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  render(report, 0, out);
  return out.str();
}

}  // namespace flatscan::cli
