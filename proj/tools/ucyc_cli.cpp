// Command line front end for the ucyc engine.
//
// Exit codes: 0 success / Proved / true, 1 Unknown / false, 2 input error.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucyc/bubbles.hpp"
#include "ucyc/functor.hpp"
#include "ucyc/klr.hpp"
#include "ucyc/rewrite.hpp"
#include "ucyc/rules.hpp"
#include "ucyc/text.hpp"

using namespace ucyc;
using json = nlohmann::json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string datum = "sl2";
  bool json = false;
  std::string tier = "T3";
  int depth = 3;
  std::uint64_t seed = 0;
  int range = -1;
  std::vector<std::string> exprs;
  std::string single;  // the one-expression subcommands
  std::string trace_file;
  std::string expect;
  int color = 1, strand = 1, m = 0, order = 6, bound = -1, check_depth = -1;
  std::string weight = "[0]";
  std::string orientation = "cw";
  std::string side = "left";
  std::string form = "auto";
};

Parameters load(const Options& o) {
  if (!o.config.empty()) return load_parameters_file(o.config);
  if (o.datum == "sl2") return Parameters::symbolic(CartanDatum::sl2());
  if (o.datum == "a2") return Parameters::symbolic(CartanDatum::a2());
  if (o.datum == "b2") return Parameters::symbolic(CartanDatum::b2());
  if (o.datum == "affine_a1") return Parameters::symbolic(CartanDatum::affine_a1());
  throw InputError("unknown datum '" + o.datum + "' (sl2, a2, b2, affine_a1)");
}

Weight parse_weight(const CartanDatum& D, const std::string& text) {
  std::vector<int> c;
  try {
    c = json::parse(text).get<std::vector<int>>();
  } catch (const json::exception&) {
    throw InputError("weight must look like [1,-2], got '" + text + "'");
  }
  if (static_cast<int>(c.size()) != D.rank())
    throw InputError("weight " + text + " has " + std::to_string(c.size()) + " entries, rank is " + std::to_string(D.rank()));
  return Weight::from_coords(D, c);
}

int color_pos(const CartanDatum& D, int label) {
  if (!D.has_label(label)) throw InputError("unknown color " + std::to_string(label));
  return D.pos(label);
}

Tier parse_tier(const std::string& t) {
  if (t == "T1") return Tier::T1;
  if (t == "T2") return Tier::T2;
  if (t == "T3") return Tier::T3;
  throw InputError("tier must be T1, T2 or T3");
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json trace_json(const RewriteTrace& t) {
  json a = json::array();
  for (const auto& s : t.steps) a.push_back(s.render());
  return a;
}

// What a subcommand hands back: exit code, text lines and the JSON result.
struct Outcome {
  int code = 0;
  std::string text;
  json result = json::object();
  std::optional<json> trace;
};

using Handler = std::function<Outcome(const Options&, const Parameters&, json& inputs)>;

Morphism expr(const Parameters& P, const Options& o, std::size_t k, json& inputs) {
  if (o.exprs.size() <= k) throw InputError("missing expression argument");
  inputs["expr" + std::to_string(k)] = o.exprs[k];
  return parse_morphism(P.datum(), o.exprs[k]);
}

Outcome cmd_degree(const Options& o, const Parameters& P, json& in) {
  Morphism m = expr(P, o, 0, in);
  std::vector<int> ds = m.term_degrees(P.datum());
  Outcome out;
  out.result["term_degrees"] = ds;
  bool homogeneous = true;
  for (int d : ds) homogeneous = homogeneous && d == ds.front();
  out.result["homogeneous"] = homogeneous;
  if (ds.empty()) {
    out.text = "zero morphism";
    out.result["degree"] = nullptr;
  } else if (homogeneous) {
    out.text = "degree " + std::to_string(ds.front());
    out.result["degree"] = ds.front();
  } else {
    out.code = 1;
    std::string s = "inhomogeneous:";
    for (int d : ds) s += " " + std::to_string(d);
    out.text = s;
  }
  return out;
}

Outcome cmd_normalize(const Options& o, const Parameters& P, json& in) {
  Morphism m = expr(P, o, 0, in);
  in["tier"] = o.tier;
  Rewriter R(P);
  NormalForm nf = R.normalize(m, parse_tier(o.tier), o.seed);
  Outcome out;
  out.code = nf.normal ? 0 : 1;
  std::string v = render_morphism(P.datum(), nf.value);
  out.text = v + (nf.normal ? "" : "\n(not fully normal: step budget exhausted or stuck)");
  out.result["normal_form"] = v;
  out.result["normal"] = nf.normal;
  out.result["zero"] = nf.value.is_zero();
  out.trace = trace_json(nf.trace);
  return out;
}

Outcome prove(const Parameters& P, const Morphism& a, const Morphism& b, int depth) {
  Rewriter R(P);
  ProofResult pr = R.prove_equal(a, b, depth);
  Outcome out;
  bool ok = pr.status == ProofStatus::Proved;
  out.code = ok ? 0 : 1;
  out.text = ok ? "Proved" : "Unknown (residue " + render_morphism(P.datum(), pr.residue) + ")";
  if (ok && !pr.trace.steps.empty()) {
    std::string t = pr.trace.render();
    while (!t.empty() && t.back() == '\n') t.pop_back();
    out.text += "\n" + t;
  }
  out.result["status"] = ok ? "Proved" : "Unknown";
  if (!ok) out.result["residue"] = render_morphism(P.datum(), pr.residue);
  out.trace = trace_json(pr.trace);
  return out;
}

Outcome cmd_prove(const Options& o, const Parameters& P, json& in) {
  Morphism a = expr(P, o, 0, in), b = expr(P, o, 1, in);
  in["depth"] = o.depth;
  return prove(P, a, b, o.depth);
}

Outcome cmd_replay(const Options& o, const Parameters& P, json& in) {
  Morphism m = expr(P, o, 0, in);
  in["trace_file"] = o.trace_file;
  RewriteTrace t = RewriteTrace::parse(read_file(o.trace_file));
  Rewriter R(P);
  GraphSum g = R.replay(m, t);
  Morphism v = to_morphism(g, m.source(), m.target());
  Outcome out;
  out.text = render_morphism(P.datum(), v);
  out.result["value"] = out.text;
  out.result["steps"] = t.steps.size();
  if (!o.expect.empty()) {
    in["expect"] = o.expect;
    Morphism e = parse_morphism(P.datum(), o.expect);
    bool same = R.settle(to_graphs(P.datum(), e)) == g;
    out.result["matches"] = same;
    out.code = same ? 0 : 1;
    out.text += same ? "\nmatches expected" : "\ndoes not match expected";
  }
  return out;
}

Outcome cmd_bubbles(const Options& o, const Parameters& P, json& in) {
  const auto& D = P.datum();
  int i = color_pos(D, o.color);
  Weight w = parse_weight(D, o.weight);
  if (o.orientation != "cw" && o.orientation != "ccw") throw InputError("orientation must be cw or ccw");
  in["color"] = o.color;
  in["weight"] = o.weight;
  in["orientation"] = o.orientation;
  in["m"] = o.m;
  BubbleCalculus calc(P);
  BubblePolynomial v = calc.bubble(i, w, o.orientation == "cw", o.m);
  Outcome out;
  out.text = v.render(D);
  out.result["value"] = out.text;
  out.result["fake"] = canonical_cw(w, i) != (o.orientation == "cw");
  out.result["literal_dots"] = literal_dots(w, i, o.orientation == "cw", o.m);
  return out;
}

CurlSide parse_side(const std::string& s) {
  if (s == "left") return CurlSide::Left;
  if (s == "right") return CurlSide::Right;
  throw InputError("side must be left or right");
}

Outcome cmd_curl(const Options& o, const Parameters& P, json& in) {
  const auto& D = P.datum();
  int i = color_pos(D, o.color);
  Weight w = parse_weight(D, o.weight);
  CurlSide side = parse_side(o.side);
  in["color"] = o.color;
  in["weight"] = o.weight;
  in["side"] = o.side;
  in["dots"] = o.m;
  Morphism lhs(curl_diagram(D, side, i, w, o.m));
  Morphism rhs = curl_reduce(D, side, i, w, o.m);
  if (o.check_depth >= 0) {
    Outcome out = prove(P, lhs, rhs, o.check_depth);
    out.result["curl"] = render_morphism(D, lhs);
    out.result["value"] = render_morphism(D, rhs);
    out.text = render_morphism(D, lhs) + "\n= " + render_morphism(D, rhs) + "\n" + out.text;
    return out;
  }
  Outcome out;
  out.text = render_morphism(D, rhs);
  out.result["curl"] = render_morphism(D, lhs);
  out.result["value"] = out.text;
  return out;
}

Outcome cmd_slide(const Options& o, const Parameters& P, json& in) {
  const auto& D = P.datum();
  int i = color_pos(D, o.color), j = color_pos(D, o.strand);
  Weight w = parse_weight(D, o.weight);
  if (o.orientation != "cw" && o.orientation != "ccw") throw InputError("orientation must be cw or ccw");
  bool cw = o.orientation == "cw";
  bool right = parse_side(o.side) == CurlSide::Right;
  SlideForm form;
  if (o.form == "auto")
    form = BubbleCalculus::slide_is_expanded(cw, right) ? SlideForm::Expanded : SlideForm::Inverted;
  else if (o.form == "expanded")
    form = SlideForm::Expanded;
  else if (o.form == "inverted")
    form = SlideForm::Inverted;
  else
    throw InputError("form must be auto, expanded or inverted");
  in["bubble_color"] = o.color;
  in["strand_color"] = o.strand;
  in["weight"] = o.weight;
  in["orientation"] = o.orientation;
  in["side"] = o.side;
  in["m"] = o.m;
  in["form"] = o.form;
  BubbleCalculus calc(P);
  Morphism lhs(bubble_beside_strand(D, i, j, w, cw, o.m, right, 0));
  Morphism rhs = bubble_slide(calc, i, j, w, cw, o.m, right, form);
  if (o.check_depth >= 0) {
    Outcome out = prove(P, lhs, rhs, o.check_depth);
    out.result["value"] = render_morphism(D, rhs);
    out.text = render_morphism(D, rhs) + "\n" + out.text;
    return out;
  }
  Outcome out;
  out.text = render_morphism(D, rhs);
  out.result["value"] = out.text;
  return out;
}

Outcome cmd_grassmann(const Options& o, const Parameters& P, json& in) {
  const auto& D = P.datum();
  int i = color_pos(D, o.color);
  Weight w = parse_weight(D, o.weight);
  in["color"] = o.color;
  in["weight"] = o.weight;
  in["order"] = o.order;
  BubbleCalculus calc(P);
  bool ok = calc.grassmannian_check(i, w, o.order);
  Outcome out;
  out.code = ok ? 0 : 1;
  out.text = ok ? "holds through degree " + std::to_string(o.order) : "fails";
  out.result["holds"] = ok;
  return out;
}

Outcome cmd_verify_functor(const Options& o, const Parameters& P, json& in) {
  int range = o.range < 0 ? 1 : o.range;
  in["range"] = range;
  RuleSet rs = RuleSet::install(P, range);
  PreservationReport rep = verify_preservation(rs, range);
  Outcome out;
  out.code = rep.ok() ? 0 : 1;
  out.text = rep.render();
  out.result = json::parse(rep.to_json());
  out.result.erase("schema");
  return out;
}

Outcome cmd_klr(const Options& o, const Parameters& P, json& in) {
  Morphism a = expr(P, o, 0, in), b = expr(P, o, 1, in);
  in["bound"] = o.bound;
  bool eq = oracle_equal(P, a, b, o.bound);
  Outcome out;
  out.code = eq ? 0 : 1;
  out.text = eq ? "equal on the polynomial representation" : "different on the polynomial representation";
  out.result["equal"] = eq;
  return out;
}

Outcome cmd_check_relations(const Options& o, const Parameters& P, json& in) {
  int range = o.range < 0 ? 4 : o.range;
  in["range"] = range;
  Outcome out;
  try {
    RuleSet rs = RuleSet::install(P, range);
    std::ostringstream t;
    json fams = json::array();
    for (const auto& f : rs.families()) {
      fams.push_back({{"name", f.name},
                      {"orientation", f.orientation == Orientation::Reducing ? "reducing" : "bidirectional"},
                      {"instances", rs.instances(f.name, range).size()}});
    }
    t << rs.families().size() << " relation families homogeneous on weights in [" << -range << "," << range << "]";
    out.text = t.str();
    out.result["families"] = fams;
    out.result["homogeneous"] = true;
  } catch (const RuleError& e) {
    out.code = 1;
    out.text = e.what();
    out.result["homogeneous"] = false;
    out.result["error"] = e.what();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucyc: exact string-diagram engine for the cyclic categorified quantum group"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, Handler> handlers;
  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "JSON config with the Cartan datum and scalars");
    s->add_option("--datum", o.datum, "built-in symbolic datum: sl2, a2, b2, affine_a1");
    s->add_flag("--json", o.json, "machine-readable output");
  };
  auto sub = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    handlers[name] = std::move(h);
    return s;
  };

  auto* degree = sub("degree", "degree of a homogeneous morphism", cmd_degree);
  degree->add_option("expr", o.single, "morphism")->required();

  auto* normalize = sub("normalize", "normal form under a tier", cmd_normalize);
  normalize->add_option("expr", o.single, "morphism")->required();
  normalize->add_option("--tier", o.tier, "T1, T2 or T3");
  normalize->add_option("--seed", o.seed, "randomize T2 step order");

  auto* prove_cmd = sub("prove", "search for a rewrite proof of A = B", cmd_prove);
  prove_cmd->add_option("exprs", o.exprs, "A B")->expected(2)->required();
  prove_cmd->add_option("--depth", o.depth, "search depth");

  auto* replay = sub("replay", "replay a trace from a morphism", cmd_replay);
  replay->add_option("expr", o.single, "morphism")->required();
  replay->add_option("trace", o.trace_file, "trace file ('-' for stdin)")->required();
  replay->add_option("--expect", o.expect, "expected result");

  auto bubble_opts = [&](CLI::App* s) {
    s->add_option("--color", o.color, "color label");
    s->add_option("--weight", o.weight, "weight of the outside region, e.g. [1,-2]");
  };
  auto* bubbles = sub("bubbles", "value of a (fake) bubble", cmd_bubbles);
  bubble_opts(bubbles);
  bubbles->add_option("--orientation", o.orientation, "cw or ccw");
  bubbles->add_option("--m", o.m, "spade offset");

  auto* curl = sub("curl", "reduce a dotted curl", cmd_curl);
  bubble_opts(curl);
  curl->add_option("--side", o.side, "left or right");
  curl->add_option("--dots", o.m, "dots on the loop");
  curl->add_option("--check", o.check_depth, "also prove the reduction with this search depth");

  auto* slide = sub("slide", "slide a bubble through a strand", cmd_slide);
  bubble_opts(slide);
  slide->add_option("--strand", o.strand, "strand color label");
  slide->add_option("--orientation", o.orientation, "cw or ccw");
  slide->add_option("--m", o.m, "spade offset");
  slide->add_option("--side", o.side, "side of the strand the bubble starts on: left or right");
  slide->add_option("--form", o.form, "auto, expanded or inverted");
  slide->add_option("--check", o.check_depth, "also prove the slide with this search depth");

  auto* grassmann = sub("grassmann", "infinite Grassmannian relation through a degree", cmd_grassmann);
  bubble_opts(grassmann);
  grassmann->add_option("--order", o.order, "highest degree checked");

  auto* vf = sub("verify-functor", "check that the rescaling preserves every relation", cmd_verify_functor);
  vf->add_option("--range", o.range, "weight coordinates in [-range, range]");

  auto* klr = sub("klr-oracle", "compare two upward morphisms on the polynomial representation", cmd_klr);
  klr->add_option("exprs", o.exprs, "A B")->expected(2)->required();
  klr->add_option("--bound", o.bound, "polynomial degree bound");

  auto* cr = sub("check-relations", "install the relation catalogue and check homogeneity", cmd_check_relations);
  cr->add_option("--range", o.range, "weight coordinates in [-range, range]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (!o.single.empty()) o.exprs.insert(o.exprs.begin(), o.single);
  json inputs = json::object();
  Outcome out;
  try {
    Parameters P = load(o);
    out = handlers.at(name)(o, P, inputs);
  } catch (const std::exception& e) {
    // every engine error at this level comes from the user's input
    std::cerr << "error: " << e.what() << "\n";
    if (o.json) {
      json j{{"schema", 1}, {"command", name}, {"inputs", inputs}, {"error", e.what()}};
      std::cout << j.dump(2) << "\n";
    }
    return 2;
  }
  if (o.json) {
    json j{{"schema", 1}, {"command", name}, {"inputs", inputs}, {"result", out.result}, {"exit", out.code}};
    if (out.trace) j["trace"] = *out.trace;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << out.text << "\n";
  }
  return out.code;
}
