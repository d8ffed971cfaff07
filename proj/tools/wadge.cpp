// wadge: command-line front end for terms, flowcharts and commands.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "wadge/codec.hpp"
#include "wadge/command.hpp"
#include "wadge/flowchart.hpp"
#include "wadge/fuzz.hpp"

namespace {

using namespace wadge;

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kUnsupported = 3, kNoTruePath = 4, kAmbiguous = 5 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Unsupported:
    case ErrorKind::NonNormal:
    case ErrorKind::NonMonotone:
    case ErrorKind::Precondition:
    case ErrorKind::OpenTerm:
    case ErrorKind::EmptySet: return kUnsupported;
    case ErrorKind::Undecided:
    case ErrorKind::Internal: return kFail;
    default: return kUsage;
  }
}

struct Grid {
  std::size_t prefix = 4;
  std::size_t period = 2;
};

struct Options {
  std::optional<std::uint32_t> space;
  Grid grid;
  std::size_t depth = 6;
  std::uint64_t seed = 1;
  bool verify = false;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Malformed, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

using Document = std::variant<TermDocument, Flowchart, Command>;

Document load(const std::string& path) {
  const std::string text = slurp(path);
  if (ends_with(path, ".term")) return parse_term_document(text);
  if (ends_with(path, ".fc")) return decode_flowchart(parse_json(text));
  if (ends_with(path, ".cmd")) return decode_command(parse_json(text));
  // sniff: JSON documents with command records are commands
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return parse_term_document(text);
  const Json doc = parse_json(text);
  if (doc.contains("assign") && doc.at("assign").is_object())
    for (const auto& [k, v] : doc.at("assign").items())
      if (v.is_object()) return decode_command(doc);
  return decode_flowchart(doc);
}

const Term& term_of(const Document& d) {
  return std::visit(
      [](const auto& x) -> const Term& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, TermDocument>)
          return x.term;
        else
          return x.term();
      },
      d);
}

ContinuousMap load_map(const std::string& path, Space from) {
  const std::string text = slurp(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  // a bare name without quotes is accepted for convenience
  if (first != std::string::npos && text[first] != '{' && text[first] != '[' && text[first] != '"') {
    std::string name = text.substr(first);
    name.erase(name.find_last_not_of(" \t\r\n") + 1);
    return decode_map(Json(name), from);
  }
  return decode_map(parse_json(text), from);
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw Error(ErrorKind::Malformed, "cannot write " + opt.out);
  out << text << "\n";
}

// Verification lines go to stdout when the document went to a file.
std::ostream& report_stream(const Options& opt) { return opt.out.empty() ? std::cerr : std::cout; }

Json verdict_json(const Verdict& v) {
  Json j{{"pass", v.holds}};
  if (v.witness) j["witness"] = render_point(*v.witness);
  if (v.at) j["at"] = render_address(*v.at);
  return j;
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& path, const Options&) {
  const Document doc = load(path);
  const Term& t = term_of(doc);
  Json report = Json::object();
  bool ok = is_well_formed(t);
  report["well_formed"] = {{"pass", is_well_formed(t)}};
  report["normal"] = {{"pass", is_normal(t)}};
  report["closed"] = {{"pass", is_closed(t)}};
  if (const auto* f = std::get_if<Flowchart>(&doc)) {
    const Verdict total = is_total(*f), det = is_deterministic(*f);
    const bool levels = check_levels(*f);
    report["levels"] = {{"pass", levels}};
    report["total"] = verdict_json(total);
    report["covers_domains"] = verdict_json(covers_domains(*f));
    report["deterministic"] = verdict_json(det);
    report["monotone"] = verdict_json(is_monotone(*f));
    report["reduced"] = verdict_json(is_reduced(*f));
    ok = ok && levels && total.holds && det.holds;
  }
  if (const auto* c = std::get_if<Command>(&doc)) {
    const Verdict total = is_total(*c), det = is_deterministic(*c);
    report["simple"] = {{"pass", is_simple(*c)}};
    report["strongly_total"] = verdict_json(is_strongly_total(*c));
    report["total"] = verdict_json(total);
    report["deterministic"] = verdict_json(det);
    ok = ok && total.holds && det.holds;
  }
  std::cout << report.dump(2) << "\n";
  return ok ? kPass : kFail;
}

int cmd_eval(const std::string& path, const std::string& point) {
  const Document doc = load(path);
  Outcome o;
  if (const auto* f = std::get_if<Flowchart>(&doc)) {
    o = eval(*f, parse_point(point, f->space()));
  } else if (const auto* c = std::get_if<Command>(&doc)) {
    o = eval(*c, parse_point(point, c->space()));
  } else {
    std::cerr << "eval needs a flowchart or a command\n";
    return kUsage;
  }
  std::cout << render_outcome(o) << "\n";
  switch (o.status) {
    case EvalStatus::Value: return kPass;
    case EvalStatus::NoTruePath: return kNoTruePath;
    case EvalStatus::AmbiguousLabels: return kAmbiguous;
  }
  return kFail;
}

template <class Before, class After>
int verify(const Options& opt, Space space, Before&& before, After&& after) {
  const auto grid = point_grid(space, opt.grid.prefix, opt.grid.period);
  std::size_t agree = 0;
  std::optional<UpPoint> bad;
  for (const auto& x : grid) {
    if (before(x) == after(x))
      ++agree;
    else if (!bad)
      bad = x;
  }
  std::ostream& os = report_stream(opt);
  os << "eval agreement: " << agree << "/" << grid.size() << " points\n";
  if (bad) {
    os << "first mismatch: " << render_point(*bad) << "\n";
    return kFail;
  }
  return kPass;
}

Flowchart need_flowchart(const std::string& path) {
  Document d = load(path);
  if (auto* f = std::get_if<Flowchart>(&d)) return std::move(*f);
  throw Error(ErrorKind::Malformed, path + " is not a flowchart");
}

Command need_command(const std::string& path) {
  Document d = load(path);
  if (auto* c = std::get_if<Command>(&d)) return std::move(*c);
  throw Error(ErrorKind::Malformed, path + " is not a command");
}

int cmd_transform(const std::string& kind, const std::vector<std::string>& inputs, const Options& opt) {
  auto arity = [&](std::size_t n) {
    if (inputs.size() != n)
      throw CLI::ValidationError("transform " + kind, "expects " + std::to_string(n) + " input file(s)");
  };
  auto fc_eval = [](const Flowchart& f) { return [&f](const UpPoint& x) { return eval(f, x); }; };
  auto cmd_eval_fn = [](const Command& c) { return [&c](const UpPoint& x) { return eval(c, x); }; };

  if (kind == "monotone" || kind == "reduce" || kind == "to-command") {
    arity(1);
    const Flowchart f = need_flowchart(inputs[0]);
    if (kind == "to-command") {
      const Command c = flowchart_to_simple_command(f);
      emit(opt, encode_command(c).dump(2));
      return opt.verify ? verify(opt, f.space(), fc_eval(f), cmd_eval_fn(c)) : kPass;
    }
    const Flowchart g = kind == "monotone" ? to_monotone(f) : to_reduced(f);
    emit(opt, encode_flowchart(g).dump(2));
    return opt.verify ? verify(opt, f.space(), fc_eval(f), fc_eval(g)) : kPass;
  }
  if (kind == "strongly-total" || kind == "to-flowchart") {
    arity(1);
    const Command c = need_command(inputs[0]);
    if (kind == "to-flowchart") {
      const Flowchart f = command_to_flowchart(c);
      emit(opt, encode_flowchart(f).dump(2));
      return opt.verify ? verify(opt, c.space(), cmd_eval_fn(c), fc_eval(f)) : kPass;
    }
    const Command s = make_strongly_total(c);
    emit(opt, encode_command(s).dump(2));
    return opt.verify ? verify(opt, c.space(), cmd_eval_fn(c), cmd_eval_fn(s)) : kPass;
  }
  if (kind == "pullback" || kind == "vaught") {
    arity(2);
    const Flowchart f = need_flowchart(inputs[0]);
    const Space from = opt.space ? Space{*opt.space} : f.space();
    const ContinuousMap m = load_map(inputs[1], from);
    if (kind == "pullback") {
      const Flowchart g = pullback(f, m);
      emit(opt, encode_flowchart(g).dump(2));
      return opt.verify ? verify(opt, g.space(), [&](const UpPoint& x) { return eval(f, apply(m, x)); }, fc_eval(g))
                        : kPass;
    }
    const Flowchart g = vaught_transform(f, m, opt.depth);
    emit(opt, encode_flowchart(g).dump(2));
    return opt.verify ? verify(opt, f.space(), fc_eval(f), [&](const UpPoint& p) { return eval(g, apply(m, p)); })
                      : kPass;
  }
  throw CLI::ValidationError("transform", "unknown kind " + kind);
}

int cmd_rank(const std::string& path) {
  const Document doc = load(path);
  const SyntaxTree tree = syntax_tree(term_of(doc));
  for (const auto& [addr, rank] : borel_ranks(tree)) std::cout << render_address(addr) << "\t" << render_ordinal(rank) << "\n";
  return kPass;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string render_family(const Family& fam) {
  std::string out;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    if (i) out += " | ";
    out += fam[i].is_empty() ? "∅" : render_set(fam[i]);
  }
  return out;
}

int cmd_dot(const std::string& path) {
  const Document doc = load(path);
  const SyntaxTree tree = syntax_tree(term_of(doc));
  const auto ranks = borel_ranks(tree);
  std::map<Address, std::string> notes;
  if (const auto* f = std::get_if<Flowchart>(&doc))
    for (const auto& [addr, fam] : f->assign()) notes[addr] = "S = " + render_family(fam);
  if (const auto* c = std::get_if<Command>(&doc))
    for (const auto& [addr, data] : c->assign()) {
      std::string note;
      if (!data.tests.empty()) note = "U = " + render_family(data.tests);
      for (std::size_t n = 0; n < data.edges.size(); ++n)
        if (!data.edges[n].is_identity()) note += "\\nu" + std::to_string(n) + " = " + encode_map(data.edges[n]).dump();
      notes[addr] = note;
    }
  std::map<Address, std::size_t> ids;
  for (const auto& [addr, lab] : tree.nodes()) ids.emplace(addr, ids.size());
  std::cout << "digraph syntax_tree {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& [addr, lab] : tree.nodes()) {
    std::string head;
    switch (lab.kind) {
      case TermKind::Const: head = "q" + detail::quote(lab.name); break;
      case TermKind::Var: head = "x" + detail::quote(lab.name); break;
      case TermKind::Arrow: head = "~>"; break;
      case TermKind::Join: head = "join"; break;
      case TermKind::Veblen: head = "veb[" + render_ordinal(lab.index) + "]"; break;
    }
    std::string text = dot_escape(render_address(addr) + ": " + head) + "\\nrank " + dot_escape(render_ordinal(ranks.at(addr)));
    if (auto it = notes.find(addr); it != notes.end()) text += "\\n" + dot_escape(it->second);
    std::cout << "  n" << ids.at(addr) << " [label=\"" << text << "\"];\n";
  }
  for (const auto& [addr, lab] : tree.nodes()) {
    if (addr.empty()) continue;
    const Address parent(addr.begin(), addr.end() - 1);
    std::cout << "  n" << ids.at(parent) << " -> n" << ids.at(addr) << " [label=\"" << addr.back() << "\"];\n";
  }
  std::cout << "}\n";
  return kPass;
}

int cmd_fuzz(const Options& opt, std::size_t iterations, std::size_t term_depth, const std::string& mutate) {
  fuzz::Config cfg;
  cfg.seed = opt.seed;
  cfg.iterations = iterations;
  cfg.term_depth = term_depth;
  cfg.grid_prefix = opt.grid.prefix;
  cfg.grid_period = opt.grid.period;
  if (mutate == "monotone") cfg.mutation = fuzz::Mutation::Monotone;
  else if (mutate == "reduce") cfg.mutation = fuzz::Mutation::Reduce;
  else if (mutate != "none") throw CLI::ValidationError("--mutate", "expected none, monotone or reduce");
  const fuzz::Report r = fuzz::run(cfg);
  std::cout << "iterations: " << r.iterations << "\n";
  for (const auto& [suite, n] : r.checks) std::cout << "suite " << suite << ": " << n << " checked\n";
  for (const auto& c : r.failures)
    std::cout << "counterexample [" << c.suite << "] seed " << c.seed << ": " << c.detail << "\n";
  std::cout << (r.ok() ? "result: pass" : "result: fail (" + std::to_string(r.failures.size()) + " counterexamples)") << "\n";
  return r.ok() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terms, flowcharts and commands over clopen subsets of Cantor space"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Options opt;
  std::uint32_t space = 0;
  auto* space_opt = app.add_option("--space", space, "alphabet size k for inputs that do not declare one")->check(CLI::Range(1u, 64u));
  app.add_option("--grid-prefix", opt.grid.prefix, "verification grid: longest prefix")->check(CLI::PositiveNumber);
  app.add_option("--grid-period", opt.grid.period, "verification grid: longest period")->check(CLI::PositiveNumber);
  app.add_option("--depth", opt.depth, "depth bound for image computations")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "random seed");
  app.add_flag("--verify", opt.verify, "re-check pointwise eval agreement on the grid");
  app.add_option("--out", opt.out, "write the resulting document here");

  std::string path, point, kind, mutate = "none";
  std::vector<std::string> inputs;
  std::size_t iterations = 50, term_depth = 4;

  auto* check = app.add_subcommand("check", "report syntactic and semantic predicates");
  check->add_option("path", path)->required();
  auto* ev = app.add_subcommand("eval", "evaluate at an ultimately periodic point, e.g. 01(10)");
  ev->add_option("path", path)->required();
  ev->add_option("point", point)->required();
  auto* tr = app.add_subcommand("transform", "monotone | reduce | pullback | vaught | strongly-total | to-flowchart | to-command");
  tr->add_option("kind", kind)->required()->check(
      CLI::IsMember({"monotone", "reduce", "pullback", "vaught", "strongly-total", "to-flowchart", "to-command"}));
  tr->add_option("inputs", inputs)->required();
  auto* rank = app.add_subcommand("rank", "Borel rank of every node");
  rank->add_option("path", path)->required();
  auto* dot = app.add_subcommand("dot", "syntax tree as a DOT graph");
  dot->add_option("path", path)->required();
  auto* fz = app.add_subcommand("fuzz", "random invariant checks");
  fz->add_option("--iterations", iterations);
  fz->add_option("--term-depth", term_depth)->check(CLI::PositiveNumber);
  fz->add_option("--mutate", mutate, "inject a defect: none | monotone | reduce");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }
  if (space_opt->count()) opt.space = space;

  try {
    if (*check) return cmd_check(path, opt);
    if (*ev) return cmd_eval(path, point);
    if (*tr) return cmd_transform(kind, inputs, opt);
    if (*rank) return cmd_rank(path);
    if (*dot) return cmd_dot(path);
    if (*fz) return cmd_fuzz(opt, iterations, term_depth, mutate);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kUsage;
}
