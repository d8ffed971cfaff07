#ifndef WADGE_FUZZ_HPP
#define WADGE_FUZZ_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wadge/codec.hpp"
#include "wadge/command.hpp"
#include "wadge/flowchart.hpp"
#include "wadge/generate.hpp"

namespace wadge::fuzz {

/// Deliberate defects for checking that the suites notice them.
enum class Mutation { None, Monotone, Reduce };

struct Config {
  std::uint64_t seed = 1;
  std::size_t iterations = 50;
  std::size_t term_depth = 4;
  std::size_t set_depth = 3;
  std::size_t grid_prefix = 4;
  std::size_t grid_period = 2;
  Mutation mutation = Mutation::None;
};

struct Counterexample {
  std::string suite;
  std::uint64_t seed;  // rerun with --seed <seed> --iterations 1
  std::string detail;
};

struct Report {
  std::size_t iterations = 0;
  std::map<std::string, std::size_t> checks;
  std::vector<Counterexample> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

inline Flowchart mutated_monotone(const Flowchart& f) {
  const auto d = domain_assignment(f);
  Flowchart::Assignment out;
  for (const auto& [addr, fam] : f.assign()) {
    Family g;
    for (const auto& s : fam) g.push_back(f.tree().label(addr).kind == TermKind::Arrow ? d.at(addr) : intersect(d.at(addr), s));
    out.emplace(addr, std::move(g));
  }
  return Flowchart(f.term(), f.space(), std::move(out), f.alphabet());
}

// Skips the successive differences entirely.
inline Flowchart mutated_reduced(const Flowchart& f) { return f; }

class Runner {
 public:
  Runner(const Config& cfg, Report& report) : cfg_(cfg), report_(report), grid_(point_grid(Space{2}, cfg.grid_prefix, cfg.grid_period)) {}

  void iteration(std::uint64_t seed) {
    seed_ = seed;
    gen::Rng rng(seed);
    gen::TermShape shape;
    shape.max_depth = cfg_.term_depth;
    const Space z{2};

    guard("term", [&] {
      gen::TermShape open = shape;
      open.variables = true;
      const Term t = gen::term(rng, open);
      expect("term", parse_term(render_term(t)) == t, "render/parse round trip", render_term(t));
      const SyntaxTree tree = syntax_tree(t);
      expect("term", is_well_formed(t) == is_well_formed(tree) && is_normal(t) == is_normal(tree),
             "predicates disagree between term and tree", render_term(t));
      const Term r = apply_fixed_point(t);
      expect("term", apply_fixed_point(r) == r, "fixed-point rewrite is not idempotent", render_term(t));
      expect("term", !is_well_formed(t) || is_well_formed(r), "fixed-point rewrite broke well-formedness", render_term(t));
      expect("term", term_from_tree(decode_tree(encode_tree(tree))) == t, "tree codec round trip", render_term(t));
    });

    guard("flowchart", [&] {
      const Term t = gen::normal_term(rng, shape);
      const Flowchart f = gen::flowchart(rng, t, z, cfg_.set_depth);
      const std::string name = encode_flowchart(f).dump();
      const auto d = domain_assignment(f);
      bool total = true, det = true;
      for (const auto& x : grid_) {
        const auto tr = trace(f, x);
        for (const auto& [addr, dom] : d) {
          const bool in_trace = std::find(tr.begin(), tr.end(), addr) != tr.end();
          if (in_trace != member(x, dom)) {
            fail("domains", "trace and domain disagree at " + render_address(addr) + " for " + render_point(x), name);
            return;
          }
        }
        const Outcome o = eval(f, x);
        total &= o.status != EvalStatus::NoTruePath;
        det &= o.status != EvalStatus::AmbiguousLabels;
      }
      count("domains");
      const Verdict vt = is_total(f), vd = is_deterministic(f);
      if (vt.holds && !total) fail("decide", "is_total holds but a grid point has no path", name);
      if (vd.holds && !det) fail("decide", "is_deterministic holds but a grid point is ambiguous", name);
      if (!vt.holds && eval(f, *vt.witness).status != EvalStatus::NoTruePath) fail("decide", "totality witness has a path", name);
      if (!vd.holds && eval(f, *vd.witness).status != EvalStatus::AmbiguousLabels)
        fail("decide", "determinism witness is not ambiguous", name);
      count("decide");

      const Flowchart m = cfg_.mutation == Mutation::Monotone ? mutated_monotone(f) : to_monotone(f);
      expect("monotone", static_cast<bool>(is_monotone(m)), "result is not monotone", name);
      for (const auto& x : grid_)
        if (eval(m, x) != eval(f, x)) {
          fail("monotone", "eval differs at " + render_point(x), name);
          break;
        }

      const Flowchart r = cfg_.mutation == Mutation::Reduce ? mutated_reduced(f) : to_reduced(f);
      expect("reduce", static_cast<bool>(is_reduced(r)), "join family not pairwise disjoint", name);
      for (const auto& [addr, fam] : f.assign()) {
        ClopenSet a = ClopenSet::empty(z), b = ClopenSet::empty(z);
        for (const auto& s : fam) a = set_union(a, s);
        for (const auto& s : r.family(addr)) b = set_union(b, s);
        if (!equals(a, b)) {
          fail("reduce", "union changed at " + render_address(addr), name);
          break;
        }
      }
      expect("codec", decode_flowchart(encode_flowchart(f)) == f, "flowchart codec round trip", name);
    });

    guard("translation", [&] {
      gen::TermShape plain = shape;
      plain.veblen = false;
      const Term t = gen::normal_term(rng, plain);
      const Flowchart f = gen::total_deterministic_flowchart(rng, t, z, cfg_.set_depth);
      const std::string name = encode_flowchart(f).dump();
      const Command c = flowchart_to_simple_command(f);
      const Flowchart back = command_to_flowchart(c);
      const Command st = make_strongly_total(c);
      expect("translation", static_cast<bool>(is_strongly_total(st)), "construction is not strongly total", name);
      for (const auto& x : grid_) {
        const Outcome o = eval(f, x);
        if (eval(back, x) != o || eval(st, x) != o) {
          fail("translation", "eval differs at " + render_point(x), name);
          break;
        }
      }
      expect("codec", decode_command(encode_command(st)) == st, "command codec round trip", name);
    });

    guard("command", [&] {
      const Term t = gen::normal_term(rng, shape);
      const Command c = gen::command(rng, t, z, cfg_.set_depth);
      const std::string name = encode_command(c).dump();
      const Flowchart f = command_to_flowchart(c);
      for (const auto& x : grid_)
        if (eval(f, x) != eval(c, x)) {
          fail("command", "command and its flowchart disagree at " + render_point(x), name);
          break;
        }
      expect("codec", decode_command(encode_command(c)) == c, "command codec round trip", name);
    });
  }

 private:
  template <class Fn>
  void guard(const std::string& suite, Fn&& fn) {
    try {
      fn();
      count(suite);
    } catch (const std::exception& e) {
      fail(suite, std::string("exception: ") + e.what(), "");
    }
  }

  void count(const std::string& suite) { ++report_.checks[suite]; }
  void fail(const std::string& suite, const std::string& what, const std::string& input) {
    report_.failures.push_back({suite, seed_, input.empty() ? what : what + " in " + input});
  }
  void expect(const std::string& suite, bool ok, const std::string& what, const std::string& input) {
    if (!ok) fail(suite, what, input);
  }

  const Config& cfg_;
  Report& report_;
  std::vector<UpPoint> grid_;
  std::uint64_t seed_ = 0;
};

}  // namespace detail

inline Report run(const Config& cfg) {
  Report report;
  detail::Runner runner(cfg, report);
  for (std::size_t i = 0; i < cfg.iterations; ++i) {
    runner.iteration(cfg.seed + i);
    ++report.iterations;
  }
  return report;
}

}  // namespace wadge::fuzz

#endif  // WADGE_FUZZ_HPP
