#ifndef WADGE_TRANSDUCER_HPP
#define WADGE_TRANSDUCER_HPP

#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "wadge/error.hpp"
#include "wadge/space.hpp"

namespace wadge {

struct Edge {
  std::size_t to = 0;
  Word out;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A deterministic, total finite-state transducer on infinite words.
/// Productivity (every cycle emits a letter) makes it a total continuous
/// map k_in^w -> k_out^w.
class Transducer {
 public:
  /// table[s][a] is the edge taken from state s on input letter a.
  Transducer(Space in, Space out, std::size_t init, std::vector<std::vector<Edge>> table)
      : in_(in), out_(out), init_(init), table_(std::move(table)) {
    validate();
  }

  const Space& input_space() const { return in_; }
  const Space& output_space() const { return out_; }
  std::size_t init() const { return init_; }
  std::size_t state_count() const { return table_.size(); }
  const std::vector<std::vector<Edge>>& table() const { return table_; }
  const Edge& edge(std::size_t s, Letter a) const { return table_[s][a]; }

  /// State reached and output emitted after reading `w` from `s`.
  std::pair<std::size_t, Word> run(std::size_t s, const Word& w) const {
    Word out;
    for (Letter a : w) {
      const Edge& e = table_[s][a];
      out.insert(out.end(), e.out.begin(), e.out.end());
      s = e.to;
    }
    return {s, out};
  }

  friend bool operator==(const Transducer&, const Transducer&) = default;

 private:
  void validate() const {
    if (table_.empty()) throw Error(ErrorKind::Malformed, "transducer has no states");
    if (init_ >= table_.size()) throw Error(ErrorKind::Malformed, "initial state out of range");
    for (const auto& row : table_) {
      if (row.size() != in_.k) throw Error(ErrorKind::Malformed, "transition row does not cover the input alphabet");
      for (const auto& e : row) {
        if (e.to >= table_.size()) throw Error(ErrorKind::Malformed, "transition target out of range");
        check_word(out_, e.out);
      }
    }
    // Silent edges must not close a cycle.
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(table_.size(), Mark::White);
    auto dfs = [&](auto&& self, std::size_t s) -> void {
      mark[s] = Mark::Grey;
      for (const auto& e : table_[s]) {
        if (!e.out.empty()) continue;
        if (mark[e.to] == Mark::Grey) throw Error(ErrorKind::Malformed, "transducer is not productive (silent cycle)");
        if (mark[e.to] == Mark::White) self(self, e.to);
      }
      mark[s] = Mark::Black;
    };
    for (std::size_t s = 0; s < table_.size(); ++s)
      if (mark[s] == Mark::White) dfs(dfs, s);
  }

  Space in_;
  Space out_;
  std::size_t init_;
  std::vector<std::vector<Edge>> table_;
};

inline Transducer identity_transducer(Space s) {
  std::vector<Edge> row;
  for (Letter a = 0; a < s.k; ++a) row.push_back(Edge{0, Word{a}});
  return Transducer(s, s, 0, {row});
}

/// Image of an ultimately periodic point. The output period is found by
/// detecting the first repeated state at the start of a period pass.
inline UpPoint apply(const Transducer& t, const UpPoint& x) {
  require_same_space(t.input_space(), x.space(), "apply");
  auto [s, prefix] = t.run(t.init(), x.prefix());
  std::map<std::size_t, std::size_t> seen;  // state -> pass index
  std::vector<Word> passes;
  while (!seen.count(s)) {
    seen.emplace(s, passes.size());
    auto [next, out] = t.run(s, x.period());
    passes.push_back(std::move(out));
    s = next;
  }
  const std::size_t loop = seen.at(s);
  for (std::size_t i = 0; i < loop; ++i) prefix = concat(std::move(prefix), passes[i]);
  Word period;
  for (std::size_t i = loop; i < passes.size(); ++i) period = concat(std::move(period), passes[i]);
  if (period.empty()) throw Error(ErrorKind::Internal, "productive transducer emitted an empty period");
  return UpPoint(t.output_space(), std::move(prefix), std::move(period));
}

namespace detail {

// Preimage of a residual target from a given state; memoized on (state, residual).
class PreimageSolver {
 public:
  explicit PreimageSolver(const Transducer& t) : t_(t) {}

  std::vector<Word> solve(std::size_t s, const ClopenSet& target) {
    if (target.is_empty()) return {};
    if (target.is_full()) return {Word{}};
    auto key = std::make_pair(s, target.antichain());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Word> out;
    for (Letter a = 0; a < t_.input_space().k; ++a) {
      const Edge& e = t_.edge(s, a);
      for (auto& w : solve(e.to, quotient(target, e.out))) {
        Word full{a};
        full.insert(full.end(), w.begin(), w.end());
        out.push_back(std::move(full));
      }
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  const Transducer& t_;
  std::map<std::pair<std::size_t, std::vector<Word>>, std::vector<Word>> memo_;
};

}  // namespace detail

/// Exact t^{-1}[A]. Terminates because every output letter strictly shrinks
/// the residual target and silent edges are acyclic.
inline ClopenSet preimage(const Transducer& t, const ClopenSet& a) {
  require_same_space(t.output_space(), a.space(), "preimage");
  detail::PreimageSolver solver(t);
  return ClopenSet(t.input_space(), solver.solve(t.init(), a), a.level());
}

namespace detail {

// Image computation works on the subset automaton over output letters. A
// configuration is a transducer state plus output already produced but not
// yet matched.
class ImageSolver {
 public:
  using Config = std::pair<std::size_t, Word>;
  using Subset = std::vector<Config>;

  explicit ImageSolver(const Transducer& t) : t_(t) {}

  Subset start(const ClopenSet& a) const {
    std::set<Config> out;
    for (const auto& w : a.antichain()) out.insert(t_.run(t_.init(), w));
    return {out.begin(), out.end()};
  }

  Subset step(const Subset& p, Letter c) const {
    std::set<Config> out;
    for (const auto& cf : p) consume(cf, c, out);
    return {out.begin(), out.end()};
  }

  /// True when no output word drives the subset to the empty set, i.e. the
  /// residual image is the whole output space.
  bool universal(const Subset& p) {
    if (auto it = universal_.find(p); it != universal_.end()) return it->second;
    std::set<Subset> seen{p};
    std::deque<Subset> queue{p};
    bool ok = true;
    while (!queue.empty() && ok) {
      Subset cur = std::move(queue.front());
      queue.pop_front();
      for (Letter c = 0; c < t_.output_space().k; ++c) {
        Subset nxt = step(cur, c);
        if (nxt.empty()) {
          ok = false;
          break;
        }
        if (seen.insert(nxt).second) queue.push_back(std::move(nxt));
      }
    }
    universal_.emplace(p, ok);
    return ok;
  }

 private:
  void consume(const Config& cf, Letter c, std::set<Config>& out) const {
    if (!cf.second.empty()) {
      if (cf.second.front() == c) out.insert(Config{cf.first, Word(cf.second.begin() + 1, cf.second.end())});
      return;
    }
    for (Letter a = 0; a < t_.input_space().k; ++a) {
      const Edge& e = t_.edge(cf.first, a);
      consume(Config{e.to, e.out}, c, out);
    }
  }

  const Transducer& t_;
  std::map<Subset, bool> universal_;
};

}  // namespace detail

/// t[A], provided it is clopen and every output word up to `depth_bound`
/// letters settles as either fully covered or unreachable. Otherwise the
/// image is left undecided and an ErrorKind::Undecided error is raised.
inline ClopenSet image(const Transducer& t, const ClopenSet& a, std::size_t depth_bound) {
  require_same_space(t.input_space(), a.space(), "image");
  detail::ImageSolver solver(t);
  std::vector<Word> covered;
  std::vector<std::pair<Word, detail::ImageSolver::Subset>> frontier{{Word{}, solver.start(a)}};
  while (!frontier.empty()) {
    std::vector<std::pair<Word, detail::ImageSolver::Subset>> next;
    for (auto& [w, p] : frontier) {
      if (p.empty()) continue;
      if (solver.universal(p)) {
        covered.push_back(w);
        continue;
      }
      if (w.size() >= depth_bound)
        throw Error(ErrorKind::Undecided, "image not resolved within " + std::to_string(depth_bound) +
                                              " output letters (it may not be clopen)");
      for (Letter c = 0; c < t.output_space().k; ++c) next.emplace_back(concat(w, Word{c}), solver.step(p, c));
    }
    frontier = std::move(next);
  }
  return ClopenSet(t.output_space(), std::move(covered), a.level());
}

}  // namespace wadge

#endif  // WADGE_TRANSDUCER_HPP
