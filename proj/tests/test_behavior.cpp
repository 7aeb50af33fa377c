#include <functional>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "snaptrace/astdiff.hpp"
#include "snaptrace/behavior.hpp"
#include "snaptrace/cfg.hpp"
#include "snaptrace/cluster.hpp"
#include "snaptrace/error.hpp"
#include "support.hpp"
#include "tree_oracles.hpp"

using namespace snaptrace;
using namespace snaptrace::behavior;
using js::Node;
using js::NodeKind;
using testsupport::parse_or_throw;

namespace {

// A session whose saves carry the given logic sources, plus a resolver for them.
struct Fixture {
  SessionRecord session;
  std::map<std::string, Snapshot> blobs;

  explicit Fixture(const std::vector<std::string>& sources, const std::string& path = "pages/a/a.js") {
    session.session_id = "s1";
    std::uint64_t id = 0;
    for (const auto& src : sources) {
      auto snap = Snapshot::from_files({{path, src}});
      blobs.emplace(snap.id(), snap);
      DebugEvent e;
      e.event_id = ++id;
      e.kind = EventKind::Save;
      e.snapshot_id = snap.id();
      e.at = from_millis(static_cast<std::int64_t>(id) * 1000);
      session.apply(e);
    }
  }

  [[nodiscard]] SnapshotResolver resolver() const {
    return [this](const std::string& id) {
      auto it = blobs.find(id);
      if (it == blobs.end()) throw Error(Errc::NotFound, id);
      return it->second;
    };
  }
};

std::vector<Behavior> labels_of(const std::vector<std::string>& sources) {
  Fixture f(sources);
  std::vector<Behavior> out;
  for (const auto& l : label_sequence(f.session, f.resolver()).labels) out.push_back(l.label);
  return out;
}

}  // namespace

TEST_CASE("behavior labels follow the priority rules") {
  using B = Behavior;
  CHECK(labels_of({"var x = 1;", "var x = 1;"}) == std::vector<B>{B::NoChange});
  CHECK(labels_of({"var x = 1;", "var   x=1 ;\n"}) == std::vector<B>{B::NoChange});
  CHECK(labels_of({"var x = 1;", "var x = ;", "var x = 1;"}) == std::vector<B>{B::SyntaxBreak, B::SyntaxFix});
  CHECK(labels_of({"f(1);", "f(2);", "f(1);"}) == std::vector<B>{B::ParamTweak, B::Revert});
  CHECK(labels_of({"f(1);", "f(1); if (x) { g(); }"}) == std::vector<B>{B::StructEdit});
  CHECK(labels_of({"wx.getA(1);", "wx.getB(1);"}) == std::vector<B>{B::ApiChange});
  CHECK(labels_of({"var a = b;", "var a = c;"}) == std::vector<B>{B::ParamTweak});
  CHECK(labels_of({"f(", "f("}) == std::vector<B>{B::NoChange});
  CHECK(labels_of({"f(", "g("}) == std::vector<B>{B::SyntaxBreak});
  CHECK(labels_of({"var x = 1;"}).empty());
}

TEST_CASE("an added or removed logic file is structural") {
  Fixture f({"var x = 1;"});
  auto second = Snapshot::from_files({{"pages/a/a.js", "var x = 1;"}, {"pages/b/b.js", "g();"}});
  f.blobs.emplace(second.id(), second);
  f.session.apply(DebugEvent{2, EventKind::Save, second.id(), std::nullopt, std::nullopt, from_millis(5000)});
  auto seq = label_sequence(f.session, f.resolver());
  REQUIRE(seq.labels.size() == 1);
  CHECK(seq.labels[0].label == Behavior::StructEdit);
}

TEST_CASE("label_sequence needs at least one save") {
  SessionRecord empty;
  empty.apply(DebugEvent{1, EventKind::Run, std::nullopt, std::nullopt, std::nullopt, {}});
  try {
    label_sequence(empty, [](const std::string&) -> Snapshot { throw Error(Errc::NotFound, "x"); });
    FAIL("expected EmptySession");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptySession);
  }
}

TEST_CASE("label count is saves minus one") {
  const std::vector<std::string> pool{"f(1);", "f(2);", "f(1); g();", "f(", "wx.a(1);", "wx.b(1);",
                                      "var x = 1;", "if (a) { b(); }"};
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::string> sources;
    auto n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) sources.push_back(pool[rng() % pool.size()]);
    Fixture f(sources);
    auto seq = label_sequence(f.session, f.resolver());
    CHECK(seq.labels.size() == n - 1);
    for (std::size_t i = 0; i < seq.labels.size(); ++i) {
      CHECK(seq.labels[i].from_event_id == i + 1);
      CHECK(seq.labels[i].to_event_id == i + 2);
    }
  }
}

TEST_CASE("direction annotation") {
  const std::string ref = "var a = 1; var b = 2; var c = 3;";
  auto reference = Snapshot::from_files({{"pages/a/a.js", ref}});
  std::vector<std::string> sources{"var a = 9; var b = 9; var c = 9;", "var a = 1; var b = 9; var c = 9;",
                                   "var a = 1; var b = 2; var c = 9;", ref, "var a = 1; var b = 2; var c = 4;",
                                   "var a = ", "var a = 1; var b = 2; var c = 9;"};
  // Independent distances from the forest recursion.
  auto ref_tree = parse_or_throw(ref);
  std::vector<std::optional<std::uint64_t>> expected_distance;
  for (const auto& s : sources) {
    auto outcome = js::parse(s);
    if (!js::parsed_ok(outcome)) {
      expected_distance.emplace_back();
    } else {
      expected_distance.emplace_back(oracle::ForestRecursion().distance(js::tree_of(outcome), ref_tree));
    }
  }
  CHECK(expected_distance[0] == std::optional<std::uint64_t>(3));
  CHECK(expected_distance[3] == std::optional<std::uint64_t>(0));
  CHECK(expected_distance[4] == std::optional<std::uint64_t>(1));

  Fixture f(sources);
  auto dirs = annotate_direction(f.session, f.resolver(), reference);
  REQUIRE(dirs.size() == sources.size());
  using D = Direction;
  std::vector<D> got;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    got.push_back(dirs[i].direction);
    CHECK(dirs[i].distance_to_reference == expected_distance[i]);
    CHECK(dirs[i].event_id == i + 1);
    CHECK_FALSE(dirs[i].approximate);
  }
  // The save after the broken one compares with the last parseable one (distance 1).
  CHECK(got == std::vector<D>{D::Neutral, D::Toward, D::Toward, D::Toward, D::Away, D::Unknown, D::Neutral});
}

TEST_CASE("equal distances are neutral and missing files cost their size") {
  auto reference = Snapshot::from_files({{"pages/a/a.js", "f(1);"}});
  Fixture f({"f(2);", "f(3);"});
  auto dirs = annotate_direction(f.session, f.resolver(), reference);
  CHECK(dirs[0].direction == Direction::Neutral);
  CHECK(dirs[1].direction == Direction::Neutral);

  auto extra = Snapshot::from_files({{"pages/a/a.js", "f(1);"}, {"x.js", "g(1, 2);"}});
  CHECK(snapshot_distance(extra, reference).distance == parse_or_throw("g(1, 2);").size());

  auto broken = Snapshot::from_files({{"pages/a/a.js", "f("}});
  try {
    annotate_direction(f.session, f.resolver(), broken);
    FAIL("expected ReferenceUnparseable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ReferenceUnparseable);
  }
}

namespace {

// Independent count: iterative walk collecting dotted callee names.
std::uint64_t walk_count(const Node& root, const std::string& prefix) {
  std::uint64_t n = 0;
  std::vector<const Node*> stack{&root};
  while (!stack.empty()) {
    const Node* cur = stack.back();
    stack.pop_back();
    for (const auto& c : cur->children) stack.push_back(&c);
    if (cur->kind != NodeKind::Call) continue;
    const Node* callee = &cur->children[0];
    if (callee->kind != NodeKind::Member) continue;
    while (callee->kind == NodeKind::Member) callee = &callee->children[0];
    if (callee->kind == NodeKind::Identifier && callee->value == prefix) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("api statistics") {
  auto s = api_stats({parse_or_throw("wx.request(); wx.request(); wx.login();")}, {"wx"});
  CHECK(s.calls == std::map<std::string, std::uint64_t>{{"wx.login", 1}, {"wx.request", 2}});
  CHECK(s.total_calls == 3);

  auto none = api_stats({parse_or_throw("f(); a.b();")}, {"wx"});
  CHECK(none.calls.empty());
  CHECK(none.total_calls == 0);

  auto nested = api_stats({parse_or_throw("wx.a(wx.b());")}, {"wx"});
  CHECK(nested.calls == std::map<std::string, std::uint64_t>{{"wx.a", 1}, {"wx.b", 1}});

  auto deep = api_stats({parse_or_throw("wx.cloud.callFunction({}); wx(); my.x();")}, {"wx", "my"});
  CHECK(deep.calls == std::map<std::string, std::uint64_t>{{"my.x", 1}, {"wx.cloud.callFunction", 1}});

  CHECK_THROWS_AS(api_stats({parse_or_throw("f();")}, {}), std::invalid_argument);
}

TEST_CASE("api statistics agree with an independent walk over the corpus") {
  std::uint64_t seen = 0;
  for (const auto& [name, src] : testsupport::load_corpus(SNAPTRACE_CORPUS_DIR)) {
    auto tree = parse_or_throw(src);
    auto s = api_stats({tree}, {"wx"});
    std::uint64_t sum = 0;
    for (const auto& [api, n] : s.calls) sum += n;
    CHECK(s.total_calls == sum);
    CHECK(s.total_calls == walk_count(tree, "wx"));
    seen += s.total_calls;
  }
  CHECK(seen > 0);
}

namespace {

Cfg cfg_of(const std::string& body) {
  auto prog = parse_or_throw("function f(x) { " + body + " }");
  return extract_cfg(prog.children.front());
}

std::size_t edges_labelled(const Cfg& c, EdgeLabel l) {
  std::size_t n = 0;
  for (const auto& e : c.edges) n += e.label == l ? 1 : 0;
  return n;
}

void check_invariants(const Cfg& c) {
  CHECK(c.count(CfgNodeKind::Entry) == 1);
  CHECK(c.count(CfgNodeKind::Exit) == 1);
  CHECK(c.out_degree(1) == 0);
  for (const auto& n : c.nodes) {
    if (n.kind != CfgNodeKind::Branch) continue;
    std::multiset<EdgeLabel> labels;
    for (const auto& e : c.edges)
      if (e.from == n.id) labels.insert(e.label);
    CHECK(labels == std::multiset<EdgeLabel>{EdgeLabel::True, EdgeLabel::False});
  }
  std::set<std::size_t> reached{0};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : c.edges) {
      if (reached.count(e.from) && reached.insert(e.to).second) grew = true;
    }
  }
  CHECK(reached.size() == c.nodes.size());
}

}  // namespace

TEST_CASE("control flow graph examples") {
  auto ret = cfg_of("return 1;");
  CHECK(ret.nodes.size() == 3);
  CHECK(ret.edges.size() == 2);
  check_invariants(ret);

  auto branch = cfg_of("if (x) { a(); } else { b(); }");
  CHECK(branch.nodes.size() == 6);
  CHECK(branch.edges.size() == 6);
  CHECK(branch.count(CfgNodeKind::Branch) == 1);
  CHECK(branch.count(CfgNodeKind::Merge) == 1);
  check_invariants(branch);

  auto loop = cfg_of("while (x) { a(); }");
  CHECK(edges_labelled(loop, EdgeLabel::Back) == 1);
  CHECK(loop.count(CfgNodeKind::LoopHead) == 1);
  check_invariants(loop);

  auto empty_loop = cfg_of("while (x) {}");
  CHECK(edges_labelled(empty_loop, EdgeLabel::Back) == 1);
  check_invariants(empty_loop);

  auto for_loop = cfg_of("for (var i = 0; i < 3; i++) { if (i) { a(); } }");
  CHECK(edges_labelled(for_loop, EdgeLabel::Back) == 1);
  CHECK(for_loop.conditions() == std::vector<std::string>{"i < 3", "i"});
  check_invariants(for_loop);

  auto dead = cfg_of("return 1; a(); b();");
  CHECK(dead.nodes.size() == 3);
  CHECK(dead.unreachable.size() == 2);
  check_invariants(dead);

  auto both_return = cfg_of("if (x) { return 1; } else { return 2; } c();");
  CHECK(both_return.unreachable.size() == 1);
  CHECK(both_return.count(CfgNodeKind::Merge) == 0);
  check_invariants(both_return);

  auto arrow = parse_or_throw("var g = (a) => { return a; };");
  auto fns = named_functions(arrow);
  REQUIRE(fns.size() == 1);
  CHECK(fns[0].first == "g");
  CHECK(extract_cfg(*fns[0].second).nodes.size() == 3);
  CHECK_THROWS_AS(extract_cfg(parse_or_throw("f();")), std::invalid_argument);
}

TEST_CASE("control flow graphs of every corpus function satisfy the invariants") {
  std::size_t functions = 0;
  for (const auto& [name, src] : testsupport::load_corpus(SNAPTRACE_CORPUS_DIR)) {
    auto tree = parse_or_throw(src);
    for (const auto& [fname, fn] : named_functions(tree)) {
      if (fn->children.back().kind != NodeKind::Block) continue;
      INFO(name, " ", fname);
      check_invariants(extract_cfg(*fn));
      ++functions;
    }
  }
  CHECK(functions > 50);
}

TEST_CASE("control flow graph diffs") {
  auto a = cfg_of("if (x > 1) { a(); } while (y) { b(); }");
  CHECK(cfg_diff(a, a).empty());

  auto cond = cfg_diff(cfg_of("if (x > 1) { a(); }"), cfg_of("if (x > 2) { a(); }"));
  CHECK(cond.node_count_delta == 0);
  CHECK(cond.edge_count_delta == 0);
  CHECK(cond.changed_branch_conditions == std::vector<std::pair<std::string, std::string>>{{"x > 1", "x > 2"}});
  CHECK_FALSE(cond.empty());

  // Before: Entry a Exit (3 nodes). After: Entry a LoopHead b Exit (5 nodes).
  auto loop = cfg_diff(cfg_of("a();"), cfg_of("a(); while (y) { b(); }"));
  CHECK(loop.node_count_delta == 2);
  CHECK(loop.edge_count_delta == 3);
  CHECK(loop.added_loops == 1);
  CHECK(loop.removed_loops == 0);

  auto shape = cfg_diff(cfg_of("if (x) { a(); b(); }"), cfg_of("if (x) { a(); } b();"));
  CHECK(shape.node_count_delta == 0);
  CHECK(shape.edge_count_delta == 0);
  CHECK(shape.shape_changed);

  auto text_only = cfg_diff(cfg_of("if (x) { a(); }"), cfg_of("if (x) { z(1); }"));
  CHECK(text_only.empty());
}

namespace {

std::size_t lev_oracle(const std::string& a, const std::string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t r = std::min({go(i - 1, j) + 1, go(i, j - 1) + 1, go(i - 1, j - 1) + (a[i - 1] != b[j - 1])});
    memo[key] = r;
    return r;
  };
  return go(a.size(), b.size());
}

std::string random_labels(std::mt19937_64& rng) {
  static const std::string symbols = "NPASRBF";
  std::string s(rng() % 21, 'N');
  for (auto& c : s) c = symbols[rng() % symbols.size()];
  return s;
}

}  // namespace

TEST_CASE("levenshtein is a metric and matches the recursive definition") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = random_labels(rng), b = random_labels(rng), c = random_labels(rng);
    CHECK(levenshtein(a, b) == lev_oracle(a, b));
    CHECK(levenshtein(a, a) == 0);
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
    if (a != b) CHECK(levenshtein(a, b) > 0);
  }
}

TEST_CASE("clustering with k equal to the session count") {
  std::map<std::string, std::string> in{{"a", "PP"}, {"b", "S"}, {"c", "PPR"}};
  auto out = cluster_sessions(in, 3, 1);
  REQUIRE(out.clusters.size() == 3);
  for (const auto& c : out.clusters) {
    CHECK(c.member_session_ids.size() == 1);
    CHECK(c.member_session_ids.front() == c.medoid_session_id);
    CHECK(c.intra_mean_distance == 0.0);
  }
  CHECK_FALSE(out.silhouette.has_value());
  CHECK_FALSE(cluster_sessions(in, 1, 1).silhouette.has_value());
}

TEST_CASE("two identical groups are recovered for any seed") {
  std::map<std::string, std::string> in{{"s1", "PPPR"}, {"s2", "SSS"}, {"s3", "PPPR"},
                                        {"s4", "SSS"},  {"s5", "PPPR"}, {"s6", "SSS"}};
  std::vector<std::string> ids;
  for (const auto& [id, _] : in) ids.push_back(id);
  // Brute force over every pair of medoids.
  std::uint64_t best = UINT64_MAX;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      std::uint64_t cost = 0;
      for (const auto& id : ids) {
        cost += std::min(levenshtein(in[id], in[ids[i]]), levenshtein(in[id], in[ids[j]]));
      }
      best = std::min(best, cost);
    }
  }
  CHECK(best == 0);
  const std::set<std::set<std::string>> groups{{"s1", "s3", "s5"}, {"s2", "s4", "s6"}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto out = cluster_sessions(in, 2, seed);
    CHECK(out.cost == best);
    std::set<std::set<std::string>> got;
    for (const auto& c : out.clusters) {
      got.emplace(c.member_session_ids.begin(), c.member_session_ids.end());
      CHECK(c.intra_mean_distance == 0.0);
    }
    CHECK(got == groups);
    REQUIRE(out.silhouette.has_value());
    CHECK(*out.silhouette == doctest::Approx(1.0));
  }
}

TEST_CASE("clustering is deterministic and partitions the sessions") {
  std::mt19937_64 rng(8);
  std::map<std::string, std::string> in;
  for (int i = 0; i < 25; ++i) in["sess" + std::to_string(100 + i)] = random_labels(rng);
  for (std::size_t k = 1; k <= 6; ++k) {
    auto first = cluster_sessions(in, k, 1234);
    auto second = cluster_sessions(in, k, 1234);
    CHECK(first.clusters == second.clusters);
    std::multiset<std::string> all;
    for (const auto& c : first.clusters) {
      all.insert(c.member_session_ids.begin(), c.member_session_ids.end());
      CHECK(std::find(c.member_session_ids.begin(), c.member_session_ids.end(), c.medoid_session_id) !=
            c.member_session_ids.end());
    }
    CHECK(all.size() == in.size());
    CHECK(std::set<std::string>(all.begin(), all.end()).size() == in.size());
    if (first.silhouette) {
      CHECK(*first.silhouette >= -1.0);
      CHECK(*first.silhouette <= 1.0);
    }
  }
  try {
    cluster_sessions(in, 26, 1);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::KTooLarge);
  }
}
