#include "fintop/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fintop {

// ---- serialization ------------------------------------------------------

ordered_json space_to_json(const FiniteSpace& s) {
  ordered_json j;
  j["points"] = s.labels();
  ordered_json h = ordered_json::array();
  for (const auto& [below, above] : s.hasse())
    h.push_back(ordered_json::array({s.label(below), s.label(above)}));
  j["hasse"] = std::move(h);
  j["kind"] = s.kind();
  return j;
}

SpacePtr space_from_json(const ordered_json& j) {
  const std::vector<std::string> labels = j.at("points").get<std::vector<std::string>>();
  std::unordered_map<std::string, int> pos;
  for (size_t i = 0; i < labels.size(); ++i)
    if (!pos.emplace(labels[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate point label: " + labels[i]);
  std::vector<std::pair<int, int>> rel;
  for (const auto& e : j.at("hasse")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("hasse entries must be [below, above] label pairs");
    const std::string a = e[0].get<std::string>(), b = e[1].get<std::string>();
    const auto ia = pos.find(a), ib = pos.find(b);
    if (ia == pos.end()) throw std::invalid_argument("hasse pair uses unknown label: " + a);
    if (ib == pos.end()) throw std::invalid_argument("hasse pair uses unknown label: " + b);
    rel.emplace_back(ia->second, ib->second);
  }
  return make_space(labels, rel, j.value("kind", std::string("explicit")));
}

ordered_json fence_to_json(const Fence& f) {
  ordered_json j;
  j["domain"] = space_to_json(*f.dom);
  j["codomain"] = space_to_json(*f.cod);
  j["maps"] = f.maps;
  ordered_json dirs = ordered_json::array();
  for (Dir d : f.dirs) dirs.push_back(d == Dir::le ? "le" : "ge");
  j["dirs"] = std::move(dirs);
  return j;
}

Fence fence_from_json(const ordered_json& j) {
  Fence f;
  f.dom = space_from_json(j.at("domain"));
  f.cod = space_from_json(j.at("codomain"));
  f.maps = j.at("maps").get<std::vector<std::vector<int>>>();
  if (f.maps.empty()) throw std::invalid_argument("fence needs at least one map");
  for (const auto& d : j.at("dirs")) {
    const std::string s = d.get<std::string>();
    if (s == "le")
      f.dirs.push_back(Dir::le);
    else if (s == "ge")
      f.dirs.push_back(Dir::ge);
    else
      throw std::invalid_argument("fence direction must be le or ge, got " + s);
  }
  return f;
}

namespace {

ordered_json limits_to_json(const Limits& l) {
  return ordered_json{{"visited", l.max_visited}, {"seconds", l.max_seconds}};
}

const char* reason_name(RefuteReason r) {
  return r == RefuteReason::obstruction ? "obstruction" : "exhaustion";
}

const char* decision_name(Verdict v) {
  switch (v) {
    case Verdict::yes: return "planner";
    case Verdict::no: return "no-planner";
    default: return "inconclusive";
  }
}

ordered_json labels_of(const FiniteSpace& s, const Bits& mask) {
  ordered_json out = ordered_json::array();
  mask.for_each([&](int p) { out.push_back(s.label(p)); });
  return out;
}

}  // namespace

ordered_json report_to_json(const SearchReport& r) {
  ordered_json j;
  j["invariant"] = r.invariant == Invariant::tc ? "tc" : "cat";
  j["space"] = space_to_json(*r.space);
  j["target"] = r.square_target ? "square" : "self";
  j["value"] = r.value;
  j["status"] = r.proven ? "proven" : "upper-bound-only";
  j["convention"] = "unreduced";
  j["limits"] = limits_to_json(r.limits);
  ordered_json blocks = ordered_json::array(), wits = ordered_json::array();
  for (const Witness& w : r.upper) {
    blocks.push_back(labels_of(*r.target, w.block));
    wits.push_back(fence_to_json(w.fence));
  }
  j["upper"] = ordered_json{{"blocks", std::move(blocks)}, {"witnesses", std::move(wits)}};
  if (r.lower) {
    const auto& lo = *r.lower;
    ordered_json refs = ordered_json::array();
    for (const Refutation& q : lo.refutations)
      refs.push_back(ordered_json{{"index", q.index},
                                  {"rgs", q.rgs},
                                  {"block", q.block},
                                  {"reason", reason_name(q.reason)}});
    j["lower"] = ordered_json{{"k", lo.k},
                              {"cells", lo.cells},
                              {"canonical_assignments", lo.canonical_assignments},
                              {"refuted_obstruction", lo.refuted_obstruction},
                              {"refuted_exhaustion", lo.refuted_exhaustion},
                              {"inconclusive", lo.inconclusive},
                              {"refutations", std::move(refs)}};
  }
  j["notes"] = r.notes;
  return j;
}

ordered_json exploration_to_json(const ExplorationReport& r) {
  ordered_json j;
  j["kind"] = "circle-exploration";
  j["n"] = r.n;
  j["antipode"] = r.antipode_rule;
  j["space"] = space_to_json(*r.factor);
  j["limits"] = limits_to_json(r.limits);
  j["covers"] = r.covers;
  ordered_json sets = ordered_json::array();
  for (const ExplorationSet& s : r.sets) {
    ordered_json sj;
    sj["name"] = s.name;
    sj["points"] = labels_of(*r.square_space, s.points);
    sj["open"] = s.open;
    sj["row_column_obstruction"] = s.obstruction;
    sj["decision"] = decision_name(s.decision.verdict);
    sj["visited"] = s.decision.visited;
    sj["note"] = s.decision.note;
    if (s.decision.verdict == Verdict::yes && s.decision.fence)
      sj["fence"] = fence_to_json(*s.decision.fence);
    sets.push_back(std::move(sj));
  }
  j["sets"] = std::move(sets);
  return j;
}

ordered_json core_trace_to_json(SpacePtr s, const CoreTrace& t) {
  ordered_json j;
  j["kind"] = "core-trace";
  j["space"] = space_to_json(*s);
  ordered_json steps = ordered_json::array();
  for (const CoreTrace::Step& st : t.steps)
    steps.push_back(ordered_json{{"removed", s->label(st.removed)},
                                 {"via", s->label(st.target)},
                                 {"dir", st.dir == Dir::le ? "up" : "down"}});
  j["steps"] = std::move(steps);
  j["core"] = space_to_json(*make_subspace(s, t.core, "core(" + s->kind() + ")").space);
  return j;
}

ordered_json homology_to_json(const SimplicialComplex& k) {
  ordered_json j;
  j["kind"] = "homology";
  j["space"] = space_to_json(*k.base);
  ordered_json counts = ordered_json::array();
  for (int d = 0; d <= k.dim(); ++d) counts.push_back(k.count_of_dim(d));
  j["simplex_counts"] = std::move(counts);
  j["euler_characteristic"] = euler_characteristic(k);
  const BettiNumbers b = betti_numbers(k);
  j["b0"] = b.b0;
  j["b1"] = b.b1;
  return j;
}

std::string canonical_text(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---- certificate verification ------------------------------------------

namespace {

struct Checker {
  CertifyResult r;
  bool check(bool cond, const std::string& msg) {
    ++r.checks;
    if (!cond) {
      r.ok = false;
      r.problems.push_back(msg);
    }
    return cond;
  }
  void fail(const std::string& msg) {
    r.ok = false;
    r.problems.push_back(msg);
  }
};

// Verifies one goodness fence against the rebuilt block subspace: domain
// and codomain serialize identically, every step is continuous in the
// rebuilt spaces, and the endpoints are the inclusion/constant (cat) or
// the two projections (tc).
void verify_witness(Checker& c, bool is_tc, SpacePtr x, SpacePtr target,
                    const std::optional<Square>& sq, const Bits& mask,
                    const ordered_json& wj, const std::string& who) {
  Fence f;
  try {
    f = fence_from_json(wj);
  } catch (const std::exception& e) {
    c.fail(who + ": " + e.what());
    return;
  }
  const Subspace sub = make_subspace(target, mask);
  c.check(space_to_json(*f.dom) == space_to_json(*sub.space),
          who + ": fence domain is not the block subspace");
  c.check(space_to_json(*f.cod) == space_to_json(*x),
          who + ": fence codomain is not the input space");
  Fence g = f;  // judged against the rebuilt spaces, not the embedded copies
  g.dom = sub.space;
  g.cod = x;
  {
    const auto errs = check_fence(g);
    ++c.r.checks;
    if (!errs.empty()) {
      c.r.ok = false;
      for (const auto& e : errs) c.r.problems.push_back(who + ": " + e);
      return;
    }
  }
  const size_t pts = sub.to_parent.size();
  if (g.front().size() != pts) return;  // arity problems already reported
  bool ok_front = true, ok_back = true;
  for (size_t s = 0; s < pts; ++s) {
    if (is_tc) {
      if (g.front()[s] != sq->first(sub.to_parent[s])) ok_front = false;
      if (g.back()[s] != sq->second(sub.to_parent[s])) ok_back = false;
    } else {
      if (g.front()[s] != sub.to_parent[s]) ok_front = false;
      if (g.back()[s] != g.back()[0]) ok_back = false;
    }
  }
  c.check(ok_front, who + (is_tc ? ": fence must start at the first projection"
                                 : ": fence must start at the inclusion"));
  c.check(ok_back, who + (is_tc ? ": fence must end at the second projection"
                                : ": fence must end at a constant map"));
}

CertifyResult certify_search_report(const ordered_json& j) {
  Checker c;
  try {
    const std::string inv_s = j.at("invariant").get<std::string>();
    if (!c.check(inv_s == "cat" || inv_s == "tc", "invariant must be cat or tc")) return c.r;
    const bool is_tc = inv_s == "tc";

    SpacePtr x;
    try {
      x = space_from_json(j.at("space"));
    } catch (const std::exception& e) {
      c.fail(std::string("space: ") + e.what());
      return c.r;
    }
    c.check(x->is_connected(), "input space must be connected");

    c.check(j.at("target").get<std::string>() == (is_tc ? "square" : "self"),
            "target tag does not match the invariant");
    std::optional<Square> sq;
    SpacePtr target = x;
    if (is_tc) {
      sq = make_square(x);
      target = sq->space;
    }

    const long long value = j.at("value").get<long long>();
    if (!c.check(value >= 1 && value <= target->size(),
                 "value must lie between 1 and the target size"))
      return c.r;
    const std::string status = j.at("status").get<std::string>();
    if (!c.check(status == "proven" || status == "upper-bound-only",
                 "status must be proven or upper-bound-only"))
      return c.r;
    const bool proven = status == "proven";
    c.check(j.at("convention").get<std::string>() == "unreduced",
            "convention must be unreduced");
    {
      const auto& lim = j.at("limits");
      c.check(lim.at("visited").get<double>() >= 0 && lim.at("seconds").get<double>() >= 0,
              "limits must be nonnegative");
    }

    const std::vector<int> cells = target->maximal_points().to_indices();
    const int M = static_cast<int>(cells.size());

    const auto& upper = j.at("upper");
    const auto& blocks = upper.at("blocks");
    const auto& wits = upper.at("witnesses");
    if (!c.check(blocks.is_array() && static_cast<long long>(blocks.size()) == value,
                 "number of blocks must equal the reported value"))
      return c.r;
    if (!c.check(wits.is_array() && wits.size() == blocks.size(),
                 "each block needs exactly one witness fence"))
      return c.r;

    Bits covered(target->size());
    std::vector<Bits> block_masks;
    for (size_t i = 0; i < blocks.size(); ++i) {
      Bits m(target->size());
      bool labels_ok = blocks[i].is_array();
      if (labels_ok)
        for (const auto& lbl : blocks[i]) {
          const auto idx = target->index_of(lbl.get<std::string>());
          if (!idx) {
            labels_ok = false;
            break;
          }
          m.set(*idx);
        }
      if (!c.check(labels_ok, "block " + std::to_string(i) + " uses unknown labels")) continue;
      c.check(m.any(), "block " + std::to_string(i) + " is empty");
      c.check(target->is_open(m), "block " + std::to_string(i) + " is not open");
      covered |= m;
      block_masks.push_back(m);
    }
    c.check(covered == Bits::full(target->size()), "blocks do not cover the target");
    for (size_t i = 0; i < wits.size() && i < block_masks.size(); ++i)
      verify_witness(c, is_tc, x, target, sq, block_masks[i], wits[i],
                     "witness " + std::to_string(i));

    if (value == 1) {
      c.check(!j.contains("lower"), "a one-block covering carries no lower record");
      c.check(proven, "a verified one-block covering is proven by construction");
    } else {
      if (!c.check(j.contains("lower"), "missing lower record")) return c.r;
      const auto& lo = j.at("lower");
      const long long k = lo.at("k").get<long long>();
      if (!c.check(k == value - 1, "lower record must sit directly below the value"))
        return c.r;
      c.check(lo.at("cells").get<long long>() == M,
              "cell count does not match the maximal points of the target");
      const long long canon = lo.at("canonical_assignments").get<long long>();
      c.check(canon == stirling2(M, static_cast<int>(k)),
              "canonical assignment count mismatch");
      const long long n_obs = lo.at("refuted_obstruction").get<long long>();
      const long long n_exh = lo.at("refuted_exhaustion").get<long long>();
      const long long n_inc = lo.at("inconclusive").get<long long>();
      c.check(n_obs >= 0 && n_exh >= 0 && n_inc >= 0, "negative assignment counts");
      c.check(n_obs + n_exh + n_inc == canon,
              "assignment counts must add up to the canonical total");
      if (proven) c.check(n_inc == 0, "a proven value admits no inconclusive assignment");

      const auto& refs = lo.at("refutations");
      if (!c.check(refs.is_array() &&
                       static_cast<long long>(refs.size()) == n_obs + n_exh,
                   "refutation list size must match the refuted counts"))
        return c.r;

      struct Ref {
        long long index;
        std::vector<int> rgs;
        int block;
        bool obstruction;
      };
      std::vector<Ref> rr;
      rr.reserve(refs.size());
      bool shape_ok = true;
      long long tally_obs = 0, tally_exh = 0, prev = -1;
      for (const auto& e : refs) {
        Ref q;
        q.index = e.at("index").get<long long>();
        q.rgs = e.at("rgs").get<std::vector<int>>();
        q.block = e.at("block").get<int>();
        const std::string rs = e.at("reason").get<std::string>();
        if (rs == "obstruction") {
          q.obstruction = true;
          ++tally_obs;
        } else if (rs == "exhaustion") {
          q.obstruction = false;
          ++tally_exh;
        } else {
          shape_ok = false;
          break;
        }
        if (q.index <= prev || static_cast<int>(q.rgs.size()) != M || q.block < 0 ||
            q.block >= k) {
          shape_ok = false;
          break;
        }
        prev = q.index;
        rr.push_back(std::move(q));
      }
      if (!c.check(shape_ok,
                   "refutation entries must be well-formed and strictly ordered by index"))
        return c.r;
      c.check(tally_obs == n_obs && tally_exh == n_exh,
              "refutation reasons do not match the reason counts");
      if (!is_tc)
        c.check(tally_obs == 0, "row/column obstructions only exist over a square target");

      if (canon <= 2'000'000) {
        std::vector<Bits> cell_down;
        cell_down.reserve(cells.size());
        for (int cc : cells) cell_down.push_back(target->down(cc));
        const bool xc = is_contractible(x);
        size_t cur = 0;
        bool walk_ok = true;
        std::string walk_msg;
        enumerate_rgs(M, static_cast<int>(k), [&](long long idx, const std::vector<int>& a) {
          if (cur < rr.size() && rr[cur].index == idx) {
            const Ref& q = rr[cur++];
            if (!std::equal(a.begin(), a.end(), q.rgs.begin())) {
              walk_ok = false;
              walk_msg = "refutation " + std::to_string(idx) +
                         " lists a wrong canonical assignment string";
              return false;
            }
            if (q.obstruction && is_tc) {
              Bits pts(target->size());
              for (int i2 = 0; i2 < M; ++i2)
                if (a[static_cast<size_t>(i2)] == q.block) pts |= cell_down[static_cast<size_t>(i2)];
              if (!row_column_obstruction(*sq, pts, xc)) {
                walk_ok = false;
                walk_msg = "refutation " + std::to_string(idx) +
                           " claims a row/column obstruction that does not hold";
                return false;
              }
            }
          }
          return true;
        });
        c.check(walk_ok, walk_msg.empty() ? "refutation walk failed" : walk_msg);
        c.check(cur == rr.size(), "refutation indices exceed the canonical enumeration");
        if (proven)
          c.check(static_cast<long long>(rr.size()) == canon,
                  "a proven lower bound must refute every canonical assignment");
      } else {
        c.check(!proven, "canonical enumeration too large to re-verify a proven claim");
      }
    }
    if (j.contains("notes")) c.check(j.at("notes").is_array(), "notes must be an array");
  } catch (const std::exception& e) {
    c.fail(std::string("malformed report: ") + e.what());
  }
  return c.r;
}

CertifyResult certify_exploration(const ordered_json& j) {
  Checker c;
  try {
    const int n = j.at("n").get<int>();
    if (!c.check(n >= 5, "exploration needs n >= 5")) return c.r;
    c.check(!j.at("antipode").get<std::string>().empty(), "missing antipode rule");
    SpacePtr x = circle_model(n);
    c.check(space_to_json(*x) == j.at("space"),
            "space does not match the circle model of this size");
    std::optional<Square> sq(make_square(x));

    const int shift = n / 2;
    Bits anti(sq->space->size());
    for (int z = 0; z < x->size(); ++z) {
      const int az = z < n ? (z + shift) % n : n + ((z - n + shift) % n);
      anti.set(sq->pair_index(z, az));
    }
    const Bits closure = sq->space->upset_of(anti);
    const Bits q1 = closure.complement();
    const Bits q2 = sq->space->downset_of(closure);
    c.check(j.at("covers").get<bool>() ==
                ((q1 | q2) == Bits::full(sq->space->size())),
            "covers flag does not match the construction");

    const auto& sets = j.at("sets");
    if (!c.check(sets.is_array() && sets.size() == 2, "exploration carries exactly two sets"))
      return c.r;
    const Bits expect[2] = {q1, q2};
    const bool xc = is_contractible(x);
    for (int i = 0; i < 2; ++i) {
      const auto& sj = sets[static_cast<size_t>(i)];
      const std::string who = "set " + sj.value("name", std::to_string(i));
      Bits m(sq->space->size());
      bool labels_ok = true;
      for (const auto& lbl : sj.at("points")) {
        const auto idx = sq->space->index_of(lbl.get<std::string>());
        if (!idx) {
          labels_ok = false;
          break;
        }
        m.set(*idx);
      }
      if (!c.check(labels_ok, who + ": unknown labels")) continue;
      c.check(m == expect[static_cast<size_t>(i)],
              who + ": points do not match the antidiagonal construction");
      c.check(sj.at("open").get<bool>() && sq->space->is_open(m), who + ": must be open");
      c.check(sj.at("row_column_obstruction").get<bool>() ==
                  row_column_obstruction(*sq, m, xc),
              who + ": obstruction flag mismatch");
      const std::string d = sj.at("decision").get<std::string>();
      if (!c.check(d == "planner" || d == "no-planner" || d == "inconclusive",
                   who + ": unknown decision"))
        continue;
      if (d == "planner") {
        if (!c.check(sj.contains("fence"), who + ": planner decision needs a fence")) continue;
        verify_witness(c, true, x, sq->space, sq, m, sj.at("fence"), who);
      } else {
        c.check(!sj.contains("fence"), who + ": only planner decisions carry a fence");
      }
    }
  } catch (const std::exception& e) {
    c.fail(std::string("malformed exploration: ") + e.what());
  }
  return c.r;
}

CertifyResult certify_bare_fence(const ordered_json& j) {
  Checker c;
  try {
    const Fence f = fence_from_json(j);
    const auto errs = check_fence(f);
    ++c.r.checks;
    if (!errs.empty()) {
      c.r.ok = false;
      for (const auto& e : errs) c.r.problems.push_back("fence: " + e);
    }
  } catch (const std::exception& e) {
    c.fail(std::string("malformed fence: ") + e.what());
  }
  return c.r;
}

}  // namespace

CertifyResult certify_artifact(const ordered_json& j) {
  if (!j.is_object()) {
    CertifyResult r;
    r.ok = false;
    r.problems.push_back("artifact must be a JSON object");
    return r;
  }
  if (j.contains("invariant")) return certify_search_report(j);
  if (j.value("kind", std::string()) == "circle-exploration") return certify_exploration(j);
  if (j.contains("maps") && j.contains("domain")) return certify_bare_fence(j);
  CertifyResult r;
  r.ok = false;
  r.problems.push_back(
      "unrecognized artifact: expected a search report, a circle exploration, or a fence");
  return r;
}

// ---- dot export ---------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

std::string export_dot(const FiniteSpace& s) {
  std::string out = "digraph space {\n  rankdir=BT;\n  node [shape=box];\n";
  for (int i = 0; i < s.size(); ++i) out += "  \"" + dot_escape(s.label(i)) + "\";\n";
  for (const auto& [below, above] : s.hasse())
    out += "  \"" + dot_escape(s.label(below)) + "\" -> \"" + dot_escape(s.label(above)) + "\";\n";
  for (int h = 0; h <= s.max_height(); ++h) {
    std::string rank;
    for (int i = 0; i < s.size(); ++i)
      if (s.height(i) == h) rank += " \"" + dot_escape(s.label(i)) + "\";";
    if (!rank.empty()) out += "  { rank=same;" + rank + " }\n";
  }
  out += "}\n";
  return out;
}

// ---- space sources ------------------------------------------------------

SpacePtr load_space_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open space file: " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw std::invalid_argument("JSON parse error in " + path + ": " + e.what());
  }
  return space_from_json(j);
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Splits on commas at parenthesis depth zero.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

// Strips one level of outer parentheses when they match.
std::string strip_parens(std::string s) {
  for (;;) {
    s = trim(s);
    if (s.size() < 2 || s.front() != '(') return s;
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') {
        --depth;
        if (depth == 0) {
          if (i + 1 != s.size()) return s;  // closes before the end
          break;
        }
      }
    }
    s = s.substr(1, s.size() - 2);
  }
}

int parse_count(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + " needs an integer argument, got '" + s + "'");
  }
}

const char* kGrammarHint =
    "expected a constructor (discrete:n, interval:m, circle:n, sphere:n, join:A,B, "
    "product:A,B, op:A, susp:A, wedge:A@bp,...) or a path to a space JSON file";

}  // namespace

SpacePtr parse_space_expression(const std::string& raw) {
  const std::string s = strip_parens(trim(raw));
  if (s.empty()) throw std::invalid_argument("empty space expression");
  if (s.rfind("file:", 0) == 0) return load_space_file(s.substr(5));

  const size_t colon = s.find(':');
  const std::string head = colon == std::string::npos ? s : s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);

  const auto two_args = [&](const std::string& name) {
    std::vector<std::string> parts = split_top(rest);
    if (parts.size() != 2)
      throw std::invalid_argument(name + " takes exactly two arguments; parenthesize nested "
                                         "constructors, e.g. " +
                                  name + ":(join:discrete:2,discrete:2),circle:2");
    return std::pair(parse_space_expression(parts[0]), parse_space_expression(parts[1]));
  };

  if (head == "discrete") return discrete(parse_count(rest, "discrete"));
  if (head == "interval") return interval_model(parse_count(rest, "interval"));
  if (head == "circle") return circle_model(parse_count(rest, "circle"));
  if (head == "sphere") return sphere_model(parse_count(rest, "sphere"));
  if (head == "join") {
    auto [a, b] = two_args("join");
    return nh_join(a, b);
  }
  if (head == "product") {
    auto [a, b] = two_args("product");
    return product(a, b);
  }
  if (head == "op") return opposite(parse_space_expression(rest));
  if (head == "susp") return nh_suspension(parse_space_expression(rest));
  if (head == "wedge") {
    std::vector<SpacePtr> pieces;
    std::vector<int> basepoints;
    for (const std::string& part : split_top(rest)) {
      // The basepoint label follows the last '@' at depth zero.
      int depth = 0;
      size_t at = std::string::npos;
      for (size_t i = 0; i < part.size(); ++i) {
        if (part[i] == '(') ++depth;
        if (part[i] == ')') --depth;
        if (part[i] == '@' && depth == 0) at = i;
      }
      std::string expr = at == std::string::npos ? part : part.substr(0, at);
      SpacePtr piece = parse_space_expression(expr);
      int bp;
      if (at == std::string::npos) {
        bp = piece->maximal_points().first();  // default: lowest-index maximal point
      } else {
        const std::string lbl = trim(part.substr(at + 1));
        const auto idx = piece->index_of(lbl);
        if (!idx)
          throw std::invalid_argument("wedge basepoint '" + lbl + "' is not a point of " +
                                      piece->kind());
        bp = *idx;
      }
      pieces.push_back(std::move(piece));
      basepoints.push_back(bp);
    }
    return wedge(pieces, basepoints);
  }

  if (std::filesystem::exists(s)) return load_space_file(s);
  throw std::invalid_argument("unrecognized space expression '" + s + "'; " + kGrammarHint);
}

Limits parse_limits_option(const std::string& text) {
  Limits lim;
  const std::string t = trim(text);
  if (t.empty()) return lim;
  for (const std::string& raw_part : split_top(t)) {
    const std::string part = trim(raw_part);
    const size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("limits must look like visited=N,seconds=T; got '" + part + "'");
    const std::string key = trim(part.substr(0, eq)), val = trim(part.substr(eq + 1));
    if (key != "visited" && key != "seconds")
      throw std::invalid_argument("unknown limit '" + key + "'; known limits: visited, seconds");
    try {
      size_t used = 0;
      if (key == "visited") {
        lim.max_visited = std::stoull(val, &used);
      } else {
        lim.max_seconds = std::stod(val, &used);
      }
      if (used != val.size() || (key == "seconds" && lim.max_seconds < 0))
        throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad limit value in '" + part + "'");
    }
  }
  return lim;
}

}  // namespace fintop
