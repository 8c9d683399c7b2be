#include "treesib/cli.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "treesib/dsl.hpp"
#include "treesib/embedding.hpp"
#include "treesib/presentation.hpp"
#include "treesib/siblings.hpp"

namespace treesib {

namespace {

using nlohmann::json;

// Problems that prevent any analysis from starting; exit code 2 like a
// document parse error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kUsage =
    "usage: treesib <command> <file> [options]\n"
    "commands:\n"
    "  analyze <file>                    ends, nearly-finite, rake, regularity\n"
    "  classify <file> <embedding>       validate, then elliptic/parabolic/hyperbolic\n"
    "  search <file>                     bounded self-embedding search\n"
    "  siblings <file> --k N             emit the sibling family S_1..S_N\n"
    "  report <file>                     sibling-number certificate\n"
    "  truncate <file> --depth D [--dot] finite ball, optionally as DOT\n"
    "  convergence <file>                end-convergence counts for a sequence\n"
    "options:\n"
    "  --presentation NAME   restrict to one presentation in the document\n"
    "  --json                structured output\n"
    "  --shift-bound N       search bound on rule shifts (default 1)\n"
    "  --patch-radius N      search patch radius (default 2)\n"
    "  --limit N             cap listed search results (default 10)\n"
    "  --k N                 sibling family size (default 3)\n"
    "  --depth D             truncation depth\n"
    "  --dot                 DOT output for truncate\n"
    "  --seq KIND            convergence sequence: teeth|spine|ray-teeth|constant\n"
    "  --arm NAME            sequence arm (default: the first arm)\n"
    "  --end NAME            target end arm (default: the sequence arm)\n"
    "  --x0 REF              core start vertex for --seq ray-teeth\n"
    "  --base REF            vertex for --seq constant\n"
    "  --bound N             convergence horizon (default 10)\n";

struct Options {
  std::string command;
  std::string file;
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;
  bool json = false;
  bool dot = false;
};

Options parse_args(const std::vector<std::string>& args) {
  static const std::set<std::string> value_flags = {
      "presentation", "k",   "depth", "shift-bound", "patch-radius",
      "limit",        "arm", "end",   "seq",         "x0",
      "base",         "bound"};
  Options o;
  if (args.empty()) throw UsageError(std::string("missing command\n") + kUsage);
  o.command = args[0];
  for (size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      std::string name = a.substr(2);
      if (name == "json") {
        o.json = true;
      } else if (name == "dot") {
        o.dot = true;
      } else if (value_flags.count(name)) {
        if (i + 1 >= args.size())
          throw UsageError("flag --" + name + " needs a value");
        o.flags[name] = args[++i];
      } else {
        throw UsageError("unknown flag --" + name);
      }
      continue;
    }
    if (o.file.empty()) {
      o.file = a;
    } else {
      o.positional.push_back(a);
    }
  }
  return o;
}

long long flag_ll(const Options& o, const std::string& name, long long dflt) {
  auto it = o.flags.find(name);
  if (it == o.flags.end()) return dflt;
  try {
    size_t used = 0;
    long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw UsageError("flag --" + name + " needs an integer, got '" +
                     it->second + "'");
  }
}

SearchBounds bounds_of(const Options& o) {
  return SearchBounds{flag_ll(o, "shift-bound", 1),
                      static_cast<int>(flag_ll(o, "patch-radius", 2))};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<const TreePresentation*> select(const PresentationDocument& doc,
                                            const Options& o) {
  if (auto it = o.flags.find("presentation"); it != o.flags.end()) {
    const TreePresentation* p = doc.find_presentation(it->second);
    if (!p)
      throw Error(ErrorKind::InvalidArgument,
                  "no presentation named " + it->second + " in the document");
    return {p};
  }
  std::vector<const TreePresentation*> all;
  for (const TreePresentation& p : doc.presentations) all.push_back(&p);
  if (all.empty())
    throw Error(ErrorKind::InvalidArgument, "document has no presentations");
  return all;
}

std::string end_name(const TreePresentation& p, const End& e) {
  return p.arm(e.arm).name;
}

const char* kind_name(Classification::Kind k) {
  switch (k) {
    case Classification::Kind::Elliptic: return "elliptic";
    case Classification::Kind::Parabolic: return "parabolic";
    case Classification::Kind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::AdjacencyBroken: return "adjacency-broken";
    case ViolationKind::NotInjective: return "not-injective";
    case ViolationKind::CertificateFails: return "certificate-fails";
    case ViolationKind::BoundaryMismatch: return "boundary-mismatch";
  }
  return "unknown";
}

const char* verdict_name(SiblingCertificate::Verdict v) {
  switch (v) {
    case SiblingCertificate::Verdict::ExactlyOne: return "ExactlyOne";
    case SiblingCertificate::Verdict::Infinite: return "Infinite";
    case SiblingCertificate::Verdict::OpenCase: return "OpenCase";
  }
  return "unknown";
}

// Tag of the case-theorem branch that produced the verdict.
std::string theorem_tag(const SiblingCertificate& c) {
  using V = SiblingCertificate::Verdict;
  if (c.verdict == V::ExactlyOne) {
    if (c.reason == "ray") return "Thm-Ray-ExactlyOne";
    if (c.reason == "no directions") return "Thm-ZeroDirections-ExactlyOne";
    return "Thm-TwoDirections-ExactlyOne";
  }
  if (c.verdict == V::Infinite) {
    if (c.reason.find("parabolic sibling family") != std::string::npos)
      return "Thm-Parabolic-Infinite";
    return "Thm-NonRegularEnd-Infinite";
  }
  return "Problem-OneDirection-Open";
}

std::string rule_text(const TreePresentation& p, const TailRule& r) {
  return "rule " + p.arm(r.source_arm).name + " -> " +
         p.arm(r.target_arm).name + " shift " + std::to_string(r.shift) +
         " from " + std::to_string(r.valid_from);
}

std::string embedding_text(const TreePresentation& p,
                           const PresentedEmbedding& f) {
  std::string s;
  if (!f.patch().empty()) {
    s += "patch {";
    for (const auto& [u, v] : f.patch())
      s += " " + vertex_label(p, u) + " -> " + vertex_label(p, v) + ";";
    s += " }";
  }
  for (const TailRule& r : f.rules()) {
    if (!s.empty()) s += " ";
    s += rule_text(p, r) + ";";
  }
  return s;
}

json embedding_json(const TreePresentation& p, const PresentedEmbedding& f) {
  json patch = json::array();
  for (const auto& [u, v] : f.patch())
    patch.push_back({{"from", vertex_label(p, u)}, {"to", vertex_label(p, v)}});
  json rules = json::array();
  for (const TailRule& r : f.rules())
    rules.push_back({{"source", p.arm(r.source_arm).name},
                     {"target", p.arm(r.target_arm).name},
                     {"shift", r.shift},
                     {"from", r.valid_from}});
  return json{{"patch", patch}, {"rules", rules}};
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

void emit(const json& top, bool as_json, std::ostream& out,
          const std::string& text) {
  if (as_json) {
    out << top.dump(2) << "\n";
  } else {
    out << text;
  }
}

int cmd_analyze(const PresentationDocument& doc, const Options& o,
                std::ostream& out) {
  json top = {{"command", "analyze"}, {"presentations", json::array()}};
  std::string text;
  for (const TreePresentation* pp : select(doc, o)) {
    const TreePresentation& p = *pp;
    NearlyFiniteReport nf = is_nearly_finite(p);
    json jp = {{"name", p.name()},
               {"is_ray", is_ray(p)},
               {"end_count", p.arm_count()},
               {"ends", json::array()},
               {"period_lcm", period_lcm(p)},
               {"nearly_finite", nf.value},
               {"rake", nullptr},
               {"regularity", json::array()}};
    std::vector<std::string> arm_names;
    for (const Arm& a : p.arms()) {
      jp["ends"].push_back(a.name);
      arm_names.push_back(a.name);
    }
    if (nf.rake)
      jp["rake"] = {{"arm", p.arm(nf.rake->arm).name},
                    {"start", nf.rake->start},
                    {"stride", nf.rake->stride}};
    text += "presentation " + p.name() + "\n";
    text += "  ends: " + std::to_string(p.arm_count());
    if (p.arm_count() > 0) text += " (" + join(arm_names, ", ") + ")";
    text += "\n";
    text += std::string("  ray: ") + (is_ray(p) ? "yes" : "no") + "\n";
    text += "  period lcm: " + std::to_string(period_lcm(p)) + "\n";
    text += std::string("  nearly finite: ") + (nf.value ? "yes" : "no") + "\n";
    if (nf.rake)
      text += "  rake: arm " + p.arm(nf.rake->arm).name + " from " +
              std::to_string(nf.rake->start) + " stride " +
              std::to_string(nf.rake->stride) + "\n";
    else
      text += "  rake: none\n";
    for (int a = 0; a < p.arm_count(); ++a) {
      EndRegularity r = end_regularity(p, a);
      json jr = {{"arm", p.arm(a).name}, {"regular", r.regular}};
      text += "  end " + p.arm(a).name + ": ";
      if (r.regular) {
        jr["classes"] = r.class_count;
        text += "regular (" + std::to_string(r.class_count) + " classes)\n";
      } else {
        json pairs = json::array();
        std::vector<std::string> shown;
        for (size_t i = 0; i < r.witness_pairs.size() && i < 3; ++i) {
          pairs.push_back({r.witness_pairs[i].first, r.witness_pairs[i].second});
          shown.push_back(std::to_string(r.witness_pairs[i].first) + "<" +
                          std::to_string(r.witness_pairs[i].second));
        }
        jr["witness_pairs"] = pairs;
        text += "non-regular (strict pairs " + join(shown, ", ") + ")\n";
      }
      jp["regularity"].push_back(jr);
    }
    top["presentations"].push_back(jp);
  }
  emit(top, o.json, out, text);
  return 0;
}

int cmd_classify(const PresentationDocument& doc, const Options& o,
                 std::ostream& out) {
  if (o.positional.empty())
    throw UsageError("classify needs an embedding name: classify <file> <embedding>");
  const std::string& name = o.positional.front();
  const NamedEmbedding* ne = doc.find_embedding(name);
  if (!ne)
    throw Error(ErrorKind::InvalidArgument,
                "no embedding named " + name + " in the document");
  const TreePresentation& p = *doc.find_presentation(ne->presentation);
  std::vector<Violation> viols = validate(p, ne->embedding);
  json top = {{"command", "classify"},
              {"embedding", name},
              {"presentation", ne->presentation},
              {"valid", viols.empty()}};
  std::string text =
      "embedding " + name + " on " + ne->presentation + ": ";
  if (!viols.empty()) {
    json jv = json::array();
    text += "INVALID (" + std::to_string(viols.size()) +
            (viols.size() == 1 ? " violation)\n" : " violations)\n");
    for (const Violation& v : viols) {
      jv.push_back({{"kind", violation_name(v.kind)}, {"message", v.message}});
      text += std::string("  - [") + violation_name(v.kind) + "] " +
              v.message + "\n";
    }
    top["violations"] = jv;
    emit(top, o.json, out, text);
    return 1;
  }
  Classification c = classify(p, ne->embedding);
  top["classification"] = kind_name(c.kind);
  text += "valid\n  classification: " + std::string(kind_name(c.kind)) + "\n";
  if (c.kind == Classification::Kind::Elliptic) {
    if (c.fixed_vertex) {
      top["fixed_vertex"] = vertex_label(p, *c.fixed_vertex);
      text += "  fixed vertex: " + vertex_label(p, *c.fixed_vertex) + "\n";
    }
    if (c.fixed_edge) {
      top["fixed_edge"] = {vertex_label(p, c.fixed_edge->first),
                           vertex_label(p, c.fixed_edge->second)};
      text += "  fixed edge: " + vertex_label(p, c.fixed_edge->first) + " - " +
              vertex_label(p, c.fixed_edge->second) + "\n";
    }
  } else {
    if (c.forward) {
      top["forward"] = end_name(p, *c.forward);
      text += "  forward end: " + end_name(p, *c.forward) + "\n";
    }
    if (c.backward) {
      top["backward"] = end_name(p, *c.backward);
      text += "  backward end: " + end_name(p, *c.backward) + "\n";
    }
    top["periodicity"] = c.periodicity;
    text += "  periodicity: " + std::to_string(c.periodicity) + "\n";
  }
  emit(top, o.json, out, text);
  return 0;
}

int cmd_search(const PresentationDocument& doc, const Options& o,
               std::ostream& out) {
  SearchBounds bounds = bounds_of(o);
  long long limit = flag_ll(o, "limit", 10);
  json top = {{"command", "search"}, {"presentations", json::array()}};
  std::string text;
  for (const TreePresentation* pp : select(doc, o)) {
    const TreePresentation& p = *pp;
    std::vector<PresentedEmbedding> found = search_embeddings(p, bounds);
    long long shown =
        std::min<long long>(limit, static_cast<long long>(found.size()));
    json jp = {{"name", p.name()},
               {"found", found.size()},
               {"shown", shown},
               {"embeddings", json::array()}};
    text += "presentation " + p.name() + ": " + std::to_string(found.size()) +
            " embeddings found";
    if (shown < static_cast<long long>(found.size()))
      text += " (showing " + std::to_string(shown) + ")";
    text += "\n";
    for (long long i = 0; i < shown; ++i) {
      Classification c = classify(p, found[i]);
      json je = embedding_json(p, found[i]);
      je["classification"] = kind_name(c.kind);
      jp["embeddings"].push_back(je);
      text += "  [" + std::to_string(i) + "] " + kind_name(c.kind) + ": " +
              embedding_text(p, found[i]) + "\n";
    }
    top["presentations"].push_back(jp);
  }
  emit(top, o.json, out, text);
  return 0;
}

int cmd_report(const PresentationDocument& doc, const Options& o,
               std::ostream& out) {
  SearchBounds bounds = bounds_of(o);
  json top = {{"command", "report"}, {"presentations", json::array()}};
  std::string text;
  for (const TreePresentation* pp : select(doc, o)) {
    const TreePresentation& p = *pp;
    SiblingCertificate c = sibling_number_report(p, bounds);
    json jp = {{"name", p.name()},
               {"verdict", verdict_name(c.verdict)},
               {"theorem", theorem_tag(c)},
               {"reason", c.reason},
               {"classical", c.classical},
               {"directions", json::array()}};
    std::vector<std::string> dirs;
    for (const End& e : c.directions) {
      jp["directions"].push_back(end_name(p, e));
      dirs.push_back(end_name(p, e));
    }
    text += "presentation " + p.name() + "\n";
    text += "  siblings: " + std::string(verdict_name(c.verdict)) + " (" +
            theorem_tag(c) + ")";
    if (c.classical) text += " [classical]";
    text += "\n  reason: " + c.reason + "\n";
    text += "  directions: " + (dirs.empty() ? "none" : join(dirs, ", ")) + "\n";
    if (c.witness) {
      jp["witness"] = embedding_json(p, *c.witness);
      text += "  witness: " + embedding_text(p, *c.witness) + "\n";
    }
    if (c.family) {
      json members = json::array();
      std::vector<std::string> names;
      for (const TreePresentation& m : c.family->members) {
        members.push_back(m.name());
        names.push_back(m.name());
      }
      jp["family"] = {{"members", members}};
      text += "  family: " + join(names, ", ") + "\n";
    }
    if (c.components) {
      jp["components"] = {{"arm", p.arm(c.components->arm).name},
                          {"shift", c.components->shift},
                          {"from", c.components->from},
                          {"stride", c.components->stride}};
      text += "  unbounded difference components: arm " +
              p.arm(c.components->arm).name + ", shift " +
              std::to_string(c.components->shift) + ", from " +
              std::to_string(c.components->from) + ", stride " +
              std::to_string(c.components->stride) + "\n";
    }
    if (c.non_regular_end) {
      jp["non_regular_end"] = end_name(p, *c.non_regular_end);
      text += "  non-regular end: " + end_name(p, *c.non_regular_end) + "\n";
    }
    top["presentations"].push_back(jp);
  }
  emit(top, o.json, out, text);
  return 0;
}

int cmd_siblings(const PresentationDocument& doc, const Options& o,
                 std::ostream& out) {
  long long k = flag_ll(o, "k", 3);
  if (k < 1) throw UsageError("--k must be >= 1");
  SearchBounds bounds = bounds_of(o);
  json top = {{"command", "siblings"}, {"presentations", json::array()}};
  std::string text;
  for (const TreePresentation* pp : select(doc, o)) {
    const TreePresentation& p = *pp;
    SiblingCertificate c = sibling_number_report(p, bounds);
    if (!c.family || !c.witness)
      throw Error(ErrorKind::NotParabolic,
                  "no parabolic sibling family for " + p.name() + " (" +
                      c.reason + ")");
    SiblingFamily fam = static_cast<int>(k) == 3
                            ? *c.family
                            : build_sibling_family(p, *c.witness,
                                                   static_cast<int>(k));
    PairwiseDistinctReport pd =
        verify_pairwise_noniso(fam.members, static_cast<int>(k) + 16);
    json jp = {{"name", p.name()},
               {"pairwise_distinct", pd.all_distinct},
               {"members", json::array()},
               {"separations", json::array()}};
    text += "sibling family for " + p.name() + " (" + std::to_string(k) +
            " members, pairwise distinct: " +
            (pd.all_distinct ? "yes" : "no") + ")\n";
    for (const TreePresentation& m : fam.members) {
      PresentationDocument one;
      one.presentations.push_back(m);
      jp["members"].push_back({{"name", m.name()},
                               {"text", serialize_document(one)}});
      text += "\n" + serialize_document(one);
    }
    text += "\nseparations:\n";
    for (const PairSeparation& ps : pd.pairs) {
      json js = {{"first", fam.members[ps.first].name()},
                 {"second", fam.members[ps.second].name()}};
      text += "  " + fam.members[ps.first].name() + " vs " +
              fam.members[ps.second].name() + ": ";
      if (ps.separating_depth) {
        js["depth"] = *ps.separating_depth;
        text += "distinct at depth " + std::to_string(*ps.separating_depth) +
                "\n";
      } else {
        js["depth"] = nullptr;
        text += "no separating depth found\n";
      }
      jp["separations"].push_back(js);
    }
    top["presentations"].push_back(jp);
  }
  emit(top, o.json, out, text);
  return 0;
}

int cmd_truncate(const PresentationDocument& doc, const Options& o,
                 std::ostream& out) {
  if (!o.flags.count("depth"))
    throw UsageError("truncate needs --depth N");
  long long depth = flag_ll(o, "depth", 0);
  if (depth < 0) throw UsageError("--depth must be >= 0");
  json top = {{"command", "truncate"}, {"presentations", json::array()}};
  std::string text;
  for (const TreePresentation* pp : select(doc, o)) {
    const TreePresentation& p = *pp;
    Truncation t = truncate_with_map(p, static_cast<int>(depth));
    int n = t.tree.size();
    std::string dot = "graph " + p.name() + "_d" + std::to_string(depth) +
                      " {\n";
    for (int v = 0; v < n; ++v)
      dot += "  n" + std::to_string(v) + " [label=\"" +
             vertex_label(p, t.vertex_of[v]) + "\"];\n";
    for (int v = 1; v < n; ++v)
      dot += "  n" + std::to_string(t.tree.parent(v)) + " -- n" +
             std::to_string(v) + ";\n";
    dot += "}\n";
    json jp = {{"name", p.name()},
               {"depth", depth},
               {"vertex_count", n},
               {"edge_count", n - 1},
               {"code", t.tree.encode()},
               {"dot", dot}};
    if (o.dot) {
      text += dot;
    } else {
      text += "truncation of " + p.name() + " at depth " +
              std::to_string(depth) + ": " + std::to_string(n) +
              " vertices, " + std::to_string(n - 1) + " edges\n  code: " +
              t.tree.encode() + "\n";
    }
    top["presentations"].push_back(jp);
  }
  emit(top, o.json, out, text);
  return 0;
}

int cmd_convergence(const PresentationDocument& doc, const Options& o,
                    std::ostream& out) {
  json top = {{"command", "convergence"}, {"presentations", json::array()}};
  std::string text;
  for (const TreePresentation* pp : select(doc, o)) {
    const TreePresentation& p = *pp;
    if (p.arm_count() == 0)
      throw Error(ErrorKind::InvalidArgument,
                  p.name() + " has no arms, so no ends to converge to");
    int arm = 0;
    if (auto it = o.flags.find("arm"); it != o.flags.end()) {
      auto idx = p.arm_index(it->second);
      if (!idx)
        throw Error(ErrorKind::InvalidArgument,
                    "no arm named " + it->second + " in " + p.name());
      arm = *idx;
    }
    std::string seq_kind = "teeth";
    if (auto it = o.flags.find("seq"); it != o.flags.end())
      seq_kind = it->second;
    VertexSeq seq = VertexSeq::teeth(arm);
    if (seq_kind == "teeth") {
      seq = VertexSeq::teeth(arm);
    } else if (seq_kind == "spine") {
      seq = VertexSeq::spine(arm);
    } else if (seq_kind == "ray-teeth") {
      auto it = o.flags.find("x0");
      if (it == o.flags.end())
        throw UsageError("--seq ray-teeth needs --x0 REF");
      seq = VertexSeq::ray_teeth(arm, parse_vertex_ref(p, it->second));
    } else if (seq_kind == "constant") {
      auto it = o.flags.find("base");
      if (it == o.flags.end())
        throw UsageError("--seq constant needs --base REF");
      seq = VertexSeq::constant(parse_vertex_ref(p, it->second));
    } else {
      throw UsageError("unknown --seq kind '" + seq_kind +
                       "' (teeth|spine|ray-teeth|constant)");
    }
    int end_arm = arm;
    if (auto it = o.flags.find("end"); it != o.flags.end()) {
      auto idx = p.arm_index(it->second);
      if (!idx)
        throw Error(ErrorKind::InvalidArgument,
                    "no arm named " + it->second + " in " + p.name());
      end_arm = *idx;
    }
    long long bound = flag_ll(o, "bound", 10);
    if (bound < 1) throw UsageError("--bound must be >= 1");
    ConvergenceReport r =
        converges_to(p, seq, End{end_arm}, static_cast<int>(bound));
    json jp = {{"name", p.name()},
               {"sequence", seq_kind},
               {"arm", p.arm(arm).name},
               {"end", p.arm(end_arm).name},
               {"bound", bound},
               {"converges", r.converges},
               {"counts", json::array()}};
    std::vector<std::string> counts;
    for (long long c : r.counts) {
      if (c < 0) {
        jp["counts"].push_back(nullptr);
        counts.push_back("inf");
      } else {
        jp["counts"].push_back(c);
        counts.push_back(std::to_string(c));
      }
    }
    text += "sequence " + seq_kind + "(" + p.arm(arm).name + ") vs end " +
            p.arm(end_arm).name + " on " + p.name() + "\n";
    text += std::string("  converges: ") + (r.converges ? "yes" : "no") + "\n";
    text += "  separated counts: " + join(counts, " ") + "\n";
    top["presentations"].push_back(jp);
  }
  emit(top, o.json, out, text);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    Options o = parse_args(args);
    if (o.command == "help") {
      out << kUsage;
      return 0;
    }
    if (o.file.empty())
      throw UsageError(std::string("missing input file\n") + kUsage);
    PresentationDocument doc = parse_document(read_file(o.file));
    if (o.command == "analyze") return cmd_analyze(doc, o, out);
    if (o.command == "classify") return cmd_classify(doc, o, out);
    if (o.command == "search") return cmd_search(doc, o, out);
    if (o.command == "siblings") return cmd_siblings(doc, o, out);
    if (o.command == "report") return cmd_report(doc, o, out);
    if (o.command == "truncate") return cmd_truncate(doc, o, out);
    if (o.command == "convergence") return cmd_convergence(doc, o, out);
    throw UsageError("unknown command '" + o.command + "'\n" + kUsage);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace treesib
