#include "treesib/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treesib/finite_tree.hpp"

namespace treesib {

namespace {

struct Token {
  enum class Kind {
    Ident,
    Number,
    Paren,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Arrow,
    Dash,
    Plus,
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Position reference after an arm name: digits, optionally '.' + digits.
bool position_ref(std::string_view s) {
  size_t dot = s.find('.');
  if (dot == std::string_view::npos) return all_digits(s);
  return all_digits(s.substr(0, dot)) && all_digits(s.substr(dot + 1));
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  auto take = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) advance(text[i + k]);
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      take(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') take(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (c == '(') {
      size_t j = i;
      int depth = 0;
      while (j < text.size() && (text[j] == '(' || text[j] == ')')) {
        depth += text[j] == '(' ? 1 : -1;
        ++j;
        if (depth == 0) break;
      }
      if (depth != 0) throw ParseError(line, col, "unbalanced tree literal");
      t.kind = Token::Kind::Paren;
      t.text = text.substr(i, j - i);
      take(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Token::Kind::Ident;
      t.text = text.substr(i, j - i);
      take(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      t.kind = Token::Kind::Number;
      t.text = text.substr(i, j - i);
      take(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      t.kind = Token::Kind::Arrow;
      t.text = "->";
      take(2);
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '{': t.kind = Token::Kind::LBrace; break;
      case '}': t.kind = Token::Kind::RBrace; break;
      case '[': t.kind = Token::Kind::LBracket; break;
      case ']': t.kind = Token::Kind::RBracket; break;
      case ';': t.kind = Token::Kind::Semi; break;
      case ',': t.kind = Token::Kind::Comma; break;
      case '-': t.kind = Token::Kind::Dash; break;
      case '+': t.kind = Token::Kind::Plus; break;
      default:
        throw ParseError(line, col,
                         std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(1, c);
    take(1);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  PresentationDocument run() {
    PresentationDocument doc;
    while (peek().kind != Token::Kind::End) {
      if (peek_kw("presentation")) {
        parse_presentation(doc);
      } else if (peek_kw("embedding")) {
        parse_embedding(doc);
      } else {
        fail(peek(), "expected 'presentation' or 'embedding'");
      }
    }
    return doc;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }

  Token get() {
    Token t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg);
  }

  bool peek_kw(const char* kw) const {
    return peek().kind == Token::Kind::Ident && peek().text == kw;
  }

  bool accept_kw(const char* kw) {
    if (!peek_kw(kw)) return false;
    get();
    return true;
  }

  void expect_kw(const char* kw) {
    if (!peek_kw(kw)) fail(peek(), std::string("expected '") + kw + "'");
    get();
  }

  Token expect(Token::Kind k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    return get();
  }

  long long expect_number(const char* what) {
    Token first = peek();
    bool neg = false;
    if (peek().kind == Token::Kind::Dash) {
      get();
      neg = true;
    }
    if (peek().kind != Token::Kind::Number)
      fail(first, std::string("expected ") + what);
    Token tok = get();
    long long v = 0;
    try {
      v = std::stoll(tok.text);
    } catch (const std::exception&) {
      fail(tok, "number out of range");
    }
    return neg ? -v : v;
  }

  // "[ PAREN, PAREN, ... ];" with an empty list allowed.
  std::vector<FiniteRootedTree> tree_list() {
    expect(Token::Kind::LBracket, "'['");
    std::vector<FiniteRootedTree> out;
    if (peek().kind != Token::Kind::RBracket) {
      for (;;) {
        Token t = expect(Token::Kind::Paren, "tree literal");
        out.push_back(FiniteRootedTree::parse(t.text));
        if (peek().kind != Token::Kind::Comma) break;
        get();
      }
    }
    expect(Token::Kind::RBracket, "']'");
    expect(Token::Kind::Semi, "';'");
    return out;
  }

  void parse_presentation(PresentationDocument& doc) {
    get();
    Token name_tok = expect(Token::Kind::Ident, "presentation name");
    if (doc.find_presentation(name_tok.text))
      fail(name_tok, "duplicate presentation " + name_tok.text);
    expect(Token::Kind::LBrace, "'{'");

    Token core_tok = peek();
    expect_kw("core");
    expect(Token::Kind::LBrace, "'{'");
    expect_kw("vertices");
    std::vector<std::string> names;
    std::map<std::string, int> declared;
    while (peek().kind == Token::Kind::Ident) {
      Token v = get();
      if (!declared.emplace(v.text, static_cast<int>(names.size())).second)
        fail(v, "duplicate core vertex " + v.text);
      names.push_back(v.text);
    }
    if (names.empty()) fail(peek(), "expected at least one core vertex");
    expect(Token::Kind::Semi, "';'");

    std::vector<std::pair<int, int>> edges;
    if (accept_kw("edges")) {
      while (peek().kind == Token::Kind::Ident) {
        Token a = get();
        expect(Token::Kind::Dash, "'-'");
        Token b = expect(Token::Kind::Ident, "vertex name");
        auto ia = declared.find(a.text);
        if (ia == declared.end()) fail(a, "unknown core vertex " + a.text);
        auto ib = declared.find(b.text);
        if (ib == declared.end()) fail(b, "unknown core vertex " + b.text);
        if (ia->second == ib->second) fail(a, "self-loop at " + a.text);
        edges.emplace_back(ia->second, ib->second);
      }
      expect(Token::Kind::Semi, "';'");
    }

    int base = 0;
    if (accept_kw("basepoint")) {
      Token b = expect(Token::Kind::Ident, "vertex name");
      auto ib = declared.find(b.text);
      if (ib == declared.end()) fail(b, "unknown core vertex " + b.text);
      base = ib->second;
      expect(Token::Kind::Semi, "';'");
    }
    expect(Token::Kind::RBrace, "'}'");

    int n = static_cast<int>(names.size());
    if (static_cast<int>(edges.size()) != n - 1)
      fail(core_tok, "core needs exactly " + std::to_string(n - 1) +
                         " edges to form a tree on " + std::to_string(n) +
                         " vertices");

    // The basepoint becomes index 0; everything else keeps declaration
    // order, so serialized documents reparse to identical indices.
    std::vector<int> renumber(names.size());
    {
      std::vector<int> order;
      order.push_back(base);
      for (int v = 0; v < n; ++v)
        if (v != base) order.push_back(v);
      std::vector<std::string> reordered;
      for (int d : order) reordered.push_back(names[d]);
      for (int k = 0; k < n; ++k) renumber[order[k]] = k;
      names = std::move(reordered);
    }

    std::vector<std::vector<int>> adj(names.size());
    for (auto [a, b] : edges) {
      adj[renumber[a]].push_back(renumber[b]);
      adj[renumber[b]].push_back(renumber[a]);
    }
    std::vector<int> parents(names.size(), -1);
    std::vector<char> seen(names.size(), 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (size_t q = 0; q < queue.size(); ++q) {
      int v = queue[q];
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          parents[w] = v;
          queue.push_back(w);
        }
    }
    if (queue.size() != names.size())
      fail(core_tok, "core edges do not connect all vertices");

    std::vector<Arm> arms;
    while (peek_kw("arm")) {
      get();
      Token aname = expect(Token::Kind::Ident, "arm name");
      for (const Arm& prev : arms) {
        if (prev.name == aname.text)
          fail(aname, "duplicate arm " + aname.text);
        const std::string& shorter =
            prev.name.size() < aname.text.size() ? prev.name : aname.text;
        const std::string& longer =
            prev.name.size() < aname.text.size() ? aname.text : prev.name;
        if (longer.compare(0, shorter.size(), shorter) == 0 &&
            position_ref(std::string_view(longer).substr(shorter.size())))
          fail(aname, "arm " + aname.text + " makes references to arm " +
                          prev.name + " ambiguous");
      }
      if (declared.count(aname.text))
        fail(aname, "arm name " + aname.text + " collides with a core vertex");
      for (const std::string& cn : names) {
        if (cn.size() > aname.text.size() &&
            cn.compare(0, aname.text.size(), aname.text) == 0 &&
            position_ref(std::string_view(cn).substr(aname.text.size())))
          fail(aname, "core vertex " + cn +
                          " would be ambiguous with a position on arm " +
                          aname.text);
      }
      expect_kw("at");
      Token at = expect(Token::Kind::Ident, "core vertex name");
      auto ia = declared.find(at.text);
      if (ia == declared.end()) fail(at, "unknown core vertex " + at.text);
      expect(Token::Kind::LBrace, "'{'");

      std::optional<DecorationSeq> seq;
      if (accept_kw("family")) {
        Token shape_tok = expect(Token::Kind::Ident, "'path' or 'star'");
        DecorationSeq::Shape shape;
        if (shape_tok.text == "path") {
          shape = DecorationSeq::Shape::Path;
        } else if (shape_tok.text == "star") {
          shape = DecorationSeq::Shape::Star;
        } else {
          fail(shape_tok, "unknown family shape " + shape_tok.text);
        }
        Token slope_tok = peek();
        long long a = expect_number("slope");
        if (!accept_kw("n"))
          fail(peek(), "family rule must be affine: <slope> n + <offset>");
        if (peek().kind != Token::Kind::Plus)
          fail(peek(), "family rule must be affine: <slope> n + <offset>");
        get();
        long long b = expect_number("offset");
        expect(Token::Kind::Semi, "';'");
        if (a < 0 || b < 0)
          fail(slope_tok, "family coefficients must be >= 0");
        seq = DecorationSeq::generated(shape, a, b);
      } else {
        std::vector<FiniteRootedTree> prefix;
        if (accept_kw("prefix")) prefix = tree_list();
        Token per_tok = peek();
        expect_kw("period");
        std::vector<FiniteRootedTree> period = tree_list();
        if (period.empty()) fail(per_tok, "period must be nonempty");
        seq = DecorationSeq::periodic(std::move(prefix), std::move(period));
      }
      expect(Token::Kind::RBrace, "'}'");
      arms.push_back(Arm{aname.text, renumber[ia->second], *seq});
    }
    expect(Token::Kind::RBrace, "'}'");

    try {
      doc.presentations.emplace_back(FiniteRootedTree(std::move(parents)),
                                     std::move(arms), std::move(names),
                                     name_tok.text);
    } catch (const Error& e) {
      fail(name_tok, e.what());
    }
  }

  Vertex resolve(const TreePresentation& p, const Token& ref) {
    try {
      return parse_vertex_ref(p, ref.text);
    } catch (const Error& e) {
      fail(ref, e.what());
    }
  }

  void parse_embedding(PresentationDocument& doc) {
    get();
    Token name_tok = expect(Token::Kind::Ident, "embedding name");
    if (doc.find_embedding(name_tok.text))
      fail(name_tok, "duplicate embedding " + name_tok.text);
    expect_kw("on");
    Token pres_tok = expect(Token::Kind::Ident, "presentation name");
    const TreePresentation* p = doc.find_presentation(pres_tok.text);
    if (!p) fail(pres_tok, "unknown presentation " + pres_tok.text);
    expect(Token::Kind::LBrace, "'{'");

    std::map<Vertex, Vertex> patch;
    if (accept_kw("patch")) {
      expect(Token::Kind::LBrace, "'{'");
      while (peek().kind == Token::Kind::Ident) {
        Token from = get();
        expect(Token::Kind::Arrow, "'->'");
        Token to = expect(Token::Kind::Ident, "vertex reference");
        expect(Token::Kind::Semi, "';'");
        Vertex u = resolve(*p, from);
        Vertex v = resolve(*p, to);
        if (!patch.emplace(u, v).second)
          fail(from, "duplicate patch entry for " + from.text);
      }
      expect(Token::Kind::RBrace, "'}'");
    }

    std::vector<TailRule> rules;
    std::set<int> rule_sources;
    while (accept_kw("rule")) {
      Token src = expect(Token::Kind::Ident, "arm name");
      auto si = p->arm_index(src.text);
      if (!si) fail(src, "unknown arm " + src.text);
      expect(Token::Kind::Arrow, "'->'");
      Token dst = expect(Token::Kind::Ident, "arm name");
      auto di = p->arm_index(dst.text);
      if (!di) fail(dst, "unknown arm " + dst.text);
      expect_kw("shift");
      long long shift = expect_number("shift value");
      expect_kw("from");
      Token from_tok = peek();
      long long vf = expect_number("starting position");
      if (vf < 0) fail(from_tok, "'from' must be >= 0");
      expect(Token::Kind::Semi, "';'");
      if (!rule_sources.insert(*si).second)
        fail(src, "duplicate rule for arm " + src.text);
      rules.push_back(TailRule{*si, *di, shift, vf});
    }
    expect(Token::Kind::RBrace, "'}'");

    doc.embeddings.push_back(NamedEmbedding{
        name_tok.text, pres_tok.text,
        PresentedEmbedding(std::move(patch), std::move(rules))});
  }
};

void serialize_presentation(const TreePresentation& p, std::string& out) {
  out += "presentation " + p.name() + " {\n";
  out += "  core { vertices";
  for (int v = 0; v < p.core().size(); ++v) out += " " + p.core_name(v);
  out += ";";
  if (p.core().size() > 1) {
    out += " edges";
    for (int v = 1; v < p.core().size(); ++v)
      out += " " + p.core_name(p.core().parent(v)) + "-" + p.core_name(v);
    out += ";";
  }
  out += " basepoint " + p.core_name(0) + "; }\n";
  for (const Arm& a : p.arms()) {
    out += "  arm " + a.name + " at " + p.core_name(a.attach) + " { ";
    if (a.seq.is_generated()) {
      out += "family ";
      out += a.seq.shape() == DecorationSeq::Shape::Path ? "path" : "star";
      out += " " + std::to_string(a.seq.slope()) + " n + " +
             std::to_string(a.seq.offset()) + ";";
    } else {
      auto list = [&](const std::vector<FiniteRootedTree>& ts) {
        out += "[";
        for (size_t i = 0; i < ts.size(); ++i) {
          if (i) out += ", ";
          out += ts[i].encode();
        }
        out += "];";
      };
      if (!a.seq.prefix().empty()) {
        out += "prefix ";
        list(a.seq.prefix());
        out += " ";
      }
      out += "period ";
      list(a.seq.period());
    }
    out += " }\n";
  }
  out += "}\n";
}

void serialize_embedding(const PresentationDocument& doc,
                         const NamedEmbedding& e, std::string& out) {
  const TreePresentation* p = doc.find_presentation(e.presentation);
  if (!p)
    throw Error(ErrorKind::InvalidArgument,
                "embedding " + e.name + " names an unknown presentation " +
                    e.presentation);
  out += "embedding " + e.name + " on " + e.presentation + " {\n";
  if (!e.embedding.patch().empty()) {
    out += "  patch {";
    for (const auto& [u, v] : e.embedding.patch())
      out += " " + vertex_label(*p, u) + " -> " + vertex_label(*p, v) + ";";
    out += " }\n";
  }
  for (const TailRule& r : e.embedding.rules()) {
    out += "  rule " + p->arm(r.source_arm).name + " -> " +
           p->arm(r.target_arm).name + " shift " + std::to_string(r.shift) +
           " from " + std::to_string(r.valid_from) + ";\n";
  }
  out += "}\n";
}

}  // namespace

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

const TreePresentation* PresentationDocument::find_presentation(
    std::string_view name) const {
  for (const TreePresentation& p : presentations)
    if (p.name() == name) return &p;
  return nullptr;
}

const NamedEmbedding* PresentationDocument::find_embedding(
    std::string_view name) const {
  for (const NamedEmbedding& e : embeddings)
    if (e.name == name) return &e;
  return nullptr;
}

PresentationDocument parse_document(const std::string& text) {
  return Parser(text).run();
}

std::string serialize_document(const PresentationDocument& doc) {
  std::string out;
  for (size_t i = 0; i < doc.presentations.size(); ++i) {
    if (i) out += "\n";
    serialize_presentation(doc.presentations[i], out);
  }
  for (const NamedEmbedding& e : doc.embeddings) {
    if (!out.empty()) out += "\n";
    serialize_embedding(doc, e, out);
  }
  return out;
}

std::string vertex_label(const TreePresentation& p, const Vertex& v) {
  switch (v.kind) {
    case Vertex::Kind::Core:
      return p.core_name(v.core);
    case Vertex::Kind::Spine:
      return p.arm(v.arm).name + std::to_string(v.pos);
    case Vertex::Kind::Dec:
      return p.arm(v.arm).name + std::to_string(v.pos) + "." +
             std::to_string(v.node);
  }
  throw Error(ErrorKind::Internal, "unreachable vertex kind");
}

Vertex parse_vertex_ref(const TreePresentation& p, std::string_view ref) {
  if (auto c = p.core_index(ref)) return Vertex::core_vertex(*c);
  // Longest arm-name match; declared names are checked for ambiguity at
  // parse time, so at most one arm can claim a reference there.
  int best = -1;
  for (int i = 0; i < p.arm_count(); ++i) {
    const std::string& an = p.arm(i).name;
    if (ref.size() > an.size() && ref.compare(0, an.size(), an) == 0 &&
        (best < 0 || an.size() > p.arm(best).name.size()))
      best = i;
  }
  if (best >= 0) {
    std::string_view rest = ref.substr(p.arm(best).name.size());
    size_t dot = rest.find('.');
    std::string_view pos_s =
        dot == std::string_view::npos ? rest : rest.substr(0, dot);
    std::string_view node_s =
        dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
    if (all_digits(pos_s) &&
        (dot == std::string_view::npos || all_digits(node_s))) {
      try {
        long long pos = std::stoll(std::string(pos_s));
        Vertex v = dot == std::string_view::npos
                       ? Vertex::spine(best, pos)
                       : Vertex::dec(best, pos,
                                     static_cast<int>(
                                         std::stoll(std::string(node_s))));
        if (p.valid_vertex(v)) return v;
        throw Error(ErrorKind::InvalidArgument,
                    "no vertex '" + std::string(ref) + "' in " + p.name() +
                        " (position exists only up to the decoration size)");
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument,
                    "position out of range in '" + std::string(ref) + "'");
      }
    }
  }
  throw Error(ErrorKind::InvalidArgument,
              "no vertex named '" + std::string(ref) + "' in " + p.name());
}

}  // namespace treesib
