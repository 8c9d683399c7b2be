#ifndef TREESIB_DSL_HPP
#define TREESIB_DSL_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treesib/embedding.hpp"
#include "treesib/presentation.hpp"

namespace treesib {

// Failure while reading document text. Positions are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

// An embedding block, tied by name to a presentation in the same document.
// The embedding is kept as written; it need not validate.
struct NamedEmbedding {
  std::string name;
  std::string presentation;
  PresentedEmbedding embedding{{}, {}};
};

struct PresentationDocument {
  std::vector<TreePresentation> presentations;
  std::vector<NamedEmbedding> embeddings;

  const TreePresentation* find_presentation(std::string_view name) const;
  const NamedEmbedding* find_embedding(std::string_view name) const;
};

// Parses document text:
//
//   presentation NAME {
//     core { vertices v0 v1 ...; edges v0-v1 ...; basepoint v0; }
//     arm NAME at VERTEX { prefix [PAREN, ...]; period [PAREN, ...]; }
//     arm NAME at VERTEX { family path|star A n + B; }
//   }
//   embedding NAME on PRESENTATION {
//     patch { v0 -> A0; ... }
//     rule ARM -> ARM shift K from N;
//   }
//
// PAREN is a balanced-parenthesis rooted tree, "()" a single vertex. The
// basepoint becomes core index 0 and the remaining core vertices keep
// declaration order, so serialized documents reparse to identical indices.
// Comments run from '#' to end of line. Throws ParseError on malformed
// syntax, dangling references, and documents whose pieces violate
// presentation invariants.
PresentationDocument parse_document(const std::string& text);

// Canonical text form; parse_document(serialize_document(d)) reproduces d
// and serialization is a fixed point of parse-then-serialize.
std::string serialize_document(const PresentationDocument& doc);

// "v0" for core vertices, "A3" for spine position 3 of arm A, "A3.1" for
// decoration node 1 at that position.
std::string vertex_label(const TreePresentation& p, const Vertex& v);

// Inverse of vertex_label. Throws Error(InvalidArgument) when the reference
// does not name a vertex of p.
Vertex parse_vertex_ref(const TreePresentation& p, std::string_view ref);

}  // namespace treesib

#endif  // TREESIB_DSL_HPP
