#include "doqual/document_kind.hpp"

#include "doqual/error.hpp"

namespace doqual {

std::string_view to_string(DocumentKind kind) {
  return kind == DocumentKind::tweet ? "tweet" : "article";
}

DocumentKind parse_document_kind(std::string_view text) {
  if (text == "tweet") return DocumentKind::tweet;
  if (text == "article") return DocumentKind::article;
  throw ParameterError("unknown document kind '" + std::string(text) + "' (expected tweet|article)");
}

}  // namespace doqual
