#pragma once

#include <string>
#include <string_view>

namespace doqual {

/// Corpus domain. Feature widths and label rules depend on it.
enum class DocumentKind { tweet, article };

std::string_view to_string(DocumentKind kind);

/// Parses "tweet" or "article"; throws ParameterError otherwise.
DocumentKind parse_document_kind(std::string_view text);

}  // namespace doqual
