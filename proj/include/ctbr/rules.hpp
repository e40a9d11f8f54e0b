#pragma once

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "ctbr/document.hpp"

namespace ctbr {

struct DocumentStats;

enum class SingleModalKind {
  kMainSectionTitle,
  kSubSectionTitle,
  kFigureTitle,
  kTableTitle,
};

std::string_view kind_name(SingleModalKind kind);

inline bool is_section_title(SingleModalKind kind) {
  return kind == SingleModalKind::kMainSectionTitle ||
         kind == SingleModalKind::kSubSectionTitle;
}

// Regex patterns for single-modal block recognition. Patterns are data so
// other publication styles are a config change.
class RulePack {
 public:
  struct Patterns {
    std::string main_section;
    std::string sub_section;
    std::string figure_title;
    std::string table_title;
  };

  // Throws SchemaError if a pattern fails to compile or is not anchored
  // with ^...$.
  RulePack(Patterns patterns, bool required_font_distinct);

  // ACL patterns exactly as published. Note the table pattern has no
  // whitespace between the keyword and the number ("Table3:" only).
  static RulePack acl_as_printed();
  // Same, with `\s*` allowed between "Table" and its number.
  static RulePack acl_corrected();

  static RulePack from_json(std::string_view bytes);
  std::string to_json() const;

  const Patterns& patterns() const { return patterns_; }
  bool required_font_distinct() const { return required_font_distinct_; }

  // Precedence: sub-section, main section, figure, table.
  std::optional<SingleModalKind> match(const std::string& line) const;

 private:
  Patterns patterns_;
  bool required_font_distinct_;
  std::regex main_;
  std::regex sub_;
  std::regex figure_;
  std::regex table_;
};

// `text` is a block's first line with surrounding whitespace stripped.
std::optional<SingleModalKind> match_single_modal(const std::string& text,
                                                  const RulePack& pack);

using TitleMap = std::map<std::string, SingleModalKind>;

// Regex match on each block's first line, then the font filter: section
// titles must differ from the body font (name or size) when the pack asks
// for it. Figure and table titles are exempt.
TitleMap detect_single_modal_blocks(const BlockDocument& doc,
                                    const RulePack& pack,
                                    const DocumentStats& stats);

enum class DomainKind { kBasicInformation, kBody, kReference, kAppendix };

std::string_view domain_name(DomainKind kind);

// Half-open range [begin, end) over BlockDocument::blocks_in_order().
struct BaseDomain {
  DomainKind kind;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
};

// Splits the block sequence into contiguous domains. Empty domains are
// omitted. Throws NoBodyError when no main section title exists.
std::vector<BaseDomain> segment_base_domains(const BlockDocument& doc,
                                             const TitleMap& titles);

bool is_reference_heading(std::string_view line);
bool is_appendix_heading(std::string_view line);

}  // namespace ctbr
