#include "ctbr/rules.hpp"

#include <algorithm>
#include <cctype>

#include "ctbr/encoder.hpp"
#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

std::string_view kind_name(SingleModalKind kind) {
  switch (kind) {
    case SingleModalKind::kMainSectionTitle:
      return "main_section";
    case SingleModalKind::kSubSectionTitle:
      return "sub_section";
    case SingleModalKind::kFigureTitle:
      return "figure_title";
    case SingleModalKind::kTableTitle:
      return "table_title";
  }
  return "main_section";
}

namespace {

std::regex compile(const std::string& pattern, const char* field) {
  const std::string path = std::string("/") + field;
  if (pattern.size() < 2 || pattern.front() != '^' || pattern.back() != '$')
    throw SchemaError(path, "pattern must be anchored with ^...$");
  try {
    return std::regex(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw SchemaError(path, std::string("invalid regex: ") + e.what());
  }
}

}  // namespace

RulePack::RulePack(Patterns patterns, bool required_font_distinct)
    : patterns_(std::move(patterns)),
      required_font_distinct_(required_font_distinct),
      main_(compile(patterns_.main_section, "main_section")),
      sub_(compile(patterns_.sub_section, "sub_section")),
      figure_(compile(patterns_.figure_title, "figure_title")),
      table_(compile(patterns_.table_title, "table_title")) {}

RulePack RulePack::acl_as_printed() {
  return RulePack({R"(^[0-9]{1,2}\s*[\.|,].*$)",
                   R"(^[0-9]{1,2}(\.[0-9]{1,2}){1,4}\s+.*$)",
                   R"(^[F|f][I|i][G|g][U|u][R|r][E|e]\s*\d+\s*:.*$)",
                   R"(^[T|t][A|a][B|b][L|l][E|e]\d+\s*:.*$)"},
                  true);
}

RulePack RulePack::acl_corrected() {
  Patterns p = acl_as_printed().patterns();
  p.table_title = R"(^[T|t][A|a][B|b][L|l][E|e]\s*\d+\s*:.*$)";
  return RulePack(std::move(p), true);
}

RulePack RulePack::from_json(std::string_view bytes) {
  const auto root = json_util::parse(bytes);
  json_util::require_object(root, "");
  Patterns p{json_util::get_string(root, "main_section", ""),
             json_util::get_string(root, "sub_section", ""),
             json_util::get_string(root, "figure_title", ""),
             json_util::get_string(root, "table_title", "")};
  return RulePack(std::move(p),
                  json_util::get_bool(root, "required_font_distinct", ""));
}

std::string RulePack::to_json() const {
  return json_util::dump({{"main_section", patterns_.main_section},
                          {"sub_section", patterns_.sub_section},
                          {"figure_title", patterns_.figure_title},
                          {"table_title", patterns_.table_title},
                          {"required_font_distinct", required_font_distinct_}});
}

std::optional<SingleModalKind> RulePack::match(const std::string& line) const {
  if (std::regex_match(line, sub_)) return SingleModalKind::kSubSectionTitle;
  if (std::regex_match(line, main_)) return SingleModalKind::kMainSectionTitle;
  if (std::regex_match(line, figure_)) return SingleModalKind::kFigureTitle;
  if (std::regex_match(line, table_)) return SingleModalKind::kTableTitle;
  return std::nullopt;
}

std::optional<SingleModalKind> match_single_modal(const std::string& text,
                                                  const RulePack& pack) {
  return pack.match(text);
}

TitleMap detect_single_modal_blocks(const BlockDocument& doc,
                                    const RulePack& pack,
                                    const DocumentStats& stats) {
  TitleMap titles;
  for (const TextBlock* block : doc.blocks_in_order()) {
    const auto kind = pack.match(first_line(*block));
    if (!kind) continue;
    if (is_section_title(*kind) && pack.required_font_distinct()) {
      const FontKey font = dominant_font(*block);
      if (font.name == stats.body_font_name &&
          font.size == stats.body_font_size)
        continue;
    }
    titles.emplace(block->id, *kind);
  }
  return titles;
}

std::string_view domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::kBasicInformation:
      return "basic_information";
    case DomainKind::kBody:
      return "body";
    case DomainKind::kReference:
      return "reference";
    case DomainKind::kAppendix:
      return "appendix";
  }
  return "body";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

bool is_reference_heading(std::string_view line) {
  const std::string l = lower(trim(line));
  return l == "references" || l == "bibliography";
}

bool is_appendix_heading(std::string_view line) {
  const std::string l = lower(trim(line));
  if (l == "appendix" || l == "appendices") return true;
  return l.rfind("appendix ", 0) == 0 || l.rfind("appendix:", 0) == 0;
}

std::vector<BaseDomain> segment_base_domains(const BlockDocument& doc,
                                             const TitleMap& titles) {
  const auto blocks = doc.blocks_in_order();
  const std::size_t n = blocks.size();

  std::size_t body_begin = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = titles.find(blocks[i]->id);
    if (it != titles.end() &&
        it->second == SingleModalKind::kMainSectionTitle) {
      body_begin = i;
      break;
    }
  }
  if (body_begin == n) throw NoBodyError("no main section title found");

  std::size_t ref_begin = n;
  for (std::size_t i = body_begin + 1; i < n; ++i) {
    if (is_reference_heading(first_line(*blocks[i]))) {
      ref_begin = i;
      break;
    }
  }
  std::size_t app_begin = n;
  for (std::size_t i = (ref_begin < n ? ref_begin : body_begin) + 1; i < n;
       ++i) {
    if (is_appendix_heading(first_line(*blocks[i]))) {
      app_begin = i;
      break;
    }
  }

  const std::size_t body_end = std::min(ref_begin, app_begin);
  std::vector<BaseDomain> domains;
  auto push = [&](DomainKind kind, std::size_t b, std::size_t e) {
    if (e > b) domains.push_back({kind, b, e});
  };
  push(DomainKind::kBasicInformation, 0, body_begin);
  push(DomainKind::kBody, body_begin, body_end);
  if (ref_begin < n) push(DomainKind::kReference, ref_begin, app_begin);
  if (app_begin < n) push(DomainKind::kAppendix, app_begin, n);
  return domains;
}

}  // namespace ctbr
