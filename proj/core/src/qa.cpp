#include "decide/qa.hpp"

#include <algorithm>
#include <set>

#include "decide/error.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "qa-extraction";

constexpr std::array<QuestionTemplate, 8> kTemplates{{
    {1, "Is {A} compatible with {B}?", Polarity::Positive},
    {2, "Is {A} not compatible with {B}?", Polarity::Negative},
    {3, "Does {A} support {B}?", Polarity::Positive},
    {4, "Does {A} not support {B}?", Polarity::Negative},
    {5, "Does {A} require {B}?", Polarity::Positive},
    {6, "Does {A} not require {B}?", Polarity::Negative},
    {7, "Does {A} work with {B}?", Polarity::Positive},
    {8, "Does {A} not work with {B}?", Polarity::Negative},
}};

void replace_once(std::string& s, std::string_view from, const std::string& to) {
  auto pos = s.find(from);
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
}

}  // namespace

const std::array<QuestionTemplate, 8>& question_templates() { return kTemplates; }

const QuestionTemplate& question_template(int id) {
  if (id < 1 || id > 8) throw ContractViolation(kModule, "no template Q" + std::to_string(id));
  return kTemplates[static_cast<std::size_t>(id - 1)];
}

std::vector<int> parse_template_strategy(std::string_view spec) {
  auto s = text::to_lower(text::trim(spec));
  if (s == "all") return {1, 2, 3, 4, 5, 6, 7, 8};
  if (s == "positive") return {1, 3, 5, 7};
  if (s == "negative") return {2, 4, 6, 8};
  std::set<int> ids;
  for (auto part : text::split(s, '+')) {
    part = text::trim(part);
    if (part.size() != 2 || part[0] != 'q' || part[1] < '1' || part[1] > '8') {
      throw ConfigError(kModule, "unknown template '" + std::string(part) + "' in strategy '" + std::string(spec) + "'");
    }
    ids.insert(part[1] - '0');
  }
  return {ids.begin(), ids.end()};
}

std::string template_strategy_name(const std::vector<int>& ids) {
  std::string out;
  for (auto id : ids) {
    if (!out.empty()) out += '+';
    out += "Q" + std::to_string(id);
  }
  return out;
}

std::string render_operand(const VersionedComponent& c) { return c.str(); }

std::string instantiate_question(const QuestionTemplate& t, const VersionedComponent& a, const VersionedComponent& b) {
  std::string q(t.pattern);
  replace_once(q, "{A}", render_operand(a));
  replace_once(q, "{B}", render_operand(b));
  return q;
}

std::vector<std::string> instantiate_questions(const VersionedComponent& a, const VersionedComponent& b,
                                               const std::vector<int>& template_ids) {
  std::vector<std::string> out;
  out.reserve(template_ids.size());
  for (auto id : template_ids) out.push_back(instantiate_question(question_template(id), a, b));
  return out;
}

Relation relation_for(Polarity polarity, bool answered_yes) {
  return (polarity == Polarity::Positive) == answered_yes ? Relation::Compatible : Relation::Incompatible;
}

std::vector<std::pair<VersionedComponent, VersionedComponent>> enumerate_pairs(
    const std::vector<VersionedComponent>& components) {
  std::set<VersionedComponent> uniq(components.begin(), components.end());
  std::vector<VersionedComponent> sorted(uniq.begin(), uniq.end());
  std::vector<std::pair<VersionedComponent, VersionedComponent>> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i].name == sorted[j].name) continue;
      out.emplace_back(sorted[i], sorted[j]);
    }
  }
  return out;
}

Evidence infer_relation(const Paragraph& context, const VersionedComponent& a, const VersionedComponent& b,
                        Oracle& oracle, const std::vector<int>& template_ids) {
  if (template_ids.empty()) throw ContractViolation(kModule, "empty template strategy");
  if (context.text.empty()) throw ContractViolation(kModule, "empty context");

  const auto& lo = a < b ? a : b;
  const auto& hi = a < b ? b : a;
  Evidence best;
  bool have = false;
  for (auto id : template_ids) {
    const auto& t = question_template(id);
    OracleRequest req{context.text, instantiate_question(t, lo, hi), context.post_id, lo, hi, id};
    auto resp = oracle.ask(req);
    if (!have || resp.loss < best.loss || (resp.loss == best.loss && id < best.template_used)) {
      best = Evidence{context.post_id, lo, hi, relation_for(t.polarity, resp.yes), resp.loss, id};
      have = true;
    }
  }
  return best;
}

}  // namespace decide
