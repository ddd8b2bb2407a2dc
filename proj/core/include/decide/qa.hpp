#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decide/corpus.hpp"
#include "decide/model.hpp"

namespace decide {

enum class Polarity { Positive, Negative };

struct QuestionTemplate {
  int id = 0;  ///< 1..8
  std::string_view pattern;  ///< "{A}" and "{B}" placeholders
  Polarity polarity = Polarity::Positive;

  std::string name() const { return "Q" + std::to_string(id); }
};

/// Q1..Q8; the even ones are the negated phrasings.
const std::array<QuestionTemplate, 8>& question_templates();
const QuestionTemplate& question_template(int id);

/// "Q1+Q2" (default), "Q7", "positive", "negative" or "all". Returns template
/// ids in ascending order. Throws ConfigError on anything else.
std::vector<int> parse_template_strategy(std::string_view spec);
std::string template_strategy_name(const std::vector<int>& ids);

/// "name version", or the bare name for versionless (hardware) operands.
std::string render_operand(const VersionedComponent& c);
std::string instantiate_question(const QuestionTemplate& t, const VersionedComponent& a, const VersionedComponent& b);
std::vector<std::string> instantiate_questions(const VersionedComponent& a, const VersionedComponent& b,
                                               const std::vector<int>& template_ids);

/// positive/yes and negative/no read as Compatible; the other two as
/// Incompatible.
Relation relation_for(Polarity polarity, bool answered_yes);

struct OracleRequest {
  std::string context;
  std::string question;
  // Not sent over the wire; lets scripted oracles key their answers.
  std::int64_t post_id = 0;
  VersionedComponent a;
  VersionedComponent b;
  int template_id = 0;
};

struct OracleResponse {
  bool yes = false;
  double loss = 0.0;
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  /// Must be safe to call from several threads at once.
  virtual OracleResponse ask(const OracleRequest& request) = 0;
};

struct Evidence {
  std::int64_t post_id = 0;
  VersionedComponent a;  ///< a < b
  VersionedComponent b;
  Relation relation = Relation::Compatible;
  double loss = 0.0;
  int template_used = 0;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

/// Unordered pairs of a paragraph's components in canonical (a < b) order.
/// Pairs of two versions of the same component are not relations between
/// stack components and are skipped.
std::vector<std::pair<VersionedComponent, VersionedComponent>> enumerate_pairs(
    const std::vector<VersionedComponent>& components);

/// Asks every template in `template_ids` once and keeps the relation of the
/// lowest-loss answer (ties go to the lower template id). Oracle errors
/// propagate.
Evidence infer_relation(const Paragraph& context, const VersionedComponent& a, const VersionedComponent& b,
                        Oracle& oracle, const std::vector<int>& template_ids);

}  // namespace decide
