#ifndef POLARITY_CONTEXT_TYPE_HPP
#define POLARITY_CONTEXT_TYPE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace polarity {

// The nine NPI licensing context types.
enum class ContextType : unsigned char {
  SimpleQuestions = 0,
  Adverbs,
  Questions,
  Superlative,
  Only,
  Conditional,
  Quantifier,
  DeterminerNegation,
  SententialNegation,
};

inline constexpr std::size_t kContextCount = 9;

inline constexpr std::array<ContextType, kContextCount> all_contexts() {
  return {ContextType::SimpleQuestions,    ContextType::Adverbs,
          ContextType::Questions,          ContextType::Superlative,
          ContextType::Only,               ContextType::Conditional,
          ContextType::Quantifier,         ContextType::DeterminerNegation,
          ContextType::SententialNegation};
}

constexpr std::string_view to_string(ContextType c) {
  switch (c) {
    case ContextType::SimpleQuestions:    return "simple_questions";
    case ContextType::Adverbs:            return "adverbs";
    case ContextType::Questions:          return "questions";
    case ContextType::Superlative:        return "superlative";
    case ContextType::Only:               return "only";
    case ContextType::Conditional:        return "conditional";
    case ContextType::Quantifier:         return "quantifier";
    case ContextType::DeterminerNegation: return "determiner_negation";
    case ContextType::SententialNegation: return "sentential_negation";
  }
  return "?";
}

inline std::optional<ContextType> context_from_string(std::string_view s) {
  for (ContextType c : all_contexts()) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

inline constexpr std::size_t context_index(ContextType c) {
  return static_cast<std::size_t>(c);
}

}  // namespace polarity

#endif  // POLARITY_CONTEXT_TYPE_HPP
