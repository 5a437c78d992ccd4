#pragma once

#include "topex/attribution.hpp"
#include "topex/text.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace topex {

/// Largest player count exact_shapley will enumerate (2^n coalitions).
inline constexpr std::size_t kMaxExactPlayers = 20;

/// Value of a coalition. present[k] != 0 when token k is kept; masked tokens
/// are dropped from the input.
using ScoreFunction = std::function<double(std::span<const std::uint8_t> present)>;

struct ShapleyValues {
  std::vector<double> values;  // one per player
  double empty_value = 0.0;    // f(no tokens)
  double full_value = 0.0;     // f(all tokens)
};

/// Exact Shapley values by enumerating every coalition.
/// Throws ValidationError when n > kMaxExactPlayers.
ShapleyValues exact_shapley(std::size_t n, const ScoreFunction& f);

/// Monte Carlo permutation estimate; deterministic for a given seed.
/// Throws ValidationError when samples == 0.
ShapleyValues sampled_shapley(std::size_t n, const ScoreFunction& f,
                              std::uint64_t samples, std::uint64_t seed);

/// A linear bag-of-words scorer with optional co-occurrence terms:
///   score = bias + sum of weights of kept tokens
///         + sum of interaction weights whose words are all kept.
/// Token text is mapped to words with Word::from_token.
struct ToyModel {
  struct Interaction {
    std::vector<Word> words;
    double weight = 0.0;
  };

  double bias = 0.0;
  std::map<Word, double> word_weights;
  std::vector<Interaction> interactions;

  double weight(const Word& w) const;

  /// Value function over presence masks of `tokens`.
  ScoreFunction score_function(std::vector<Word> tokens) const;

  /// Score of the full token sequence.
  double score(const std::vector<Word>& tokens) const;

  /// JSON: {"bias": x, "weights": {word: w}, "interactions": [{"words": [..], "weight": w}]}
  static ToyModel from_json(std::istream& in, const std::string& source = "");
};

/// Exact attributions of a toy model on whitespace-free tokens, one word
/// group per token.
InstanceAttribution attribute_exact(const ToyModel& model,
                                    const std::vector<std::string>& tokens,
                                    const std::string& instance_id,
                                    const std::string& class_label);

InstanceAttribution attribute_sampled(const ToyModel& model,
                                      const std::vector<std::string>& tokens,
                                      const std::string& instance_id,
                                      const std::string& class_label,
                                      std::uint64_t samples, std::uint64_t seed);

}  // namespace topex
