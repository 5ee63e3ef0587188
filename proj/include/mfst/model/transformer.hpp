#pragma once

#include <random>
#include <string>
#include <vector>

#include "mfst/numerics/autodiff.hpp"

namespace mfst {

struct TransformerConfig {
  std::size_t model_dim = 64;
  std::size_t heads = 4;
  std::size_t encoder_layers = 2;
  std::size_t decoder_layers = 2;
  std::size_t ff_dim = 256;
  /// Add sinusoidal positions at the bottom of both stacks.
  bool positional_encoding = true;
  double init_std = 0.02;

  /// Throws ConfigError on zero counts, odd model_dim or heads not dividing it.
  void validate() const;
  friend bool operator==(const TransformerConfig&, const TransformerConfig&) = default;
};

struct LayerNormParams {
  LayerNormParams() = default;
  LayerNormParams(const std::string& prefix, std::size_t dim);
  Parameter gain, bias;
  ad::Var operator()(ad::Var x);
};

struct MultiHeadAttention {
  MultiHeadAttention() = default;
  MultiHeadAttention(const std::string& prefix, std::size_t dim, std::size_t heads,
                     double init_std, std::mt19937_64& rng);

  std::size_t heads = 1;
  Parameter query_weight, query_bias;
  Parameter key_weight, key_bias;
  Parameter value_weight, value_bias;
  Parameter output_weight, output_bias;

  /// Unmasked attention of `queries` over `context`.
  ad::Var operator()(ad::Var queries, ad::Var context);
  void collect(ParameterList& out);
};

struct FeedForward {
  FeedForward() = default;
  FeedForward(const std::string& prefix, std::size_t dim, std::size_t hidden, double init_std,
              std::mt19937_64& rng);

  Parameter in_weight, in_bias, out_weight, out_bias;

  ad::Var operator()(ad::Var x);
  void collect(ParameterList& out);
};

/// Pre-norm block: x + SelfAttn(LN(x)), then x + FF(LN(x)).
struct EncoderLayer {
  EncoderLayer() = default;
  EncoderLayer(const std::string& prefix, const TransformerConfig& config, std::mt19937_64& rng);

  LayerNormParams attn_norm, ff_norm;
  MultiHeadAttention self_attention;
  FeedForward feed_forward;

  ad::Var operator()(ad::Var x);
  void collect(ParameterList& out);
};

/// Pre-norm block with non-causal self-attention, cross-attention to the
/// encoder memory, and a feed-forward sublayer.
struct DecoderLayer {
  DecoderLayer() = default;
  DecoderLayer(const std::string& prefix, const TransformerConfig& config, std::mt19937_64& rng);

  LayerNormParams self_norm, cross_norm, ff_norm;
  MultiHeadAttention self_attention, cross_attention;
  FeedForward feed_forward;

  ad::Var operator()(ad::Var x, ad::Var memory);
  void collect(ParameterList& out);
};

}  // namespace mfst
