#include "mfst/model/transformer.hpp"

#include <vector>

#include "mfst/error.hpp"

namespace mfst {

void TransformerConfig::validate() const {
  if (model_dim == 0 || heads == 0 || encoder_layers == 0 || decoder_layers == 0 || ff_dim == 0) {
    throw ConfigError("transformer config: all sizes and counts must be >= 1");
  }
  if (model_dim % heads != 0) {
    throw ConfigError("transformer config: model_dim " + std::to_string(model_dim) +
                      " not divisible by heads " + std::to_string(heads));
  }
  if (positional_encoding && model_dim % 2 != 0) {
    throw ConfigError("transformer config: sinusoidal positions need an even model_dim");
  }
  if (!(init_std > 0.0)) throw ConfigError("transformer config: init_std must be > 0");
}

namespace {

Parameter weight(const std::string& name, std::size_t in, std::size_t out, double std,
                 std::mt19937_64& rng) {
  return Parameter(name + ".weight", gaussian_tensor(in, out, std, rng));
}

Parameter bias(const std::string& name, std::size_t out) {
  return Parameter(name + ".bias", Tensor2(1, out));
}

}  // namespace

LayerNormParams::LayerNormParams(const std::string& prefix, std::size_t dim)
    : gain(prefix + ".gain", Tensor2(1, dim, 1.0)), bias(prefix + ".bias", Tensor2(1, dim)) {}

ad::Var LayerNormParams::operator()(ad::Var x) {
  ad::Tape& tape = x.tape();
  return ad::layer_norm(x, tape.parameter(gain), tape.parameter(bias));
}

MultiHeadAttention::MultiHeadAttention(const std::string& prefix, std::size_t dim,
                                       std::size_t heads, double init_std, std::mt19937_64& rng)
    : heads(heads),
      query_weight(weight(prefix + ".query", dim, dim, init_std, rng)),
      query_bias(bias(prefix + ".query", dim)),
      key_weight(weight(prefix + ".key", dim, dim, init_std, rng)),
      key_bias(bias(prefix + ".key", dim)),
      value_weight(weight(prefix + ".value", dim, dim, init_std, rng)),
      value_bias(bias(prefix + ".value", dim)),
      output_weight(weight(prefix + ".output", dim, dim, init_std, rng)),
      output_bias(bias(prefix + ".output", dim)) {}

ad::Var MultiHeadAttention::operator()(ad::Var queries, ad::Var context) {
  ad::Tape& tape = queries.tape();
  const ad::Var q = ad::affine(queries, tape.parameter(query_weight), tape.parameter(query_bias));
  const ad::Var k = ad::affine(context, tape.parameter(key_weight), tape.parameter(key_bias));
  const ad::Var v = ad::affine(context, tape.parameter(value_weight), tape.parameter(value_bias));
  ad::Var mixed;
  if (heads == 1) {
    mixed = ad::attention(q, k, v);
  } else {
    const std::size_t width = q.cols() / heads;
    std::vector<ad::Var> per_head;
    per_head.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
      per_head.push_back(ad::attention(ad::slice_cols(q, h * width, width),
                                       ad::slice_cols(k, h * width, width),
                                       ad::slice_cols(v, h * width, width)));
    }
    mixed = ad::concat_cols(per_head);
  }
  return ad::affine(mixed, tape.parameter(output_weight), tape.parameter(output_bias));
}

void MultiHeadAttention::collect(ParameterList& out) {
  for (Parameter* p : {&query_weight, &query_bias, &key_weight, &key_bias, &value_weight,
                       &value_bias, &output_weight, &output_bias}) {
    out.push_back(p);
  }
}

FeedForward::FeedForward(const std::string& prefix, std::size_t dim, std::size_t hidden,
                         double init_std, std::mt19937_64& rng)
    : in_weight(weight(prefix + ".in", dim, hidden, init_std, rng)),
      in_bias(bias(prefix + ".in", hidden)),
      out_weight(weight(prefix + ".out", hidden, dim, init_std, rng)),
      out_bias(bias(prefix + ".out", dim)) {}

ad::Var FeedForward::operator()(ad::Var x) {
  ad::Tape& tape = x.tape();
  const ad::Var hidden =
      ad::relu(ad::affine(x, tape.parameter(in_weight), tape.parameter(in_bias)));
  return ad::affine(hidden, tape.parameter(out_weight), tape.parameter(out_bias));
}

void FeedForward::collect(ParameterList& out) {
  for (Parameter* p : {&in_weight, &in_bias, &out_weight, &out_bias}) out.push_back(p);
}

EncoderLayer::EncoderLayer(const std::string& prefix, const TransformerConfig& config,
                           std::mt19937_64& rng)
    : attn_norm(prefix + ".attn_norm", config.model_dim),
      ff_norm(prefix + ".ff_norm", config.model_dim),
      self_attention(prefix + ".self_attn", config.model_dim, config.heads, config.init_std, rng),
      feed_forward(prefix + ".ff", config.model_dim, config.ff_dim, config.init_std, rng) {}

ad::Var EncoderLayer::operator()(ad::Var x) {
  const ad::Var normed = attn_norm(x);
  x = ad::add(x, self_attention(normed, normed));
  return ad::add(x, feed_forward(ff_norm(x)));
}

void EncoderLayer::collect(ParameterList& out) {
  out.push_back(&attn_norm.gain);
  out.push_back(&attn_norm.bias);
  self_attention.collect(out);
  out.push_back(&ff_norm.gain);
  out.push_back(&ff_norm.bias);
  feed_forward.collect(out);
}

DecoderLayer::DecoderLayer(const std::string& prefix, const TransformerConfig& config,
                           std::mt19937_64& rng)
    : self_norm(prefix + ".self_norm", config.model_dim),
      cross_norm(prefix + ".cross_norm", config.model_dim),
      ff_norm(prefix + ".ff_norm", config.model_dim),
      self_attention(prefix + ".self_attn", config.model_dim, config.heads, config.init_std, rng),
      cross_attention(prefix + ".cross_attn", config.model_dim, config.heads, config.init_std, rng),
      feed_forward(prefix + ".ff", config.model_dim, config.ff_dim, config.init_std, rng) {}

ad::Var DecoderLayer::operator()(ad::Var x, ad::Var memory) {
  const ad::Var normed = self_norm(x);
  x = ad::add(x, self_attention(normed, normed));
  x = ad::add(x, cross_attention(cross_norm(x), memory));
  return ad::add(x, feed_forward(ff_norm(x)));
}

void DecoderLayer::collect(ParameterList& out) {
  out.push_back(&self_norm.gain);
  out.push_back(&self_norm.bias);
  self_attention.collect(out);
  out.push_back(&cross_norm.gain);
  out.push_back(&cross_norm.bias);
  cross_attention.collect(out);
  out.push_back(&ff_norm.gain);
  out.push_back(&ff_norm.bias);
  feed_forward.collect(out);
}

}  // namespace mfst
