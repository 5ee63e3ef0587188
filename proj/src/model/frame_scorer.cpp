#include "mfst/model/frame_scorer.hpp"

#include <random>

#include "mfst/error.hpp"

namespace mfst {

FrameScoringModel::FrameScoringModel(ModalityDims dims, TransformerConfig config,
                                     bool audio_enabled, std::uint64_t seed)
    : config_(config) {
  config_.validate();
  if (dims.visual == 0 || dims.text == 0 || dims.audio == 0) {
    throw ConfigError("model: modality dims must be >= 1");
  }
  std::mt19937_64 rng(seed);
  const std::size_t d = config_.model_dim;
  fusion_ = FusionLayer(dims, d, audio_enabled, config_.init_std, rng);
  for (std::size_t i = 0; i < config_.encoder_layers; ++i) {
    encoder_.emplace_back("encoder." + std::to_string(i), config_, rng);
  }
  encoder_norm_ = LayerNormParams("encoder.norm", d);
  for (std::size_t i = 0; i < config_.decoder_layers; ++i) {
    decoder_.emplace_back("decoder." + std::to_string(i), config_, rng);
  }
  decoder_norm_ = LayerNormParams("decoder.norm", d);
  head_weight_ = Parameter("head.weight", gaussian_tensor(d, 1, config_.init_std, rng));
  head_bias_ = Parameter("head.bias", Tensor2(1, 1));
}

ad::Var FrameScoringModel::score(ad::Tape& tape, const FeatureBundle& bundle) {
  ad::Var fused = fuse(tape, bundle, fusion_);
  if (config_.positional_encoding) {
    fused = ad::add(fused, tape.constant(sinusoidal_positions(fused.rows(), fused.cols())));
  }
  ad::Var memory = fused;
  for (EncoderLayer& layer : encoder_) memory = layer(memory);
  memory = encoder_norm_(memory);

  ad::Var x = fused;
  for (DecoderLayer& layer : decoder_) x = layer(x, memory);
  x = decoder_norm_(x);
  return ad::sigmoid(
      ad::affine(x, tape.parameter(head_weight_), tape.parameter(head_bias_)));
}

ParameterList FrameScoringModel::parameters() {
  ParameterList out = fusion_.parameters();
  for (EncoderLayer& layer : encoder_) layer.collect(out);
  out.push_back(&encoder_norm_.gain);
  out.push_back(&encoder_norm_.bias);
  for (DecoderLayer& layer : decoder_) layer.collect(out);
  out.push_back(&decoder_norm_.gain);
  out.push_back(&decoder_norm_.bias);
  out.push_back(&head_weight_);
  out.push_back(&head_bias_);
  return out;
}

ScoreVector forward(FrameScoringModel& model, const FeatureBundle& bundle) {
  ad::Tape tape(false);
  const ad::Var s = model.score(tape, bundle);
  const auto values = s.value().data();
  return ScoreVector(values.begin(), values.end());
}

}  // namespace mfst
