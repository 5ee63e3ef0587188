#pragma once

#include <cstdint>
#include <vector>

#include "mfst/fusion/fusion.hpp"
#include "mfst/model/transformer.hpp"

namespace mfst {

/// Fusion layer followed by an encoder-decoder transformer and a sigmoid
/// score head.
///
/// The fused sequence h_VTA, plus sinusoidal positions, feeds both stacks: the
/// encoder turns it into a memory, the decoder self-attends over it and
/// cross-attends to that memory. Nothing is masked because scoring is not
/// autoregressive. Each decoder row maps to one frame score via
/// sigmoid(x w + b).
///
/// Parameters live inside the model; a ParameterList taken from one instance
/// is invalidated by copying or moving it.
class FrameScoringModel {
 public:
  FrameScoringModel() = default;
  FrameScoringModel(ModalityDims dims, TransformerConfig config, bool audio_enabled,
                    std::uint64_t seed);

  const TransformerConfig& config() const { return config_; }
  const ModalityDims& dims() const { return fusion_.dims; }
  bool audio_enabled() const { return fusion_.audio_enabled; }
  void set_audio_enabled(bool enabled) { fusion_.audio_enabled = enabled; }

  /// Records the forward pass on `tape`; returns N x 1 scores in (0,1).
  ad::Var score(ad::Tape& tape, const FeatureBundle& bundle);

  /// Every trainable parameter in a fixed order (fusion, encoder, decoder, head).
  ParameterList parameters();

  FusionLayer& fusion() { return fusion_; }

 private:
  TransformerConfig config_;
  FusionLayer fusion_;
  std::vector<EncoderLayer> encoder_;
  LayerNormParams encoder_norm_;
  std::vector<DecoderLayer> decoder_;
  LayerNormParams decoder_norm_;
  Parameter head_weight_;
  Parameter head_bias_;
};

/// Inference on a non-recording tape.
ScoreVector forward(FrameScoringModel& model, const FeatureBundle& bundle);

}  // namespace mfst
