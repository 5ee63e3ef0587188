#pragma once

#include <random>

#include "mfst/data/records.hpp"
#include "mfst/numerics/autodiff.hpp"

namespace mfst {

struct ModalityDims {
  std::size_t visual = 0;
  std::size_t text = 0;
  std::size_t audio = 0;

  friend bool operator==(const ModalityDims&, const ModalityDims&) = default;
};

/// Maps visual, text and audio features into a shared d-dimensional space,
/// lets frames attend over caption tokens, and folds audio back in.
///
/// visual/text/audio projections: affine, d_x -> d
/// query/key/value:               linear, d -> d, single head
/// fuse:                          affine, 2d -> d over [h_VT | h_A]
struct FusionLayer {
  FusionLayer() = default;
  FusionLayer(ModalityDims dims, std::size_t model_dim, bool audio_enabled, double init_std,
              std::mt19937_64& rng);

  ModalityDims dims;
  std::size_t model_dim = 0;
  bool audio_enabled = true;

  Parameter visual_weight, visual_bias;
  Parameter text_weight, text_bias;
  Parameter audio_weight, audio_bias;
  Parameter query_weight, key_weight, value_weight;
  Parameter fuse_weight, fuse_bias;

  ParameterList parameters();
};

struct ProjectedModalities {
  ad::Var visual;  // N x d
  ad::Var text;    // M x d
  ad::Var audio;   // N x d
};

/// h = x W + b per modality, no nonlinearity.
ProjectedModalities project_modalities(ad::Tape& tape, const FeatureBundle& bundle,
                                       FusionLayer& layer);

/// attention(h_V Wq, h_T Wk, h_T Wv), before the residual.
ad::Var text_attention(ad::Var visual, ad::Var text, FusionLayer& layer);

/// Text-attended visual representation: text_attention(...) + h_V.
ad::Var text_attend(ad::Var visual, ad::Var text, FusionLayer& layer);

/// [h_VT | h_A] W_f + b_f + h_VT when audio is enabled; h_VT itself otherwise.
ad::Var fuse_audio(ad::Var text_attended, ad::Var audio, FusionLayer& layer);

/// Full fusion path for one video: N x d.
ad::Var fuse(ad::Tape& tape, const FeatureBundle& bundle, FusionLayer& layer);

}  // namespace mfst
