#include "mfst/fusion/fusion.hpp"

#include <array>

#include "mfst/error.hpp"

namespace mfst {

FusionLayer::FusionLayer(ModalityDims dims, std::size_t model_dim, bool audio_enabled,
                         double init_std, std::mt19937_64& rng)
    : dims(dims), model_dim(model_dim), audio_enabled(audio_enabled) {
  const std::size_t d = model_dim;
  auto weight = [&](const char* name, std::size_t in) {
    return Parameter(std::string("fusion.") + name + ".weight", gaussian_tensor(in, d, init_std, rng));
  };
  auto bias = [&](const char* name) {
    return Parameter(std::string("fusion.") + name + ".bias", Tensor2(1, d));
  };
  visual_weight = weight("visual", dims.visual);
  visual_bias = bias("visual");
  text_weight = weight("text", dims.text);
  text_bias = bias("text");
  audio_weight = weight("audio", dims.audio);
  audio_bias = bias("audio");
  query_weight = weight("query", d);
  key_weight = weight("key", d);
  value_weight = weight("value", d);
  fuse_weight = weight("fuse", 2 * d);
  fuse_bias = bias("fuse");
}

ParameterList FusionLayer::parameters() {
  return {&visual_weight, &visual_bias, &text_weight, &text_bias, &audio_weight, &audio_bias,
          &query_weight,  &key_weight,  &value_weight, &fuse_weight, &fuse_bias};
}

ProjectedModalities project_modalities(ad::Tape& tape, const FeatureBundle& bundle,
                                       FusionLayer& layer) {
  auto check = [&](const Tensor2& x, std::size_t expected, const char* what) {
    if (x.cols() != expected) {
      throw DimensionError(std::string("project_modalities: ") + what + " features are " +
                           shape_string(x) + ", layer expects width " + std::to_string(expected));
    }
  };
  check(bundle.visual, layer.dims.visual, "visual");
  check(bundle.text, layer.dims.text, "text");
  check(bundle.audio, layer.dims.audio, "audio");
  if (bundle.audio.rows() != bundle.visual.rows()) {
    throw DimensionError("project_modalities: audio rows " + std::to_string(bundle.audio.rows()) +
                         " != visual rows " + std::to_string(bundle.visual.rows()));
  }
  return {
      ad::affine(tape.constant(bundle.visual), tape.parameter(layer.visual_weight),
                 tape.parameter(layer.visual_bias)),
      ad::affine(tape.constant(bundle.text), tape.parameter(layer.text_weight),
                 tape.parameter(layer.text_bias)),
      ad::affine(tape.constant(bundle.audio), tape.parameter(layer.audio_weight),
                 tape.parameter(layer.audio_bias)),
  };
}

ad::Var text_attention(ad::Var visual, ad::Var text, FusionLayer& layer) {
  if (visual.cols() != layer.model_dim || text.cols() != layer.model_dim) {
    throw DimensionError("text_attend: expected width " + std::to_string(layer.model_dim) +
                         ", got " + shape_string(visual.value()) + " and " +
                         shape_string(text.value()));
  }
  ad::Tape& tape = visual.tape();
  const ad::Var q = ad::matmul(visual, tape.parameter(layer.query_weight));
  const ad::Var k = ad::matmul(text, tape.parameter(layer.key_weight));
  const ad::Var v = ad::matmul(text, tape.parameter(layer.value_weight));
  return ad::attention(q, k, v);
}

ad::Var text_attend(ad::Var visual, ad::Var text, FusionLayer& layer) {
  return ad::add(text_attention(visual, text, layer), visual);
}

ad::Var fuse_audio(ad::Var text_attended, ad::Var audio, FusionLayer& layer) {
  if (text_attended.rows() != audio.rows()) {
    throw DimensionError("fuse_audio: " + std::to_string(text_attended.rows()) +
                         " attended rows vs " + std::to_string(audio.rows()) + " audio rows");
  }
  if (!layer.audio_enabled) return text_attended;
  ad::Tape& tape = text_attended.tape();
  const std::array parts{text_attended, audio};
  const ad::Var joined = ad::concat_cols(parts);
  const ad::Var mixed =
      ad::affine(joined, tape.parameter(layer.fuse_weight), tape.parameter(layer.fuse_bias));
  return ad::add(mixed, text_attended);
}

ad::Var fuse(ad::Tape& tape, const FeatureBundle& bundle, FusionLayer& layer) {
  const ProjectedModalities h = project_modalities(tape, bundle, layer);
  return fuse_audio(text_attend(h.visual, h.text, layer), h.audio, layer);
}

}  // namespace mfst
