#include "mfst/model/checkpoint.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "mfst/data/binary_io.hpp"
#include "mfst/error.hpp"

namespace mfst {

namespace {

constexpr const char* kMagic = "MFSTCKPT 1";

}  // namespace

void save_checkpoint(const std::filesystem::path& path, FrameScoringModel& model) {
  using nlohmann::json;
  const TransformerConfig& c = model.config();
  json params = json::array();
  const ParameterList list = model.parameters();
  for (const Parameter* p : list) {
    params.push_back({{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()}});
  }
  const json header = {
      {"model_dim", c.model_dim},
      {"heads", c.heads},
      {"encoder_layers", c.encoder_layers},
      {"decoder_layers", c.decoder_layers},
      {"ff_dim", c.ff_dim},
      {"positional_encoding", c.positional_encoding},
      {"init_std", c.init_std},
      {"visual_dim", model.dims().visual},
      {"text_dim", model.dims().text},
      {"audio_dim", model.dims().audio},
      {"audio_enabled", model.audio_enabled()},
      {"parameters", params},
  };
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << kMagic << '\n' << header.dump() << '\n';
  for (const Parameter* p : list) write_f64_values(out, p->value.data());
}

FrameScoringModel load_checkpoint(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing checkpoint " + path.string());
  std::string magic, header_line;
  std::getline(in, magic);
  if (magic != kMagic) throw FormatError(path.string() + " is not an MFST checkpoint");
  std::getline(in, header_line);
  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": bad checkpoint header: " + e.what());
  }

  FrameScoringModel model;
  try {
    TransformerConfig c;
    c.model_dim = header.at("model_dim").get<std::size_t>();
    c.heads = header.at("heads").get<std::size_t>();
    c.encoder_layers = header.at("encoder_layers").get<std::size_t>();
    c.decoder_layers = header.at("decoder_layers").get<std::size_t>();
    c.ff_dim = header.at("ff_dim").get<std::size_t>();
    c.positional_encoding = header.at("positional_encoding").get<bool>();
    c.init_std = header.at("init_std").get<double>();
    const ModalityDims dims{header.at("visual_dim").get<std::size_t>(),
                            header.at("text_dim").get<std::size_t>(),
                            header.at("audio_dim").get<std::size_t>()};
    model = FrameScoringModel(dims, c, header.at("audio_enabled").get<bool>(), 0);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": incomplete checkpoint header: " + e.what());
  }

  const ParameterList list = model.parameters();
  const json& table = header.at("parameters");
  if (table.size() != list.size()) {
    throw FormatError(path.string() + ": checkpoint holds " + std::to_string(table.size()) +
                      " parameters, model expects " + std::to_string(list.size()));
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    Parameter& p = *list[i];
    const json& entry = table[i];
    if (entry.at("name").get<std::string>() != p.name ||
        entry.at("rows").get<std::size_t>() != p.value.rows() ||
        entry.at("cols").get<std::size_t>() != p.value.cols()) {
      throw FormatError(path.string() + ": parameter " + std::to_string(i) + " is " +
                        entry.dump() + ", model expects " + p.name + " " +
                        shape_string(p.value));
    }
    read_f64_values(in, p.value.data());
    if (!all_finite(p.value)) throw NumericError(path.string() + ": non-finite value in " + p.name);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(path.string() + ": trailing bytes after the last parameter");
  }
  return model;
}

}  // namespace mfst
