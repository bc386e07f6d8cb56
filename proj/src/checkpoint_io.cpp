#include "polarity/checkpoint_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "polarity/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint container assumes a little-endian host");

namespace polarity {

using nlohmann::json;

namespace {
constexpr char kMagic[8] = {'P', 'O', 'L', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

json config_to_json(const LMConfig& c) {
  return json{{"embed_dim", c.embed_dim},
              {"hidden_dim", c.hidden_dim},
              {"layers", c.layers},
              {"dropout", c.dropout},
              {"batch_size", c.batch_size},
              {"bptt_len", c.bptt_len},
              {"base_lr", c.base_lr},
              {"lr_decay_factor", c.lr_decay_factor},
              {"epochs", c.epochs},
              {"checkpoint_every_batches", c.checkpoint_every_batches},
              {"min_count", c.min_count},
              {"clip_norm", c.clip_norm},
              {"seed", c.seed}};
}

LMConfig config_from_json(const json& j) {
  LMConfig c;
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.layers = j.at("layers").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.bptt_len = j.at("bptt_len").get<std::size_t>();
  c.base_lr = j.at("base_lr").get<double>();
  c.lr_decay_factor = j.at("lr_decay_factor").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.checkpoint_every_batches = j.at("checkpoint_every_batches").get<std::size_t>();
  c.min_count = j.at("min_count").get<std::size_t>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

namespace {

json meta_to_json(const CheckpointedModel& m) {
  return json{{"step", m.step},           {"tokens_seen", m.tokens_seen},
              {"epoch", m.epoch},         {"pos_in_epoch", m.pos_in_epoch},
              {"train_loss", m.train_loss}, {"val_loss", m.val_loss},
              {"lr", m.lr}};
}

}  // namespace

void save_checkpoint(const CheckpointedModel& model, const std::string& path) {
  json shapes = json::array();
  model.params().visit([&](const std::string& name, const float*, std::size_t len, std::size_t r,
                           std::size_t c) {
    shapes.push_back(json{{"name", name}, {"len", len}, {"rows", r}, {"cols", c}});
  });
  json header{{"config", config_to_json(model.config())},
              {"vocab", model.vocab().tokens()},
              {"params", shapes},
              {"meta", meta_to_json(model)}};
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t hlen = header_str.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  model.params().visit(
      [&](const std::string&, const float* data, std::size_t len, std::size_t, std::size_t) {
        out.write(reinterpret_cast<const char*>(data),
                  static_cast<std::streamsize>(len * sizeof(float)));
      });
  if (!out) throw InputError("short write on checkpoint: " + path);

  std::ofstream side(path + ".json", std::ios::binary);
  if (!side) throw InputError("cannot write checkpoint sidecar: " + path + ".json");
  side << meta_to_json(model).dump(2) << '\n';
}

CheckpointedModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw FormatError("bad checkpoint magic: " + path);
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (version != kVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  std::string header_str(hlen, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw FormatError("truncated checkpoint header: " + path);

  json header;
  try {
    header = json::parse(header_str);
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }
  const LMConfig config = config_from_json(header.at("config"));
  Vocab vocab = Vocab::from_tokens(header.at("vocab").get<std::vector<std::string>>());

  LstmParams<float> params(vocab.size(), config.embed_dim, config.hidden_dim, config.layers);
  std::size_t idx = 0;
  const json& shapes = header.at("params");
  params.visit([&](const std::string& name, float* data, std::size_t len, std::size_t, std::size_t) {
    if (idx >= shapes.size() || shapes[idx].at("name") != name ||
        shapes[idx].at("len").get<std::size_t>() != len) {
      throw FormatError("checkpoint parameter mismatch at '" + name + "': " + path);
    }
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(len * sizeof(float)));
    ++idx;
  });
  if (!in) throw FormatError("truncated checkpoint parameters: " + path);

  CheckpointedModel model(config, std::make_shared<const Vocab>(std::move(vocab)), std::move(params));
  const json& meta = header.at("meta");
  model.step = meta.at("step").get<std::size_t>();
  model.tokens_seen = meta.at("tokens_seen").get<std::size_t>();
  model.epoch = meta.at("epoch").get<std::size_t>();
  model.pos_in_epoch = meta.at("pos_in_epoch").get<std::size_t>();
  model.train_loss = meta.at("train_loss").get<double>();
  model.val_loss = meta.at("val_loss").get<double>();
  model.lr = meta.at("lr").get<double>();
  return model;
}

}  // namespace polarity
