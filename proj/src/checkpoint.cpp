// Copyright 2026 The boltzdrift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boltzdrift/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "boltzdrift/errors.hpp"

namespace boltzdrift {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  }
  template <typename T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put(const Vec& v) {
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  void bytes(const char* p, std::size_t n) {
    out_.write(p, static_cast<std::streamsize>(n));
  }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw InvalidInput("write to '" + path.string() + "' failed");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw InvalidInput("cannot open checkpoint '" + path.string() + "'");
  }
  template <typename T>
  T get() {
    T v{};
    read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
  }
  void get(Vec& v) {
    read(reinterpret_cast<char*>(v.data()),
         static_cast<std::size_t>(v.size()) * sizeof(double));
  }
  void read(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw InvalidInput("checkpoint '" + path_.string() + "' is truncated");
  }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::ifstream in_;
  std::filesystem::path path_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  const Architecture& a = ckpt.params.arch();
  const Vec& values = ckpt.params.values();
  {
    Writer w(path);
    w.bytes(kCheckpointMagic, sizeof(kCheckpointMagic));
    w.put<std::uint32_t>(kCheckpointVersion);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(a.latent_dim));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(a.hidden_width));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(a.num_hidden_blocks));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(a.output_dim));
    w.put<std::uint32_t>(kActivationSilu);
    w.put<std::uint64_t>(ckpt.seed);
    w.put<std::uint64_t>(static_cast<std::uint64_t>(values.size()));
    w.put(values);
    w.put<std::uint32_t>(ckpt.optimizer ? 1U : 0U);
    if (ckpt.optimizer) {
      const AdamState& s = *ckpt.optimizer;
      if (s.m.size() != values.size() || s.v.size() != values.size())
        throw InvalidInput("save_checkpoint: optimizer state shape mismatch");
      w.put<std::int64_t>(s.step);
      w.put<double>(s.lr);
      w.put<double>(s.beta1);
      w.put<double>(s.beta2);
      w.put<double>(s.epsilon);
      w.put(s.m);
      w.put(s.v);
    }
    w.finish(path);
  }

  nlohmann::ordered_json side;
  side["format"] = "boltzdrift-checkpoint";
  side["version"] = kCheckpointVersion;
  side["arch"] = {{"latent_dim", a.latent_dim},
                  {"hidden_width", a.hidden_width},
                  {"num_hidden_blocks", a.num_hidden_blocks},
                  {"output_dim", a.output_dim},
                  {"activation", "silu"},
                  {"block", "h + W2 silu(W1 h + b1) + b2"}};
  side["seed"] = ckpt.seed;
  side["param_count"] = values.size();
  side["has_optimizer_state"] = ckpt.optimizer.has_value();
  if (ckpt.optimizer) side["adam_step"] = ckpt.optimizer->step;
  std::filesystem::path json_path = path;
  json_path += ".json";
  std::ofstream js(json_path, std::ios::trunc);
  if (!js) throw InvalidInput("cannot write '" + json_path.string() + "'");
  js << side.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<Architecture>& expected) {
  Reader r(path);
  char magic[sizeof(kCheckpointMagic)];
  r.read(magic, sizeof(magic));
  if (std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw InvalidInput("'" + path.string() + "' is not a boltzdrift checkpoint");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw InvalidInput("unsupported checkpoint version " + std::to_string(version));

  Architecture a;
  a.latent_dim = static_cast<int>(r.get<std::uint32_t>());
  a.hidden_width = static_cast<int>(r.get<std::uint32_t>());
  a.num_hidden_blocks = static_cast<int>(r.get<std::uint32_t>());
  a.output_dim = static_cast<int>(r.get<std::uint32_t>());
  const auto activation = r.get<std::uint32_t>();
  if (activation != kActivationSilu)
    throw InvalidInput("unsupported activation code " + std::to_string(activation));
  a.validate();
  if (expected && !(*expected == a)) {
    throw InvalidInput(
        "checkpoint architecture mismatch: file has latent=" +
        std::to_string(a.latent_dim) + " width=" + std::to_string(a.hidden_width) +
        " blocks=" + std::to_string(a.num_hidden_blocks) +
        " out=" + std::to_string(a.output_dim));
  }

  Checkpoint ckpt{GeneratorParams(a), std::nullopt, 0};
  ckpt.seed = r.get<std::uint64_t>();
  const auto count = r.get<std::uint64_t>();
  if (count != static_cast<std::uint64_t>(ckpt.params.values().size()))
    throw InvalidInput("checkpoint parameter count does not match its header");
  r.get(ckpt.params.values());

  const auto has_opt = r.get<std::uint32_t>();
  if (has_opt > 1) throw InvalidInput("corrupt optimizer flag in checkpoint");
  if (has_opt == 1) {
    AdamState s = AdamState::zeros(a);
    s.step = r.get<std::int64_t>();
    s.lr = r.get<double>();
    s.beta1 = r.get<double>();
    s.beta2 = r.get<double>();
    s.epsilon = r.get<double>();
    r.get(s.m);
    r.get(s.v);
    ckpt.optimizer = std::move(s);
  }
  if (!r.at_end()) throw InvalidInput("trailing bytes in checkpoint");
  if (!ckpt.params.values().allFinite())
    throw InvalidInput("checkpoint contains non-finite parameters");
  return ckpt;
}

}  // namespace boltzdrift
