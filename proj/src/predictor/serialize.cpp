#include "rosa/predictor/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "rosa/error.hpp"

namespace rosa {

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
    throw Error(ErrorCode::BadFormat, "parameter file truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void write_parameters(std::ostream& os, const ModelParameters& p) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : p.tensors()) tensors.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  const std::string header = nlohmann::json{{"config", to_json(p.config())}, {"tensors", tensors}}.dump();
  os.write("ROSA", 4);
  put_le<std::uint32_t>(os, kParamFormatVersion);
  put_le<std::uint64_t>(os, header.size());
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  put_le<std::uint64_t>(os, p.size());
  for (double v : p.data()) put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
}

ModelParameters read_parameters(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "ROSA", 4) != 0)
    throw Error(ErrorCode::BadFormat, "not a parameter file (bad magic)");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kParamFormatVersion)
    throw Error(ErrorCode::BadFormat, "unsupported parameter format version " + std::to_string(version));
  const auto len = get_le<std::uint64_t>(is);
  if (len > (1u << 24)) throw Error(ErrorCode::BadFormat, "implausible header length");
  std::string header(len, '\0');
  if (!is.read(header.data(), static_cast<std::streamsize>(len)))
    throw Error(ErrorCode::BadFormat, "parameter file truncated");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("bad parameter header: ") + e.what());
  }
  ModelParameters p = ModelParameters::zeros(model_config_from_json(j.at("config")));
  const auto& table = j.at("tensors");
  if (table.size() != p.tensors().size()) throw Error(ErrorCode::BadFormat, "tensor table does not match config");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& t = p.tensors()[i];
    if (table[i].at("name") != t.name || table[i].at("rows") != t.rows || table[i].at("cols") != t.cols)
      throw Error(ErrorCode::BadFormat, "tensor " + t.name + " does not match config");
  }
  const auto count = get_le<std::uint64_t>(is);
  if (count != p.size()) throw Error(ErrorCode::BadFormat, "value count does not match config");
  for (double& v : p.data()) v = std::bit_cast<double>(get_le<std::uint64_t>(is));
  if (!p.all_finite()) throw Error(ErrorCode::BadFormat, "parameter file contains non-finite values");
  return p;
}

void save_parameters(const std::string& path, const ModelParameters& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_parameters(os, p);
  if (!os) throw Error(ErrorCode::IoError, "write failed: " + path);
}

ModelParameters load_parameters(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
  return read_parameters(is);
}

}  // namespace rosa
