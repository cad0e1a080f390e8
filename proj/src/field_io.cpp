#include "chess/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "chess/error.hpp"
#include "json.hpp"

namespace chess {

namespace {

std::string axis_order(std::size_t n) {
  std::string s;
  for (std::size_t a = 1; a <= n; ++a) {
    if (a > 1) s += ",";
    s += "x" + std::to_string(a) + ",y" + std::to_string(a);
  }
  return s;
}

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return r;
}

}  // namespace

std::filesystem::path payload_path(const std::filesystem::path& sidecar) {
  std::filesystem::path p = sidecar;
  p.replace_extension(".f64");
  return p;
}

void write_field(const std::filesystem::path& sidecar, const Field& f) {
  const TorusGrid& g = f.grid();
  nlohmann::ordered_json meta = {
      {"magic", "chess-field"}, {"version", 1},           {"n", g.n()},
      {"N", g.N()},             {"axis_order", axis_order(g.n())}, {"dtype", "f64"},
      {"endian", "little"},     {"layout", "row-major"}};
  std::ofstream js(sidecar);
  if (!js) throw IoError("cannot write " + sidecar.string());
  js << meta.dump(2) << "\n";

  std::string bytes(f.size() * 8, '\0');
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::uint64_t le = to_le(std::bit_cast<std::uint64_t>(f[i]));
    std::memcpy(bytes.data() + 8 * i, &le, 8);
  }
  const auto pay = payload_path(sidecar);
  std::ofstream bin(pay, std::ios::binary);
  if (!bin) throw IoError("cannot write " + pay.string());
  bin.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!bin) throw IoError("short write on " + pay.string());
}

Field read_field(const std::filesystem::path& sidecar) {
  std::ifstream js(sidecar);
  if (!js) throw IoError("cannot read " + sidecar.string());
  nlohmann::json meta;
  try {
    js >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(sidecar.string() + ": " + e.what());
  }
  auto expect = [&](const char* key, const nlohmann::json& want) {
    if (!meta.contains(key) || meta[key] != want)
      throw ValidationError(sidecar.string() + ": bad or missing \"" + key + "\"");
  };
  expect("magic", "chess-field");
  expect("version", 1);
  expect("dtype", "f64");
  expect("endian", "little");
  expect("layout", "row-major");
  if (!meta.contains("n") || !meta["n"].is_number_unsigned() || !meta.contains("N") ||
      !meta["N"].is_number_unsigned())
    throw ValidationError(sidecar.string() + ": n and N must be positive integers");
  const std::size_t n = meta["n"].get<std::size_t>();
  const std::size_t N = meta["N"].get<std::size_t>();
  const TorusGrid grid(n, N);
  expect("axis_order", axis_order(n));

  const auto pay = payload_path(sidecar);
  std::ifstream bin(pay, std::ios::binary);
  if (!bin) throw IoError("cannot read " + pay.string());
  std::ostringstream buf;
  buf << bin.rdbuf();
  const std::string bytes = buf.str();
  if (bytes.size() != grid.size() * 8)
    throw ValidationError(pay.string() + ": payload has " + std::to_string(bytes.size()) +
                          " bytes, expected " + std::to_string(grid.size() * 8));
  std::vector<double> data(grid.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint64_t le;
    std::memcpy(&le, bytes.data() + 8 * i, 8);
    data[i] = std::bit_cast<double>(to_le(le));
  }
  return Field(grid, std::move(data));
}

}  // namespace chess
