#include "ets/checkpoint.hpp"

#include "ets/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ets {

namespace {

constexpr const char* kMagic = "ETS-CHECKPOINT 1";

void write_doubles(std::ofstream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::ifstream& in, double* p, std::size_t n, const std::string& path) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw ConfigError("checkpoint: truncated payload in '" + path + "'");
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  nlohmann::json h;
  h["config"] = c.config_text;
  char fp[20];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(c.fingerprint));
  h["fingerprint"] = fp;
  h["step"] = c.step;
  h["t"] = c.state.t;
  h["l_max"] = c.state.l_max;
  h["radial_size"] = c.state.radial_size;
  h["n_acceleration"] = c.acceleration.size();
  h["n_k"] = c.k_used.size();

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("checkpoint: cannot write '" + tmp + "'");
    out << kMagic << "\n" << h.dump() << "\n";
    static_assert(sizeof(cplx) == 2 * sizeof(double));
    write_doubles(out, reinterpret_cast<const double*>(c.state.coeffs.data()),
                  2 * c.state.coeffs.size());
    if (c.field.size() != c.acceleration.size() || c.k_error.size() != c.k_used.size()) {
      throw DimensionError("checkpoint: trace lengths disagree");
    }
    write_doubles(out, c.acceleration.data(), c.acceleration.size());
    write_doubles(out, c.field.data(), c.field.size());
    std::vector<double> k(c.k_used.begin(), c.k_used.end());
    write_doubles(out, k.data(), k.size());
    write_doubles(out, c.k_error.data(), c.k_error.size());
    if (!out) throw ConfigError("checkpoint: write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint: cannot open '" + path + "'");
  std::string magic, header;
  std::getline(in, magic);
  if (magic != kMagic) throw ConfigError("checkpoint: '" + path + "' is not a checkpoint");
  std::getline(in, header);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("checkpoint: bad header: ") + e.what());
  }
  Checkpoint c;
  try {
    c.config_text = h.at("config").get<std::string>();
    c.fingerprint = std::stoull(h.at("fingerprint").get<std::string>(), nullptr, 16);
    c.step = h.at("step").get<long>();
    const int l_max = h.at("l_max").get<int>();
    const int radial = h.at("radial_size").get<int>();
    if (l_max < 0 || radial < 1) throw ConfigError("checkpoint: bad dimensions");
    c.state = StateVector(l_max, radial, h.at("t").get<double>());
    c.acceleration.resize(h.at("n_acceleration").get<std::size_t>());
    c.k_used.resize(h.at("n_k").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("checkpoint: bad header: ") + e.what());
  }
  read_doubles(in, reinterpret_cast<double*>(c.state.coeffs.data()),
               2 * c.state.coeffs.size(), path);
  read_doubles(in, c.acceleration.data(), c.acceleration.size(), path);
  c.field.resize(c.acceleration.size());
  read_doubles(in, c.field.data(), c.field.size(), path);
  std::vector<double> k(c.k_used.size());
  read_doubles(in, k.data(), k.size(), path);
  for (std::size_t i = 0; i < k.size(); ++i) c.k_used[i] = static_cast<int>(k[i]);
  c.k_error.resize(c.k_used.size());
  read_doubles(in, c.k_error.data(), c.k_error.size(), path);
  return c;
}

}  // namespace ets
