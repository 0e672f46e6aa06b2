#include "liouvtraj/io.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace liouvtraj {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  ensure(in.good(), "cannot open JSON file: " + path);
  Json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  ensure(out.good(), "cannot open output file: " + path);
  out << content;
  out.flush();
  ensure(out.good(), "write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

Json spectrum_to_json(const SpectralData& sd) {
  Json j;
  j["dim"] = sd.dim;
  j["condition_number"] = sd.condition_number;
  j["biorth_residual"] = sd.biorth_residual;
  j["spectral_center"] = {{"re", sd.spectral_center.real()},
                          {"im", sd.spectral_center.imag()}};
  j["steady_index"] = sd.steady_index;
  Json arr = Json::array();
  for (long a = 0; a < sd.size(); ++a) {
    arr.push_back({{"re_lambda", sd.eigenvalues(a).real()},
                   {"im_lambda", sd.eigenvalues(a).imag()},
                   {"group_id", sd.group_of[a]},
                   {"conj_partner", sd.conj_partner[a]}});
  }
  j["eigenvalues"] = std::move(arr);
  return j;
}

namespace {

void write_operator_blocks(const std::string& path, const SpectralData& sd,
                           bool right_side) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  ensure(out.good(), "cannot open output file: " + path);
  const long d = sd.dim;
  std::vector<double> block(2 * d * d);
  for (long a = 0; a < sd.size(); ++a) {
    const Matrix op = right_side ? sd.right_op(a) : sd.left_op(a);
    long k = 0;
    for (long i = 0; i < d; ++i) {
      for (long j = 0; j < d; ++j) {
        block[k++] = op(i, j).real();
        block[k++] = op(i, j).imag();
      }
    }
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(double)));
  }
  out.flush();
  ensure(out.good(), "write failed: " + path);
}

}  // namespace

void write_eigenoperator_blobs(const std::string& dir, const std::string& base,
                               const SpectralData& sd) {
  std::filesystem::create_directories(dir);
  const std::string right_file = base + "_right.bin";
  const std::string left_file = base + "_left.bin";
  write_operator_blocks(dir + "/" + right_file, sd, true);
  write_operator_blocks(dir + "/" + left_file, sd, false);
  Json manifest;
  manifest["dtype"] = "complex128";
  manifest["byte_order"] = "little-endian";
  manifest["layout"] = "row-major";
  manifest["shape"] = {sd.size(), sd.dim, sd.dim};
  manifest["right_file"] = right_file;
  manifest["left_file"] = left_file;
  manifest["order"] = "eigenvalue order of the spectrum JSON";
  save_json_file(dir + "/" + base + "_manifest.json", manifest);
}

std::string quasiprob_csv(const SpectralData& sd, const Vector& p) {
  require(p.size() == sd.size(), "quasiprob_csv: size mismatch");
  std::string out = "alpha,re_lambda,im_lambda,re_p,im_p,abs_p\n";
  for (long a = 0; a < sd.size(); ++a) {
    out += std::to_string(a);
    out += ',';
    out += format_float(sd.eigenvalues(a).real());
    out += ',';
    out += format_float(sd.eigenvalues(a).imag());
    out += ',';
    out += format_float(p(a).real());
    out += ',';
    out += format_float(p(a).imag());
    out += ',';
    out += format_float(std::abs(p(a)));
    out += '\n';
  }
  return out;
}

}  // namespace liouvtraj
