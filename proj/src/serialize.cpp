#include "imh/serialize.hpp"

#include <cstring>

#include "io_bytes.hpp"

namespace imh {

namespace {

constexpr char kModelMagic[4] = {'I', 'M', 'H', '1'};
constexpr char kCodesMagic[4] = {'I', 'M', 'H', 'C'};

void write_matrix(std::ostream& out, const Matrix& m) {
  for (double v : m.data()) bytes::write_f64(out, v);
}

Matrix read_matrix(std::istream& in, std::size_t rows, std::size_t cols,
                   const char* field) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = bytes::read_f64(in, field);
  return m;
}

void read_magic(std::istream& in, const char expect[4], const char* what) {
  char got[4];
  bytes::read_exact(in, got, 4, "magic");
  if (std::memcmp(got, expect, 4) != 0)
    throw FormatError(std::string(what) + ": bad magic");
}

}  // namespace

void save_model(const HashModel& model, std::ostream& out) {
  model.validate();
  out.write(kModelMagic, 4);
  bytes::write_u8(out, static_cast<std::uint8_t>(model.backend));
  bytes::write_u8(out, static_cast<std::uint8_t>(model.base.method));
  bytes::write_u32(out, static_cast<std::uint32_t>(model.base.size()));
  bytes::write_u32(out, static_cast<std::uint32_t>(model.base.dim()));
  bytes::write_u32(out, static_cast<std::uint32_t>(model.embed_dim()));
  bytes::write_u32(out, static_cast<std::uint32_t>(model.k));
  bytes::write_f64(out, model.sigma);
  bytes::write_u8(out, model.base_embedding.centered ? 1 : 0);
  write_matrix(out, model.base.centers);
  write_matrix(out, model.base_embedding.coords);
  for (double v : model.embedding_means) bytes::write_f64(out, v);

  bytes::write_u8(out, model.base.assign_dist.empty() ? 0 : 1);
  if (!model.base.assign_dist.empty()) {
    bytes::write_u64(out, model.base.assign_dist.size());
    for (double v : model.base.assign_dist) bytes::write_f64(out, v);
  }
  bytes::write_u8(out, model.base.class_of_center.empty() ? 0 : 1);
  if (!model.base.class_of_center.empty())
    for (int c : model.base.class_of_center)
      bytes::write_u32(out, static_cast<std::uint32_t>(c));
  bytes::write_u8(out, model.has_projection() ? 1 : 0);
  if (model.has_projection()) {
    bytes::write_u32(out, static_cast<std::uint32_t>(model.projection.cols()));
    write_matrix(out, model.projection);
  }
  bytes::write_u8(out, model.has_rotation() ? 1 : 0);
  if (model.has_rotation()) write_matrix(out, model.rotation);
  bytes::check_written(out, "model");
}

void save_model(const HashModel& model, const std::filesystem::path& path) {
  auto out = bytes::open_output(path);
  save_model(model, out);
}

HashModel load_model(std::istream& in) {
  read_magic(in, kModelMagic, "model file");
  HashModel model;
  const auto backend = bytes::read_u8(in, "backend");
  if (backend > 3) throw FormatError("model file: unknown backend code");
  model.backend = static_cast<Backend>(backend);
  const auto method = bytes::read_u8(in, "base method");
  if (method > 3) throw FormatError("model file: unknown base method code");
  model.base.method = static_cast<BaseMethod>(method);
  const std::size_t m = bytes::read_u32(in, "center count");
  const std::size_t d = bytes::read_u32(in, "input dimension");
  const std::size_t r = bytes::read_u32(in, "embedding dimension");
  if (m == 0 || d == 0 || r == 0)
    throw FormatError("model file: zero dimension in header");
  model.k = static_cast<int>(bytes::read_u32(in, "neighbor count"));
  model.sigma = bytes::read_f64(in, "sigma");
  const auto centered = bytes::read_u8(in, "centered flag");
  if (centered > 1) throw FormatError("model file: invalid centered flag");
  model.base_embedding.centered = centered == 1;
  model.base.centers = read_matrix(in, m, d, "centers");
  model.base_embedding.coords = read_matrix(in, m, r, "base embedding");
  model.embedding_means.resize(r);
  for (double& v : model.embedding_means)
    v = bytes::read_f64(in, "embedding means");

  if (bytes::read_u8(in, "assignment flag")) {
    const std::uint64_t n = bytes::read_u64(in, "assignment count");
    model.base.assign_dist.resize(n);
    for (double& v : model.base.assign_dist)
      v = bytes::read_f64(in, "assignment distances");
  }
  if (bytes::read_u8(in, "class flag")) {
    model.base.class_of_center.resize(m);
    for (int& c : model.base.class_of_center)
      c = static_cast<int>(bytes::read_u32(in, "center classes"));
  }
  if (bytes::read_u8(in, "projection flag")) {
    const std::size_t r_code = bytes::read_u32(in, "projection width");
    if (r_code == 0) throw FormatError("model file: zero projection width");
    model.projection = read_matrix(in, r, r_code, "projection");
  }
  if (bytes::read_u8(in, "rotation flag")) {
    const std::size_t r_code = model.has_projection() ? model.projection.cols() : r;
    model.rotation = read_matrix(in, r_code, r_code, "rotation");
  }
  bytes::expect_eof(in, "model file");
  model.validate();
  return model;
}

HashModel load_model(const std::filesystem::path& path) {
  auto in = bytes::open_input(path);
  return load_model(in);
}

void save_codes(const BinaryCodes& codes, std::ostream& out) {
  out.write(kCodesMagic, 4);
  bytes::write_u64(out, codes.size());
  bytes::write_u32(out, static_cast<std::uint32_t>(codes.bits()));
  for (std::uint64_t w : codes.data()) bytes::write_u64(out, w);
  bytes::check_written(out, "codes");
}

void save_codes(const BinaryCodes& codes, const std::filesystem::path& path) {
  auto out = bytes::open_output(path);
  save_codes(codes, out);
}

BinaryCodes load_codes(std::istream& in) {
  read_magic(in, kCodesMagic, "code file");
  const std::uint64_t count = bytes::read_u64(in, "code count");
  const std::uint32_t bits = bytes::read_u32(in, "code width");
  if (bits == 0) throw FormatError("code file: zero code width");
  BinaryCodes codes(count, bits);
  for (std::uint64_t& w : codes.data()) w = bytes::read_u64(in, "code words");
  bytes::expect_eof(in, "code file");
  if (!codes.pad_bits_zero())
    throw FormatError("code file: nonzero pad bits");
  return codes;
}

BinaryCodes load_codes(const std::filesystem::path& path) {
  auto in = bytes::open_input(path);
  return load_codes(in);
}

}  // namespace imh
